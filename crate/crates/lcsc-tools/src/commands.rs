//! The `validate`, `analyze` and `numerics` commands, as functions from
//! inputs to reports.

use std::fmt::Display;

use lcsc_core::alignment;
use lcsc_core::germ::{GermContext, GermIndex};
use lcsc_core::operator::{self, OperatorError};
use lcsc_core::spectrum::Spectrum;
use lcsc_core::wiener_hopf::{
    free_group_ball, lattice_box, verify_right_quotient, wh_membership, wiener_hopf, CertificateKind, GroupModel,
    Membership, Truncation,
};
use lcsc_core::zigzag::{generate_semigroup, DEFAULT_SEMIGROUP_LIMIT};
use lcsc_core::{Obj, SmallCategory, Totality};
use serde_json::{json, Value};

use crate::fixture::Fixture;
use crate::format::Document;
use crate::report::{InputInfo, Report, Status};

/// Where a category comes from.
#[derive(Debug, Clone)]
pub enum Input {
    File { path: String, bytes: Vec<u8> },
    Fixture(Fixture),
}

impl Input {
    pub fn info(&self) -> InputInfo {
        match self {
            Input::File { path, bytes } => InputInfo::new(path.clone(), bytes),
            Input::Fixture(f) => {
                let name = f.to_string();
                InputInfo::new(name.clone(), name.as_bytes())
            }
        }
    }
}

enum Loaded {
    Category(SmallCategory),
    Amalgam(lcsc_core::amalgam::Amalgam),
}

/// Parse problems become `Err(report)` with exit code 2; structural
/// problems become `Ok(Err(message))`.
fn load(command: &str, input: &Input) -> Result<Result<Loaded, String>, Report> {
    match input {
        Input::Fixture(f) => f
            .category()
            .map(|c| Ok(Loaded::Category(c)))
            .map_err(|e| Report::error(command, input.info(), "cli-io", e.to_string())),
        Input::File { bytes, .. } => {
            let doc: Document = serde_json::from_slice(bytes).map_err(|e| {
                let msg = format!("line {} column {}: {e}", e.line(), e.column());
                Report::error(command, input.info(), "cli-io", msg)
            })?;
            Ok(match doc {
                Document::Category(spec) => spec.build().map(Loaded::Category).map_err(|e| e.to_string()),
                Document::Amalgam(spec) => spec.build().map(Loaded::Amalgam).map_err(|e| e.to_string()),
            })
        }
    }
}

fn mode_json(cat: &SmallCategory) -> Value {
    match cat.totality() {
        Totality::Total => json!({ "mode": "total" }),
        Totality::Bounded(b) => json!({ "mode": "bounded", "bound": b }),
    }
}

fn validate_category(cat: &SmallCategory) -> (bool, Value) {
    let report = cat.validate();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "kind": v.kind(), "detail": v.describe(cat) }))
        .collect();
    let value = json!({
        "objects": cat.num_objects(),
        "morphisms": cat.num_morphisms(),
        "carrier": mode_json(cat),
        "valid": report.is_valid(),
        "violations": violations,
    });
    (report.is_valid(), value)
}

pub fn validate(input: &Input) -> Report {
    const CMD: &str = "validate";
    let loaded = match load(CMD, input) {
        Ok(l) => l,
        Err(r) => return r,
    };
    let (ok, result) = match loaded {
        Err(msg) => (
            false,
            json!({ "valid": false, "violations": [{ "kind": "structure", "detail": msg }] }),
        ),
        Ok(Loaded::Category(cat)) => validate_category(&cat),
        Ok(Loaded::Amalgam(am)) => {
            let parts: Vec<(bool, Value)> = am.components().iter().map(validate_category).collect();
            let ok = parts.iter().all(|p| p.0);
            let comps: Vec<Value> = parts.into_iter().map(|p| p.1).collect();
            (
                ok,
                json!({ "valid": ok, "classes": am.num_classes(), "components": comps }),
            )
        }
    };
    Report::new(CMD, input.info(), Status::from_bool(ok), result)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub spectrum: bool,
    pub groupoid: Option<GermIndex>,
    pub boundary: bool,
    pub hausdorff: bool,
    pub align: bool,
}

fn fail(input: &Input, module: &str, e: impl Display) -> Report {
    Report::error("analyze", input.info(), module, e.to_string())
}

pub fn analyze(input: &Input, opts: AnalyzeOptions) -> Report {
    const CMD: &str = "analyze";
    let cat = match load(CMD, input) {
        Err(r) => return r,
        Ok(Err(msg)) => return fail(input, "category-core", msg),
        Ok(Ok(Loaded::Amalgam(_))) => return fail(input, "cli-io", "analyze takes a category document"),
        Ok(Ok(Loaded::Category(c))) => c,
    };
    if let Err(e) = cat.require_total() {
        return fail(input, "category-core", e);
    }
    let validation = cat.validate();
    if !validation.is_valid() {
        return Report::new(CMD, input.info(), Status::Fail, validate_category(&cat).1);
    }
    let obj = |v: Obj| cat.object_name(v).to_string();
    let mut out = serde_json::Map::new();
    out.insert(
        "category".into(),
        json!({ "objects": cat.num_objects(), "morphisms": cat.num_morphisms() }),
    );
    let mut ok = true;

    if opts.align {
        match alignment::is_finitely_aligned(&cat) {
            Ok(r) => {
                let pairs: Vec<Value> = r
                    .pairs
                    .iter()
                    .map(|&(a, b, n)| json!({ "alpha": cat.name(a), "beta": cat.name(b), "vee": n }))
                    .collect();
                out.insert(
                    "alignment".into(),
                    json!({ "finitely_aligned": r.finitely_aligned, "max_vee": r.max_vee, "pairs": pairs }),
                );
            }
            Err(e) => return fail(input, "alignment", e),
        }
    }

    let needs_spectrum = opts.spectrum || opts.boundary || opts.groupoid.is_some() || opts.hausdorff;
    if !needs_spectrum {
        return Report::new(CMD, input.info(), Status::Pass, Value::Object(out));
    }
    let spec = match Spectrum::compute(&cat) {
        Ok(s) => s,
        Err(e) => return fail(input, "spectrum", e),
    };
    if opts.spectrum {
        let vertices: Vec<Value> = cat
            .objects()
            .map(|v| {
                let fam = spec.family(v);
                let points: Vec<Value> = spec
                    .at(v)
                    .map(|p| {
                        let pt = spec.point(p);
                        let atom: Vec<&str> = spec.atom(p).ones().map(|i| cat.name(cat.morphisms().nth(i).expect("index"))).collect();
                        json!({
                            "id": p,
                            "atom": atom,
                            "least_set": fam.sets[pt.dset].witness.display(&cat),
                            "filter_size": pt.filter.sets.len(),
                        })
                    })
                    .collect();
                json!({ "vertex": obj(v), "zigzag_sets": fam.len(), "points": points })
            })
            .collect();
        out.insert("spectrum".into(), json!({ "points": spec.len(), "vertices": vertices }));
    }
    let mut boundary_points = None;
    if opts.boundary {
        let mut per_vertex = Vec::new();
        let mut all = Vec::new();
        for v in cat.objects() {
            match spec.boundary_points(v) {
                Ok(b) => {
                    per_vertex.push(json!({ "vertex": obj(v), "points": b.clone(), "count": b.len() }));
                    all.extend(b);
                }
                Err(e) => return fail(input, "spectrum", e),
            }
        }
        out.insert(
            "boundary".into(),
            json!({ "count": all.len(), "closure_matches_criterion": true, "vertices": per_vertex }),
        );
        boundary_points = Some(all);
    }
    if opts.groupoid.is_some() || opts.hausdorff {
        let sg = match generate_semigroup(&cat, DEFAULT_SEMIGROUP_LIMIT) {
            Ok(s) => s,
            Err(e) => return fail(input, "zigzag-semigroup", e),
        };
        let ctx = GermContext::new(&cat, &sg, &spec);
        let indices: Vec<GermIndex> = match opts.groupoid {
            Some(i) => vec![i],
            None => vec![GermIndex::One, GermIndex::Two],
        };
        let mut groupoids = Vec::new();
        for i in indices {
            let g = match ctx.build_groupoid(i) {
                Ok(g) => g,
                Err(e) => return fail(input, "germ-groupoid", e),
            };
            let verified = g.verify().is_ok();
            ok &= verified;
            let mut entry = serde_json::Map::new();
            entry.insert("index".into(), json!(if i == GermIndex::One { 1 } else { 2 }));
            entry.insert("germs".into(), json!(g.len()));
            entry.insert("units".into(), json!(spec.len()));
            entry.insert("axioms_hold".into(), json!(verified));
            if opts.hausdorff {
                entry.insert("hausdorff".into(), json!(ctx.is_hausdorff(&g)));
            }
            if let Some(b) = &boundary_points {
                entry.insert("boundary_germs".into(), json!(g.restrict_to_points(b).len()));
            }
            groupoids.push(Value::Object(entry));
        }
        out.insert("groupoids".into(), Value::Array(groupoids));
        if opts.hausdorff {
            let c2 = ctx.condition_two();
            let ce = c2.counterexample.map(|(a, m)| json!([cat.name(a), cat.name(m)]));
            out.insert(
                "condition_two".into(),
                json!({ "holds": c2.holds, "counterexample": ce }),
            );
        }
    }
    Report::new(CMD, input.info(), Status::from_bool(ok), Value::Object(out))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Numerics {
    ShiftBound(usize),
    Separation { p: usize, m: usize, trials: usize, seed: u64 },
    WienerHopf { model: Fixture, t: String, bound: usize },
}

impl Numerics {
    fn describe(&self) -> String {
        match self {
            Numerics::ShiftBound(p) => format!("shift-bound {p}"),
            Numerics::Separation { p, m, trials, seed } => format!("separation {p} {m} {trials} {seed}"),
            Numerics::WienerHopf { model, t, bound } => format!("wh {model} {t} {bound}"),
        }
    }
}

fn operator_error(cmd: &str, info: InputInfo, e: OperatorError) -> Report {
    Report::error(cmd, info, "operator-lab", e.to_string())
}

pub fn numerics(job: &Numerics) -> Report {
    const CMD: &str = "numerics";
    let desc = job.describe();
    let info = InputInfo::new(desc.clone(), desc.as_bytes());
    match job {
        Numerics::ShiftBound(p) => match operator::shift_spectral_bound(*p) {
            Ok(v) => {
                let expected = -(core::f64::consts::PI / *p as f64).cos();
                let tol = operator::DEFAULT_TOLERANCE;
                let ok = (v - expected).abs() <= tol;
                let result = json!({ "p": p, "min_eigenvalue": v, "expected": expected, "tolerance": tol });
                Report::new(CMD, info, Status::from_bool(ok), result)
            }
            Err(e) => operator_error(CMD, info, e),
        },
        Numerics::Separation { p, m, trials, seed } => match operator::separation_test(*p, *m, *trials, *seed) {
            Ok(r) => {
                let structured: Vec<Value> = r
                    .structured
                    .iter()
                    .map(|s| json!({ "vector": s.name, "pairings": s.pairings, "lhs": s.lhs }))
                    .collect();
                let result = json!({
                    "p": r.p, "m": r.m, "trials": r.trials, "seed": r.seed,
                    "c": r.c, "tolerance": r.tolerance,
                    "min_lhs": r.min_lhs, "argmin": r.argmin,
                    "structured": structured,
                });
                Report::new(CMD, info, Status::from_bool(r.passed), result)
            }
            Err(e) => operator_error(CMD, info, e),
        },
        Numerics::WienerHopf { model, t, bound } => match *model {
            Fixture::Nsq(_) => wh_report(CMD, info, &lattice_box(2, *bound as i64), t),
            Fixture::Fg(n, _) => wh_report(CMD, info, &free_group_ball(n, *bound), t),
            other => Report::error(CMD, info, "cli-io", format!("--wh needs NSQ(L) or FG(n,L), got {other}")),
        },
    }
}

fn wh_report<G: GroupModel>(cmd: &str, info: InputInfo, tr: &Truncation<G>, t: &str) -> Report {
    let m = &tr.model;
    let t = match m.parse(t) {
        Ok(t) => t,
        Err(e) => return Report::error(cmd, info, "operator-lab", e.to_string()),
    };
    let wt = wiener_hopf(tr, &t);
    let nonzero = !wt.op.is_zero();
    let mut result = serde_json::Map::new();
    result.insert("t".into(), json!(m.display(&t)));
    result.insert("dimension".into(), json!(tr.dim()));
    result.insert("nonzero".into(), json!(nonzero));
    result.insert("tolerance".into(), json!(operator::DEFAULT_TOLERANCE));
    let ok = match wh_membership(tr, &t, tr.dim()) {
        Membership::Found(c) => {
            let family: Vec<Vec<[String; 2]>> = c
                .family
                .iter()
                .map(|z| z.iter().map(|(a, b)| [m.display(a), m.display(b)]).collect())
                .collect();
            let kind = match c.kind {
                CertificateKind::LeftQuotient => "left-quotient",
                CertificateKind::RightQuotient => "right-quotient",
                CertificateKind::Union => "union",
            };
            let mut dev = c.deviation;
            if c.kind == CertificateKind::RightQuotient {
                let (mu, nu) = (&c.family[0][0].1, &c.family[0][1].0);
                let product_dev = verify_right_quotient(tr, &t, mu, nu);
                result.insert("product_deviation".into(), json!(product_dev));
                dev = dev.max(product_dev);
            }
            result.insert(
                "certificate".into(),
                json!({ "kind": kind, "family": family, "deviation": c.deviation, "edge_columns": c.edge_columns }),
            );
            dev <= operator::DEFAULT_TOLERANCE
        }
        Membership::NotFound { candidates } => {
            result.insert("certificate".into(), Value::Null);
            result.insert("candidates".into(), json!(candidates));
            // Zero W_t with no candidate is the expected verdict for t outside ΛΛ⁻¹.
            !nonzero
        }
    };
    Report::new(cmd, info, Status::from_bool(ok), Value::Object(result))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(s: &str) -> Input {
        Input::Fixture(s.parse().unwrap())
    }

    fn file(text: &str) -> Input {
        Input::File {
            path: "test.json".into(),
            bytes: text.as_bytes().to_vec(),
        }
    }

    #[test]
    fn validate_exit_codes() {
        let par = crate::format::CategorySpec::from_category(&lcsc_core::fixtures::par());
        let good = serde_json::to_string(&par).unwrap();
        assert_eq!(validate(&file(&good)).code(), 0);
        let mut broken = par.clone();
        broken.compose.push(["u".into(), "f".into(), "g".into()]);
        let r = validate(&file(&serde_json::to_string(&broken).unwrap()));
        assert_eq!(r.code(), 1, "{}", r.to_json());
        assert_eq!(validate(&file("{ not json")).code(), 2);
    }

    #[test]
    fn group_groupoids() {
        for (i, want) in [(GermIndex::One, 1), (GermIndex::Two, 2)] {
            let r = analyze(&fixture("GROUP(2)"), AnalyzeOptions { groupoid: Some(i), ..Default::default() });
            assert_eq!(r.code(), 0);
            assert_eq!(r.result["groupoids"][0]["germs"], json!(want));
        }
    }

    #[test]
    fn par_boundary_at_u() {
        let r = analyze(&fixture("PAR"), AnalyzeOptions { boundary: true, ..Default::default() });
        assert_eq!(r.result["boundary"]["vertices"][0]["vertex"], json!("u"));
        assert_eq!(r.result["boundary"]["vertices"][0]["count"], json!(2));
        assert_eq!(r.result["boundary"]["count"], json!(3));
    }

    #[test]
    fn analyze_rejects_bounded() {
        let r = analyze(&fixture("NSQ(2)"), AnalyzeOptions { spectrum: true, ..Default::default() });
        assert_eq!(r.code(), 2);
        assert_eq!(r.result["error"]["module"], json!("category-core"));
    }

    #[test]
    fn numerics_reports() {
        let r = numerics(&Numerics::ShiftBound(3));
        assert_eq!(r.code(), 0);
        assert!((r.result["min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-9);
        assert_eq!(numerics(&Numerics::ShiftBound(4)).code(), 2);
        let wh = numerics(&Numerics::WienerHopf { model: Fixture::Nsq(1), t: "(1,-1)".into(), bound: 20 });
        assert_eq!(wh.code(), 0, "{}", wh.to_json());
        assert_eq!(wh.result["certificate"]["deviation"], json!(0.0));
        let fg = numerics(&Numerics::WienerHopf { model: Fixture::Fg(2, 3), t: "a.c1.c2'".into(), bound: 3 });
        assert_eq!(fg.code(), 0, "{}", fg.to_json());
        assert_eq!(fg.result["certificate"]["kind"], json!("right-quotient"));
    }

    #[test]
    fn reports_are_deterministic() {
        let job = Numerics::Separation { p: 3, m: 2, trials: 50, seed: 9 };
        assert_eq!(numerics(&job).to_json(), numerics(&job).to_json());
        let opts = AnalyzeOptions { spectrum: true, boundary: true, groupoid: Some(GermIndex::Two), hausdorff: true, align: true };
        assert_eq!(analyze(&fixture("KG(2)"), opts).to_json(), analyze(&fixture("KG(2)"), opts).to_json());
    }
}
