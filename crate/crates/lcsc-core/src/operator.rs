//! Finite matrix models: the regular representation on ℓ²(Λ), induced
//! representations of germ groupoids, relation checks and the numerical
//! bounds for the shift and separation examples.
//!
//! Every operator built here is a 0/1 partial permutation, so relations are
//! decided exactly on column images; the operator norm is only computed for
//! reporting the size of a failure.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::alignment::{covers_set, is_exhaustive, minimal_common_extensions};
use crate::category::{Mor, Obj, SmallCategory};
use crate::fixtures;
use crate::germ::{FiniteGroupoid, GermContext};
use crate::zigzag::{zigzag_map, InverseSemigroup, PartialMap, Zigzag};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Above this size (5)′ only enumerates families of at most three morphisms.
pub const EXHAUSTIVE_SUBSET_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error("point {0} is not a unit of the groupoid")]
    NotAUnit(usize),
    #[error("p = {0} must be odd and greater than 1")]
    BadShiftOrder(usize),
    #[error("random vector could not be normalized")]
    Normalization,
    #[error("{0}")]
    Argument(String),
}

/// A 0/1 matrix with at most one 1 in each row and column, stored as the
/// image row of each column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPerm {
    cols: Vec<Option<u32>>,
}

impl PartialPerm {
    pub fn zero(n: usize) -> Self {
        PartialPerm { cols: alloc::vec![None; n] }
    }

    pub fn identity(n: usize) -> Self {
        PartialPerm::from_fn(n, Some)
    }

    /// Orthogonal projection onto the span of the given basis vectors.
    pub fn projection(n: usize, support: &FixedBitSet) -> Self {
        PartialPerm::from_fn(n, |j| support.contains(j).then_some(j))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> Option<usize>) -> Self {
        let cols = (0..n)
            .map(|j| {
                f(j).map(|i| {
                    assert!(i < n, "image out of range");
                    i as u32
                })
            })
            .collect();
        let p = PartialPerm { cols };
        assert!(p.is_injective(), "not a partial permutation");
        p
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, j: usize) -> Option<usize> {
        self.cols[j].map(|i| i as usize)
    }

    fn is_injective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.dim());
        self.cols.iter().flatten().all(|&i| {
            let fresh = !seen.contains(i as usize);
            seen.insert(i as usize);
            fresh
        })
    }

    /// self · other.
    pub fn compose(&self, other: &PartialPerm) -> PartialPerm {
        PartialPerm {
            cols: other.cols.iter().map(|c| c.and_then(|i| self.cols[i as usize])).collect(),
        }
    }

    pub fn adjoint(&self) -> PartialPerm {
        let mut cols = alloc::vec![None; self.dim()];
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(i) = c {
                cols[*i as usize] = Some(j as u32);
            }
        }
        PartialPerm { cols }
    }

    /// Columns with a nonzero image.
    pub fn support(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.dim());
        for (j, c) in self.cols.iter().enumerate() {
            if c.is_some() {
                s.insert(j);
            }
        }
        s
    }

    pub fn is_projection(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, c)| c.is_none_or(|i| i as usize == j))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_none())
    }

    /// Lattice join of diagonal projections: projection onto the union of
    /// ranges. None if some input is not a projection.
    pub fn join(n: usize, projections: &[PartialPerm]) -> Option<PartialPerm> {
        let mut s = FixedBitSet::with_capacity(n);
        for p in projections {
            if !p.is_projection() {
                return None;
            }
            s.union_with(&p.support());
        }
        Some(PartialPerm::projection(n, &s))
    }

    /// Zeroes the given columns and rows.
    pub fn mask(&self, edge: &FixedBitSet) -> PartialPerm {
        PartialPerm {
            cols: self
                .cols
                .iter()
                .enumerate()
                .map(|(j, c)| c.filter(|&i| !edge.contains(j) && !edge.contains(i as usize)))
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(i) = c {
                m[(*i as usize, j)] = 1.0;
            }
        }
        m
    }

    /// Nonzero entries as (row, column).
    pub fn entries(&self) -> Vec<(usize, usize)> {
        self.cols
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c.map(|i| (i as usize, j)))
            .collect()
    }

    /// ⟨Tξ, ξ⟩.
    pub fn pairing(&self, xi: &[Complex64]) -> Complex64 {
        self.cols
            .iter()
            .enumerate()
            .filter_map(|(j, c)| c.map(|i| xi[j] * xi[i as usize].conj()))
            .sum()
    }
}

pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// ‖A − B‖, exactly 0 when the matrices agree.
pub fn deviation(a: &PartialPerm, b: &PartialPerm) -> f64 {
    if a == b {
        0.0
    } else {
        operator_norm(&(a.to_matrix() - b.to_matrix()))
    }
}

pub fn first_difference(a: &PartialPerm, b: &PartialPerm) -> Option<usize> {
    (0..a.dim()).find(|&j| a.cols[j] != b.cols[j])
}

/// Operators indexed by semigroup element on a common basis.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    pub labels: Vec<String>,
    pub ops: Vec<PartialPerm>,
    /// Basis vectors excluded from exact relation checks.
    pub edge: FixedBitSet,
}

impl OperatorFamily {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn op(&self, s: usize) -> &PartialPerm {
        &self.ops[s]
    }

    /// Whether e_start is cyclic: its orbit reaches every basis vector.
    pub fn is_cyclic(&self, start: usize) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.dim());
        seen.insert(start);
        let mut stack = alloc::vec![start];
        while let Some(j) = stack.pop() {
            for op in &self.ops {
                if let Some(i) = op.apply(j) {
                    if !seen.contains(i) {
                        seen.insert(i);
                        stack.push(i);
                    }
                }
            }
        }
        seen.count_ones(..) == self.dim()
    }

    /// Dimension of the linear span of the operators.
    pub fn span_dimension(&self) -> usize {
        let n = self.dim();
        let mut distinct: Vec<&PartialPerm> = self.ops.iter().filter(|p| !p.is_zero()).collect();
        distinct.sort_by(|a, b| a.cols.cmp(&b.cols));
        distinct.dedup();
        if distinct.is_empty() {
            return 0;
        }
        let rows = distinct.len();
        let mut m = DMatrix::<f64>::zeros(rows, n * n);
        for (r, p) in distinct.iter().enumerate() {
            for (i, j) in p.entries() {
                m[(r, i * n + j)] = 1.0;
            }
        }
        m.rank(DEFAULT_TOLERANCE)
    }
}

/// π_ℓ on ℓ²(Λ): T_ζ e_α = e_{φ_ζ(α)}, one matrix per semigroup element.
pub fn regular_rep(cat: &SmallCategory, sg: &InverseSemigroup) -> OperatorFamily {
    let n = cat.num_morphisms();
    let ops = sg
        .elements()
        .iter()
        .map(|e| PartialPerm::from_fn(n, |j| e.map.apply(Mor(j as u32)).map(|m| m.idx())))
        .collect();
    OperatorFamily {
        labels: cat.morphisms().map(|m| String::from(cat.name(m))).collect(),
        ops,
        edge: FixedBitSet::with_capacity(n),
    }
}

/// ⊕_{x ∈ units} Ind_x on ℓ²(Gx): T_s δ_g = δ_{[s, r(g)] g} when r(g) ∈ Â(s).
pub fn induced_rep(ctx: &GermContext<'_>, g: &FiniteGroupoid, units: &[usize]) -> Result<OperatorFamily, OperatorError> {
    for &x in units {
        g.unit(x).map_err(|_| OperatorError::NotAUnit(x))?;
    }
    let basis: Vec<usize> = (0..g.len()).filter(|&h| units.contains(&g.germ(h).source)).collect();
    let pos: hashbrown::HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &h)| (h, i)).collect();
    let n = basis.len();
    let ops = (0..ctx.sg.len())
        .map(|s| {
            PartialPerm::from_fn(n, |j| {
                let h = basis[j];
                let t = ctx.germ_of(g, s, g.germ(h).range)?;
                let th = g.compose(t, h).expect("composable germs");
                Some(pos[&th])
            })
        })
        .collect();
    let labels = basis
        .iter()
        .map(|&h| {
            let germ = g.germ(h);
            format!("[{}, x{}]", ctx.sg.witness_display(ctx.cat, germ.element), germ.source)
        })
        .collect();
    Ok(OperatorFamily {
        labels,
        ops,
        edge: FixedBitSet::with_capacity(n),
    })
}

/// Position of the unit germ at x in an induced family over `units`.
pub fn unit_vector(g: &FiniteGroupoid, units: &[usize], x: usize) -> Result<usize, OperatorError> {
    let u = g.unit(x).map_err(|_| OperatorError::NotAUnit(x))?;
    Ok((0..u).filter(|&h| units.contains(&g.germ(h).source)).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// (1) T_ζ̄ = T_ζ*.
    Adjoint,
    /// (2) T_ζ T_ζ′ = T_{ζζ′}.
    Product,
    /// (3) T_ζ*T_ζ = ⋁ T_ζᵢ*T_ζᵢ when A(ζ) = ∪A(ζᵢ).
    Union,
    /// (4)₁ T_ζ = T_ζ*T_ζ when Φ_ζ = id.
    PointFixed,
    /// (4)₂ T_ζ = T_ζ*T_ζ when φ_ζ = id.
    MapFixed,
    /// (1)′ T_α*T_α = T_{s(α)}.
    MorphismIsometry,
    /// (2)′ T_α T_β = T_{αβ}.
    MorphismProduct,
    /// (3)′ T_αT_α*T_βT_β* = ⋁_{γ∈α∨β} T_γT_γ*.
    MorphismMeet,
    /// (4)′ T_α = T_β when Φ_{(r(α),α)} = Φ_{(r(β),β)}.
    PointMapEqual,
    /// (5) T_ζ*T_ζ = ⋁ T_ζᵢ*T_ζᵢ for a cover of A(ζ).
    Tight,
    /// (5)′ T_v = ⋁_{α∈F} T_αT_α* for finite exhaustive F ⊆ vΛ.
    TightExhaustive,
}

impl Relation {
    pub fn label(&self) -> &'static str {
        match self {
            Relation::Adjoint => "(1)",
            Relation::Product => "(2)",
            Relation::Union => "(3)",
            Relation::PointFixed => "(4)1",
            Relation::MapFixed => "(4)2",
            Relation::MorphismIsometry => "(1)'",
            Relation::MorphismProduct => "(2)'",
            Relation::MorphismMeet => "(3)'",
            Relation::PointMapEqual => "(4)'",
            Relation::Tight => "(5)",
            Relation::TightExhaustive => "(5)'",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// (1)–(3), (4)₁
    One,
    /// (1)–(3), (4)₂
    Two,
    /// (1)′–(3)′
    Prime,
    /// (1)′–(4)′
    PrimeFour,
    /// (1)–(3), (4)₂, (5)
    Tight,
    /// (1)′–(4)′, (5)′
    TightPrime,
}

impl Mode {
    pub fn relations(&self) -> Vec<Relation> {
        use Relation::*;
        match self {
            Mode::One => alloc::vec![Adjoint, Product, Union, PointFixed],
            Mode::Two => alloc::vec![Adjoint, Product, Union, MapFixed],
            Mode::Prime => alloc::vec![MorphismIsometry, MorphismProduct, MorphismMeet],
            Mode::PrimeFour => alloc::vec![MorphismIsometry, MorphismProduct, MorphismMeet, PointMapEqual],
            Mode::Tight => alloc::vec![Adjoint, Product, Union, MapFixed, Tight],
            Mode::TightPrime => alloc::vec![MorphismIsometry, MorphismProduct, MorphismMeet, PointMapEqual, TightExhaustive],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Which instance of the relation failed.
    pub context: String,
    /// First basis column where the two sides differ.
    pub column: usize,
    pub label: String,
    pub lhs: PartialPerm,
    pub rhs: PartialPerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationResult {
    pub relation: Relation,
    pub checked: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub witness: Option<Witness>,
}

impl RelationResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub results: Vec<RelationResult>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }

    pub fn get(&self, r: Relation) -> Option<&RelationResult> {
        self.results.iter().find(|x| x.relation == r)
    }
}

struct Checker<'f> {
    family: &'f OperatorFamily,
    result: RelationResult,
}

impl Checker<'_> {
    fn compare(&mut self, lhs: &PartialPerm, rhs: &PartialPerm, context: impl FnOnce() -> String) {
        self.result.checked += 1;
        let (l, r) = (lhs.mask(&self.family.edge), rhs.mask(&self.family.edge));
        if l == r {
            return;
        }
        self.result.failures += 1;
        let d = deviation(&l, &r);
        if d > self.result.max_deviation {
            self.result.max_deviation = d;
        }
        if self.result.witness.is_none() {
            let column = first_difference(&l, &r).expect("sides differ");
            self.result.witness = Some(Witness {
                context: context(),
                column,
                label: self.family.labels[column].clone(),
                lhs: l,
                rhs: r,
            });
        }
    }

    /// A required projection is not one: counted as a failure.
    fn not_projection(&mut self, p: &PartialPerm, context: impl FnOnce() -> String) {
        let zero = PartialPerm::zero(p.dim());
        let diag = PartialPerm::from_fn(p.dim(), |j| p.apply(j).filter(|&i| i == j));
        self.compare(p, &diag, context);
        if self.result.failures == 0 {
            self.compare(p, &zero, || "join of non-projections".into());
        }
    }
}

/// Semigroup indices of τ^α and of the vertex projections.
struct MorphismIndex {
    tau: Vec<usize>,
    vertex: Vec<usize>,
}

fn morphism_index(ctx: &GermContext<'_>) -> MorphismIndex {
    let find = |z: Zigzag| ctx.sg.find(&zigzag_map(ctx.cat, &z).map).expect("generator");
    MorphismIndex {
        tau: ctx.cat.morphisms().map(|a| find(Zigzag::tau(ctx.cat, a))).collect(),
        vertex: ctx.cat.objects().map(|v| find(Zigzag::vertex(ctx.cat, v))).collect(),
    }
}

pub fn check_relations(ctx: &GermContext<'_>, family: &OperatorFamily, mode: Mode) -> RelationReport {
    RelationReport {
        results: mode.relations().into_iter().map(|r| check_relation(ctx, family, r)).collect(),
    }
}

pub fn check_relation(ctx: &GermContext<'_>, family: &OperatorFamily, relation: Relation) -> RelationResult {
    let mut c = Checker {
        family,
        result: RelationResult {
            relation,
            checked: 0,
            failures: 0,
            max_deviation: 0.0,
            witness: None,
        },
    };
    let cat = ctx.cat;
    let sg = ctx.sg;
    let n = family.dim();
    let t = |s: usize| &family.ops[s];
    let range_proj = |p: &PartialPerm| p.compose(&p.adjoint());
    let source_proj = |p: &PartialPerm| p.adjoint().compose(p);
    let elem = |s: usize| sg.witness_display(cat, s);
    match relation {
        Relation::Adjoint => {
            for s in 0..sg.len() {
                c.compare(t(sg.inverse(s)), &t(s).adjoint(), || format!("T_{} vs adjoint", elem(s)));
            }
        }
        Relation::Product => {
            for a in 0..sg.len() {
                for b in 0..sg.len() {
                    let ab = sg.product(a, b);
                    c.compare(&t(a).compose(t(b)), t(ab), || format!("T_{} T_{}", elem(a), elem(b)));
                }
            }
        }
        Relation::Union => {
            let idem: Vec<usize> = (0..sg.len()).filter(|&e| sg.get(e).map.is_idempotent()).collect();
            for s in 0..sg.len() {
                let dom = sg.domain(s);
                if dom.is_clear() {
                    c.compare(t(s), &PartialPerm::zero(n), || format!("T_{} on an empty set", elem(s)));
                    continue;
                }
                let subs: Vec<usize> = idem
                    .iter()
                    .copied()
                    .filter(|&e| {
                        let d = sg.domain(e);
                        !d.is_clear() && d.is_subset(&dom) && d != dom
                    })
                    .collect();
                let mut un = FixedBitSet::with_capacity(dom.len());
                for &e in &subs {
                    un.union_with(&sg.domain(e));
                }
                if un != dom {
                    continue;
                }
                let projs: Vec<PartialPerm> = subs.iter().map(|&e| source_proj(t(e))).collect();
                match PartialPerm::join(n, &projs) {
                    Some(j) => c.compare(&source_proj(t(s)), &j, || format!("A({}) as a union", elem(s))),
                    None => c.not_projection(&projs[0], || format!("A({}) as a union", elem(s))),
                }
            }
        }
        Relation::PointFixed | Relation::MapFixed => {
            for s in 0..sg.len() {
                let map = &sg.get(s).map;
                if map.is_empty() {
                    continue;
                }
                let trivial = match relation {
                    Relation::MapFixed => map.is_idempotent(),
                    _ => ctx
                        .domain_points(s)
                        .into_iter()
                        .all(|x| ctx.phi_map(map, x) == Ok(x)),
                };
                if trivial {
                    c.compare(t(s), &source_proj(t(s)), || format!("T_{} fixes its domain", elem(s)));
                }
            }
        }
        Relation::MorphismIsometry => {
            let idx = morphism_index(ctx);
            for a in cat.morphisms() {
                c.compare(&source_proj(t(idx.tau[a.idx()])), t(idx.vertex[cat.src(a).idx()]), || {
                    format!("T_{}*T_{}", cat.name(a), cat.name(a))
                });
            }
        }
        Relation::MorphismProduct => {
            let idx = morphism_index(ctx);
            for a in cat.morphisms() {
                for &(b, ab) in cat.right_products(a) {
                    c.compare(&t(idx.tau[a.idx()]).compose(t(idx.tau[b.idx()])), t(idx.tau[ab.idx()]), || {
                        format!("T_{} T_{}", cat.name(a), cat.name(b))
                    });
                }
            }
        }
        Relation::MorphismMeet => {
            let idx = morphism_index(ctx);
            for a in cat.morphisms() {
                for b in cat.morphisms().filter(|&b| cat.dst(b) == cat.dst(a)) {
                    let Ok(ext) = minimal_common_extensions(cat, &[a, b]) else {
                        continue;
                    };
                    let lhs = range_proj(t(idx.tau[a.idx()])).compose(&range_proj(t(idx.tau[b.idx()])));
                    let projs: Vec<PartialPerm> = ext.minimal.iter().map(|g| range_proj(t(idx.tau[g.idx()]))).collect();
                    let rhs = PartialPerm::join(n, &projs).expect("range projections");
                    c.compare(&lhs, &rhs, || format!("meet of {} and {}", cat.name(a), cat.name(b)));
                }
            }
        }
        Relation::PointMapEqual => {
            let idx = morphism_index(ctx);
            for a in cat.morphisms() {
                for b in cat.morphisms().filter(|&b| b > a && cat.src(b) == cat.src(a) && cat.dst(b) == cat.dst(a)) {
                    let (ma, mb) = (&sg.get(idx.tau[a.idx()]).map, &sg.get(idx.tau[b.idx()]).map);
                    let same = ctx
                        .spec
                        .at(cat.src(a))
                        .all(|x| ctx.phi_map(ma, x) == ctx.phi_map(mb, x));
                    if same {
                        c.compare(t(idx.tau[a.idx()]), t(idx.tau[b.idx()]), || {
                            format!("T_{} vs T_{}", cat.name(a), cat.name(b))
                        });
                    }
                }
            }
        }
        Relation::Tight => {
            for v in cat.objects() {
                let fam = ctx.spec.family(v);
                let proj_of = |i: usize| {
                    let id = PartialMap::identity_on(fam.set(i).ones().map(|m| Mor(m as u32)));
                    source_proj(t(sg.find(&id).expect("zigzag sets are domains")))
                };
                for e in 0..fam.len() {
                    let proper: Vec<usize> = fam
                        .subsets_of(fam.set(e))
                        .into_iter()
                        .filter(|&f| f != e)
                        .collect();
                    let maximal: Vec<usize> = proper
                        .iter()
                        .copied()
                        .filter(|&f| !proper.iter().any(|&g| g != f && fam.set(f).is_subset(fam.set(g))))
                        .collect();
                    for family_e in [proper, maximal] {
                        if family_e.is_empty() || !covers_set(fam, &family_e, e).covers() {
                            continue;
                        }
                        let projs: Vec<PartialPerm> = family_e.iter().map(|&f| proj_of(f)).collect();
                        let lhs = proj_of(e);
                        match PartialPerm::join(n, &projs) {
                            Some(j) => c.compare(&lhs, &j, || {
                                format!("cover of {} at {}", fam.sets[e].witness.display(cat), cat.object_name(v))
                            }),
                            None => c.not_projection(&projs[0], || "cover".into()),
                        }
                    }
                }
            }
        }
        Relation::TightExhaustive => {
            let idx = morphism_index(ctx);
            for v in cat.objects() {
                let lam: &[Mor] = cat.with_range(v);
                let tv = t(idx.vertex[v.idx()]);
                for f in exhaustive_candidates(lam) {
                    if !is_exhaustive(cat, v, &f) {
                        continue;
                    }
                    let projs: Vec<PartialPerm> = f.iter().map(|a| range_proj(t(idx.tau[a.idx()]))).collect();
                    let rhs = PartialPerm::join(n, &projs).expect("range projections");
                    c.compare(tv, &rhs, || {
                        let names: Vec<&str> = f.iter().map(|&a| cat.name(a)).collect();
                        format!("T_{} vs {{{}}}", cat.object_name(v), names.join(","))
                    });
                }
            }
        }
    }
    c.result
}

/// All subsets of vΛ in bitmask order, or those of size at most three when
/// vΛ is large.
fn exhaustive_candidates(lam: &[Mor]) -> Vec<Vec<Mor>> {
    if lam.len() <= EXHAUSTIVE_SUBSET_LIMIT {
        (1u32..1 << lam.len())
            .map(|mask| (0..lam.len()).filter(|i| mask >> i & 1 == 1).map(|i| lam[i]).collect())
            .collect()
    } else {
        let mut out = Vec::new();
        for i in 0..lam.len() {
            out.push(alloc::vec![lam[i]]);
            for j in i + 1..lam.len() {
                out.push(alloc::vec![lam[i], lam[j]]);
                for k in j + 1..lam.len() {
                    out.push(alloc::vec![lam[i], lam[j], lam[k]]);
                }
            }
        }
        out
    }
}

/// Finds η ∈ vΛ whose vector state under π_ℓ matches the state of δ_{[id,x]}
/// under Ind_x on the generators: ⟨T_s e_η, e_η⟩ = ⟨Ind_x(s)δ, δ⟩. The atom
/// of x is searched first.
pub fn matching_state(ctx: &GermContext<'_>, g: &FiniteGroupoid, x: usize) -> Result<Option<Mor>, OperatorError> {
    let unit = g.unit(x).map_err(|_| OperatorError::NotAUnit(x))?;
    let cat = ctx.cat;
    let find = |z: Zigzag| ctx.sg.find(&zigzag_map(cat, &z).map).expect("generator");
    let mut gens: Vec<usize> = cat.objects().map(|v| find(Zigzag::vertex(cat, v))).collect();
    for a in cat.morphisms() {
        gens.push(find(Zigzag::tau(cat, a)));
        gens.push(find(Zigzag::sigma(cat, a)));
    }
    let target: Vec<bool> = gens.iter().map(|&s| ctx.germ_of(g, s, x) == Some(unit)).collect();
    let v = ctx.spec.point(x).vertex;
    let atom = ctx.spec.atom(x);
    let mut order: Vec<Mor> = atom.ones().map(|m| Mor(m as u32)).collect();
    order.extend(cat.with_range(v).iter().copied().filter(|m| !atom.contains(m.idx())));
    Ok(order.into_iter().find(|&eta| {
        gens.iter()
            .zip(&target)
            .all(|(&s, &want)| (ctx.sg.get(s).map.apply(eta) == Some(eta)) == want)
    }))
}

/// Smallest eigenvalue of Re S = (S + S*)/2 for the cyclic shift on ℂ^p.
pub fn shift_spectral_bound(p: usize) -> Result<f64, OperatorError> {
    if p < 3 || p % 2 == 0 {
        return Err(OperatorError::BadShiftOrder(p));
    }
    let re = DMatrix::<f64>::from_fn(p, p, |i, j| {
        if (i + 1) % p == j || (j + 1) % p == i {
            0.5
        } else {
            0.0
        }
    });
    Ok(re.symmetric_eigen().eigenvalues.min())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub p: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    /// ½(1 − cos π/p).
    pub c: f64,
    pub tolerance: f64,
    pub min_lhs: f64,
    /// Trial index attaining the minimum.
    pub argmin: usize,
    pub passed: bool,
    pub structured: Vec<StructuredValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredValue {
    pub name: String,
    /// |⟨T₁ξ,ξ⟩|, |⟨T₂ξ,ξ⟩|, Re⟨T₃ξ,ξ⟩.
    pub pairings: [f64; 3],
    pub lhs: f64,
}

/// T_{θ_k} for θ_k = (α_k, β_k, β₀, α₀), k = 1, 2, 3, on ℓ²(Λ) of the
/// wrapped separation category.
pub fn separation_operators(cat: &SmallCategory) -> [PartialPerm; 3] {
    let n = cat.num_morphisms();
    let theta = |k: usize| {
        let ids = [
            format!("alpha{k}"),
            format!("beta{k}"),
            "beta0".to_string(),
            "alpha0".to_string(),
        ];
        let refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
        let z = Zigzag::from_ids(cat, &refs).expect("θ is a zigzag");
        let map = zigzag_map(cat, &z).map;
        PartialPerm::from_fn(n, |j| map.apply(Mor(j as u32)).map(|m| m.idx()))
    };
    [theta(1), theta(2), theta(3)]
}

fn lhs(ops: &[PartialPerm; 3], xi: &[Complex64]) -> ([f64; 3], f64) {
    let t1 = ops[0].pairing(xi).norm();
    let t2 = ops[1].pairing(xi).norm();
    let t3 = ops[2].pairing(xi).re;
    ([t1, t2, t3], t1 + t2 + 1.0 - t3)
}

fn normalize(mut xi: Vec<Complex64>) -> Result<Vec<Complex64>, OperatorError> {
    let norm = libm::sqrt(xi.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(OperatorError::Normalization);
    }
    xi.iter_mut().for_each(|z| *z /= norm);
    let check = xi.iter().map(|z| z.norm_sqr()).sum::<f64>();
    if libm::fabs(check - 1.0) > DEFAULT_TOLERANCE {
        return Err(OperatorError::Normalization);
    }
    Ok(xi)
}

/// Checks |⟨T₁ξ,ξ⟩| + |⟨T₂ξ,ξ⟩| + 1 − Re⟨T₃ξ,ξ⟩ ≥ ½(1 − cos π/p) on random
/// unit vectors of ℓ²(Λ) for the wrapped separation category. Trial k draws
/// from stream k of a ChaCha8 generator seeded with `seed`.
pub fn separation_test(p: usize, m: usize, trials: usize, seed: u64) -> Result<SeparationReport, OperatorError> {
    if p < 3 || p % 2 == 0 {
        return Err(OperatorError::BadShiftOrder(p));
    }
    if m == 0 {
        return Err(OperatorError::Argument("M must be positive".into()));
    }
    let cat = fixtures::sep(p, m);
    let ops = separation_operators(&cat);
    let n = cat.num_morphisms();
    let c = 0.5 * (1.0 - libm::cos(core::f64::consts::PI / p as f64));
    let mut min_lhs = f64::INFINITY;
    let mut argmin = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let xi: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let (_, value) = lhs(&ops, &normalize(xi)?);
        if value < min_lhs {
            min_lhs = value;
            argmin = trial;
        }
    }
    let structured = structured_vectors(&cat, m)
        .into_iter()
        .map(|(name, xi)| {
            let (pairings, value) = lhs(&ops, &xi);
            StructuredValue { name, pairings, lhs: value }
        })
        .collect();
    Ok(SeparationReport {
        p,
        m,
        trials,
        seed,
        c,
        tolerance: DEFAULT_TOLERANCE,
        min_lhs,
        argmin,
        passed: trials == 0 || min_lhs >= c - DEFAULT_TOLERANCE,
        structured,
    })
}

/// Basis vector e_{γ0_0}, the uniform vector on all γᵢⱼ with i ≡ 0 mod 3,
/// and e_v, which no θ_k reaches.
fn structured_vectors(cat: &SmallCategory, m: usize) -> Vec<(String, Vec<Complex64>)> {
    let n = cat.num_morphisms();
    let basis = |name: &str| {
        let mut xi = alloc::vec![Complex64::new(0.0, 0.0); n];
        xi[cat.m(name).idx()] = Complex64::new(1.0, 0.0);
        xi
    };
    let p = (0..)
        .take_while(|j| cat.lookup(&format!("gamma0_{j}")).is_some())
        .count();
    let mut uniform = alloc::vec![Complex64::new(0.0, 0.0); n];
    let rows: Vec<usize> = (0..3 * m).filter(|i| i % 3 == 0).collect();
    let w = 1.0 / libm::sqrt((rows.len() * p) as f64);
    for &i in &rows {
        for j in 0..p {
            uniform[cat.m(&format!("gamma{i}_{j}")).idx()] = Complex64::new(w, 0.0);
        }
    }
    alloc::vec![
        ("e_gamma0_0".to_string(), basis("gamma0_0")),
        ("uniform_rows_0mod3".to_string(), uniform),
        ("e_v".to_string(), basis("v")),
    ]
}

/// The vertex of an object as a zigzag set, for reporting.
pub fn vertex_label(cat: &SmallCategory, v: Obj) -> String {
    String::from(cat.object_name(v))
}
