//! Small categories with an explicit, finite composition table.
//!
//! A [`SmallCategory`] is either `Total` (the carrier is closed under
//! composition) or `Bounded` (a truncation of an infinite category, where a
//! composable pair may have no in-carrier composite).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use fixedbitset::FixedBitSet;
use hashbrown::HashMap;

/// Index of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub u32);

/// Index of a morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mor(pub u32);

impl Obj {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Mor {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Totality {
    Total,
    /// Truncated carrier; the value is the size bound used to build it.
    Bounded(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismData {
    pub id: String,
    /// s(α)
    pub src: Obj,
    /// r(α)
    pub dst: Obj,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("composition entry ({a}, {b}) -> {ab}: {reason}")]
    MismatchedEntry {
        a: String,
        b: String,
        ab: String,
        reason: String,
    },
    #[error("composition ({a}, {b}) given two results `{first}` and `{second}`")]
    ConflictingEntry {
        a: String,
        b: String,
        first: String,
        second: String,
    },
    #[error("identity `{0}` must have equal source and target")]
    BadIdentity(String),
}

/// Reason a shift map is undefined at a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Undefined {
    NotComposable,
    OutOfBound,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CategoryError {
    #[error("left cancellation fails: {alpha}{beta} = {alpha}{gamma} = {product}")]
    LeftCancellation {
        alpha: String,
        beta: String,
        gamma: String,
        product: String,
    },
    #[error("operation requires a total carrier")]
    NotTotal,
    #[error("argument error: {0}")]
    Argument(String),
}

/// One violated axiom instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Associativity {
        a: Mor,
        b: Mor,
        c: Mor,
        left: Mor,
        right: Mor,
    },
    Identity {
        identity: Mor,
        other: Mor,
        result: Option<Mor>,
    },
    LeftCancellation {
        alpha: Mor,
        beta: Mor,
        gamma: Mor,
        product: Mor,
    },
    NotClosed {
        a: Mor,
        b: Mor,
    },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Associativity { .. } => "associativity",
            Violation::Identity { .. } => "identity",
            Violation::LeftCancellation { .. } => "left-cancellation",
            Violation::NotClosed { .. } => "closure",
        }
    }

    pub fn describe(&self, cat: &SmallCategory) -> String {
        let n = |m: &Mor| cat.name(*m);
        match self {
            Violation::Associativity {
                a,
                b,
                c,
                left,
                right,
            } => format!(
                "({}{}){} = {} but {}({}{}) = {}",
                n(a),
                n(b),
                n(c),
                n(left),
                n(a),
                n(b),
                n(c),
                n(right)
            ),
            Violation::Identity {
                identity,
                other,
                result,
            } => format!(
                "identity {} composed with {} gives {}",
                n(identity),
                n(other),
                result.map(|r| cat.name(r)).unwrap_or("nothing")
            ),
            Violation::LeftCancellation {
                alpha,
                beta,
                gamma,
                product,
            } => format!(
                "{}{} = {}{} = {} with {} != {}",
                n(alpha),
                n(beta),
                n(alpha),
                n(gamma),
                n(product),
                n(beta),
                n(gamma)
            ),
            Violation::NotClosed { a, b } => {
                format!("composable pair ({}, {}) has no composite", n(a), n(b))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.violations.iter().filter(|v| v.kind() == kind).count()
    }
}

/// Builds a [`SmallCategory`]. Every object gets an identity morphism with
/// the same id; identity composites are filled in unless given explicitly.
#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    ids: HashMap<String, Mor>,
    obj_ids: HashMap<String, Obj>,
    entries: Vec<(Mor, Mor, Mor)>,
    error: Option<StructureError>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, id: &str) -> Obj {
        if let Some(&o) = self.obj_ids.get(id) {
            self.fail(StructureError::DuplicateId(id.into()));
            return o;
        }
        if self.ids.contains_key(id) {
            self.fail(StructureError::DuplicateId(id.into()));
        }
        let o = Obj(self.objects.len() as u32);
        self.objects.push(id.into());
        self.obj_ids.insert(id.into(), o);
        let m = Mor(self.morphisms.len() as u32);
        self.morphisms.push(MorphismData {
            id: id.into(),
            src: o,
            dst: o,
        });
        self.ids.insert(id.into(), m);
        o
    }

    /// Adds α with s(α) = `src`, r(α) = `dst`.
    pub fn morphism(&mut self, id: &str, src: Obj, dst: Obj) -> Mor {
        if self.ids.contains_key(id) {
            self.fail(StructureError::DuplicateId(id.into()));
        }
        let m = Mor(self.morphisms.len() as u32);
        self.morphisms.push(MorphismData {
            id: id.into(),
            src,
            dst,
        });
        self.ids.insert(id.into(), m);
        m
    }

    pub fn lookup(&self, id: &str) -> Option<Mor> {
        self.ids.get(id).copied()
    }

    pub fn lookup_object(&self, id: &str) -> Option<Obj> {
        self.obj_ids.get(id).copied()
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.ids[&self.objects[o.idx()]]
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.morphisms[m.idx()].src
    }

    pub fn dst(&self, m: Mor) -> Obj {
        self.morphisms[m.idx()].dst
    }

    /// Records `a·b = ab`.
    pub fn compose(&mut self, a: Mor, b: Mor, ab: Mor) {
        self.entries.push((a, b, ab));
    }

    /// Records a composite by ids.
    pub fn compose_ids(&mut self, a: &str, b: &str, ab: &str) {
        match (self.lookup(a), self.lookup(b), self.lookup(ab)) {
            (Some(a), Some(b), Some(ab)) => self.compose(a, b, ab),
            _ => {
                let missing = [a, b, ab]
                    .into_iter()
                    .find(|x| self.lookup(x).is_none())
                    .unwrap_or(a);
                self.fail(StructureError::UnknownId(missing.into()));
            }
        }
    }

    fn fail(&mut self, e: StructureError) {
        if self.error.is_none() {
            self.error = Some(e);
        }
    }

    pub fn build(mut self, totality: Totality) -> Result<SmallCategory, StructureError> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        let name = |m: Mor| self.morphisms[m.idx()].id.clone();
        let mut table: BTreeMap<(Mor, Mor), Mor> = BTreeMap::new();
        for &(a, b, ab) in &self.entries {
            let (da, db, dab) = (
                &self.morphisms[a.idx()],
                &self.morphisms[b.idx()],
                &self.morphisms[ab.idx()],
            );
            let reason = if da.src != db.dst {
                Some("s(a) != r(b)")
            } else if dab.dst != da.dst {
                Some("r(ab) != r(a)")
            } else if dab.src != db.src {
                Some("s(ab) != s(b)")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(StructureError::MismatchedEntry {
                    a: name(a),
                    b: name(b),
                    ab: name(ab),
                    reason: reason.into(),
                });
            }
            if let Some(&prev) = table.get(&(a, b)) {
                if prev != ab {
                    return Err(StructureError::ConflictingEntry {
                        a: name(a),
                        b: name(b),
                        first: name(prev),
                        second: name(ab),
                    });
                }
            }
            table.insert((a, b), ab);
        }
        let identities: Vec<Mor> = self
            .objects
            .iter()
            .map(|o| self.ids[o.as_str()])
            .collect();
        for (i, m) in self.morphisms.iter().enumerate() {
            let m_ = Mor(i as u32);
            table.entry((identities[m.dst.idx()], m_)).or_insert(m_);
            table.entry((m_, identities[m.src.idx()])).or_insert(m_);
        }
        Ok(SmallCategory::from_table(
            self.objects,
            identities,
            self.morphisms,
            table,
            totality,
        ))
    }
}

/// A small category given by an enumerated carrier and composition table.
#[derive(Debug, Clone)]
pub struct SmallCategory {
    objects: Vec<String>,
    identities: Vec<Mor>,
    morphisms: Vec<MorphismData>,
    /// right[α] = sorted (β, αβ)
    right: Vec<Vec<(Mor, Mor)>>,
    /// factors[γ] = sorted (α, β) with αβ = γ
    factors: Vec<Vec<(Mor, Mor)>>,
    /// by_range[v] = vΛ, sorted
    by_range: Vec<Vec<Mor>>,
    by_source: Vec<Vec<Mor>>,
    ids: HashMap<String, Mor>,
    totality: Totality,
}

impl SmallCategory {
    fn from_table(
        objects: Vec<String>,
        identities: Vec<Mor>,
        morphisms: Vec<MorphismData>,
        table: BTreeMap<(Mor, Mor), Mor>,
        totality: Totality,
    ) -> Self {
        let n = morphisms.len();
        let mut right = alloc::vec![Vec::new(); n];
        let mut factors = alloc::vec![Vec::new(); n];
        for (&(a, b), &ab) in &table {
            right[a.idx()].push((b, ab));
            factors[ab.idx()].push((a, b));
        }
        for f in &mut factors {
            f.sort();
        }
        let mut by_range = alloc::vec![Vec::new(); objects.len()];
        let mut by_source = alloc::vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            by_range[m.dst.idx()].push(Mor(i as u32));
            by_source[m.src.idx()].push(Mor(i as u32));
        }
        let ids = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), Mor(i as u32)))
            .collect();
        SmallCategory {
            objects,
            identities,
            morphisms,
            right,
            factors,
            by_range,
            by_source,
            ids,
            totality,
        }
    }

    pub fn totality(&self) -> Totality {
        self.totality
    }

    pub fn is_total(&self) -> bool {
        self.totality == Totality::Total
    }

    pub fn require_total(&self) -> Result<(), CategoryError> {
        if self.is_total() {
            Ok(())
        } else {
            Err(CategoryError::NotTotal)
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.objects.len()).map(|i| Obj(i as u32))
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.morphisms.len()).map(|i| Mor(i as u32))
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.idx()]
    }

    pub fn name(&self, m: Mor) -> &str {
        &self.morphisms[m.idx()].id
    }

    pub fn data(&self, m: Mor) -> &MorphismData {
        &self.morphisms[m.idx()]
    }

    pub fn lookup(&self, id: &str) -> Option<Mor> {
        self.ids.get(id).copied()
    }

    pub fn lookup_object(&self, id: &str) -> Option<Obj> {
        self.objects
            .iter()
            .position(|o| o == id)
            .map(|i| Obj(i as u32))
    }

    /// Morphism by id; panics on unknown ids (fixture code only).
    pub fn m(&self, id: &str) -> Mor {
        match self.lookup(id) {
            Some(m) => m,
            None => panic!("no morphism `{id}`"),
        }
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.morphisms[m.idx()].src
    }

    pub fn dst(&self, m: Mor) -> Obj {
        self.morphisms[m.idx()].dst
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.identities[o.idx()]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        let d = &self.morphisms[m.idx()];
        d.src == d.dst && self.identities[d.src.idx()] == m
    }

    /// The object whose identity is `m`, if any.
    pub fn as_object(&self, m: Mor) -> Option<Obj> {
        self.is_identity(m).then(|| self.src(m))
    }

    /// vΛ, sorted by index.
    pub fn with_range(&self, v: Obj) -> &[Mor] {
        &self.by_range[v.idx()]
    }

    /// Λv, sorted by index.
    pub fn with_source(&self, v: Obj) -> &[Mor] {
        &self.by_source[v.idx()]
    }

    /// Defined composites (β, αβ) for a fixed α.
    pub fn right_products(&self, a: Mor) -> &[(Mor, Mor)] {
        &self.right[a.idx()]
    }

    /// All factorizations (α, β) of γ present in the table.
    pub fn factorizations(&self, g: Mor) -> &[(Mor, Mor)] {
        &self.factors[g.idx()]
    }

    pub fn compose(&self, a: Mor, b: Mor) -> Option<Mor> {
        let row = &self.right[a.idx()];
        row.binary_search_by_key(&b, |p| p.0).ok().map(|i| row[i].1)
    }

    /// τ^α(β) = αβ.
    pub fn tau(&self, a: Mor, b: Mor) -> Result<Mor, Undefined> {
        if self.src(a) != self.dst(b) {
            return Err(Undefined::NotComposable);
        }
        self.compose(a, b).ok_or(Undefined::OutOfBound)
    }

    /// σ^α(γ): the unique β with γ = αβ.
    pub fn sigma(&self, a: Mor, g: Mor) -> Result<Option<Mor>, CategoryError> {
        let fs = &self.factors[g.idx()];
        let start = fs.partition_point(|p| p.0 < a);
        let mut found = None;
        for &(x, b) in &fs[start..] {
            if x != a {
                break;
            }
            match found {
                None => found = Some(b),
                Some(prev) if prev != b => {
                    return Err(CategoryError::LeftCancellation {
                        alpha: self.name(a).into(),
                        beta: self.name(prev).into(),
                        gamma: self.name(b).into(),
                        product: self.name(g).into(),
                    })
                }
                _ => {}
            }
        }
        Ok(found)
    }

    /// σ^α(γ) assuming left cancellation holds.
    pub(crate) fn sigma_unchecked(&self, a: Mor, g: Mor) -> Option<Mor> {
        let fs = &self.factors[g.idx()];
        let i = fs.partition_point(|p| p.0 < a);
        fs.get(i).filter(|p| p.0 == a).map(|p| p.1)
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.num_morphisms())
    }

    pub fn set_of(&self, ms: impl IntoIterator<Item = Mor>) -> FixedBitSet {
        let mut s = self.empty_set();
        for m in ms {
            s.insert(m.idx());
        }
        s
    }

    /// αΛ as a set of morphisms (in-carrier part for bounded categories).
    pub fn cone(&self, a: Mor) -> FixedBitSet {
        self.set_of(self.right[a.idx()].iter().map(|p| p.1))
    }

    pub fn in_cone(&self, a: Mor, g: Mor) -> bool {
        self.sigma_unchecked(a, g).is_some()
    }

    /// [β] = {α : β ∈ αΛ}, sorted.
    pub fn initial_segments(&self, b: Mor) -> Vec<Mor> {
        let mut v: Vec<Mor> = self.factors[b.idx()].iter().map(|p| p.0).collect();
        v.dedup();
        v
    }

    /// α ≈ β iff αΛ = βΛ.
    pub fn approx(&self, a: Mor, b: Mor) -> bool {
        self.dst(a) == self.dst(b) && self.cone(a) == self.cone(b)
    }

    /// α ⋒ β iff αΛ ∩ βΛ ≠ ∅.
    pub fn cap(&self, a: Mor, b: Mor) -> bool {
        if self.dst(a) != self.dst(b) {
            return false;
        }
        let ca = self.cone(a);
        self.right[b.idx()].iter().any(|p| ca.contains(p.1.idx()))
    }

    pub fn perp(&self, a: Mor, b: Mor) -> bool {
        !self.cap(a, b)
    }

    /// Two-sided inverse of μ, if present in the carrier.
    pub fn inverse(&self, mu: Mor) -> Option<Mor> {
        let (s, r) = (self.src(mu), self.dst(mu));
        self.right[mu.idx()]
            .iter()
            .filter(|p| p.1 == self.identity(r))
            .map(|p| p.0)
            .find(|&nu| self.compose(nu, mu) == Some(self.identity(s)))
    }

    /// Invertible loops at v.
    pub fn invertibles(&self, v: Obj) -> Vec<Mor> {
        self.by_range[v.idx()]
            .iter()
            .copied()
            .filter(|&m| self.src(m) == v && self.inverse(m).is_some())
            .collect()
    }

    /// Checks the LCSC axioms and lists every violated instance.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let total = self.is_total();
        for (i, d) in self.morphisms.iter().enumerate() {
            let m = Mor(i as u32);
            let l = self.identities[d.dst.idx()];
            let r = self.identities[d.src.idx()];
            for (id, res) in [(l, self.compose(l, m)), (r, self.compose(m, r))] {
                if res != Some(m) {
                    out.push(Violation::Identity {
                        identity: id,
                        other: m,
                        result: res,
                    });
                }
            }
        }
        if total {
            for a in self.morphisms() {
                for &b in &self.by_range[self.src(a).idx()] {
                    if self.compose(a, b).is_none() {
                        out.push(Violation::NotClosed { a, b });
                    }
                }
            }
        }
        for a in self.morphisms() {
            for &(b, ab) in &self.right[a.idx()] {
                for &(c, bc) in &self.right[b.idx()] {
                    if let (Some(l), Some(r)) = (self.compose(ab, c), self.compose(a, bc)) {
                        if l != r {
                            out.push(Violation::Associativity {
                                a,
                                b,
                                c,
                                left: l,
                                right: r,
                            });
                        }
                    }
                }
            }
        }
        for a in self.morphisms() {
            let mut seen: BTreeMap<Mor, Vec<Mor>> = BTreeMap::new();
            for &(b, ab) in &self.right[a.idx()] {
                seen.entry(ab).or_default().push(b);
            }
            for (product, bs) in seen {
                for i in 0..bs.len() {
                    for j in i + 1..bs.len() {
                        out.push(Violation::LeftCancellation {
                            alpha: a,
                            beta: bs[i],
                            gamma: bs[j],
                            product,
                        });
                    }
                }
            }
        }
        ValidationReport { violations: out }
    }

    /// Whether αβ = γβ implies α = γ on the carrier.
    pub fn is_right_cancellative(&self) -> bool {
        self.morphisms().all(|g| {
            let fs = &self.factors[g.idx()];
            let mut rights: Vec<(Mor, Mor)> = fs.iter().map(|&(a, b)| (b, a)).collect();
            rights.sort();
            rights.windows(2).all(|w| w[0].0 != w[1].0 || w[0].1 == w[1].1)
        })
    }

    /// Composite table as (a, b, ab) triples, excluding identity laws.
    pub fn composition_entries(&self) -> Vec<(Mor, Mor, Mor)> {
        let mut v = Vec::new();
        for a in self.morphisms() {
            for &(b, ab) in &self.right[a.idx()] {
                if self.is_identity(a) && ab == b || self.is_identity(b) && ab == a {
                    continue;
                }
                v.push((a, b, ab));
            }
        }
        v
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
