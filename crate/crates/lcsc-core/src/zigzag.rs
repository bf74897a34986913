//! Zigzags, zigzag maps and the inverse semigroup they generate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use fixedbitset::FixedBitSet;
use hashbrown::HashMap;

use crate::category::{Mor, Obj, SmallCategory, Undefined};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZigzagError {
    #[error("empty zigzag")]
    Empty,
    #[error("pair {index}: r({alpha}) != r({beta})")]
    RangeMismatch {
        index: usize,
        alpha: String,
        beta: String,
    },
    #[error("pair {index}: s({alpha}) != s({beta}) of the previous pair")]
    Link {
        index: usize,
        alpha: String,
        beta: String,
    },
    #[error("cannot concatenate: source {left} != target {right}")]
    Concat { left: String, right: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemigroupError {
    #[error("operation requires a total carrier")]
    NotTotal,
    #[error("semigroup exceeds {0} elements")]
    TooLarge(usize),
}

/// An alternating tuple (α₁, β₁, …, αₙ, βₙ) with r(αᵢ) = r(βᵢ) and
/// s(αᵢ₊₁) = s(βᵢ).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zigzag {
    pairs: Vec<(Mor, Mor)>,
}

impl Zigzag {
    pub fn new(cat: &SmallCategory, pairs: Vec<(Mor, Mor)>) -> Result<Self, ZigzagError> {
        if pairs.is_empty() {
            return Err(ZigzagError::Empty);
        }
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if cat.dst(a) != cat.dst(b) {
                return Err(ZigzagError::RangeMismatch {
                    index: i,
                    alpha: cat.name(a).into(),
                    beta: cat.name(b).into(),
                });
            }
            if i > 0 && cat.src(a) != cat.src(pairs[i - 1].1) {
                return Err(ZigzagError::Link {
                    index: i,
                    alpha: cat.name(a).into(),
                    beta: cat.name(pairs[i - 1].1).into(),
                });
            }
        }
        Ok(Zigzag { pairs })
    }

    /// Builds from a flat list of ids (α₁, β₁, …).
    pub fn from_ids(cat: &SmallCategory, ids: &[&str]) -> Result<Self, ZigzagError> {
        let ms: Vec<Mor> = ids.iter().map(|s| cat.m(s)).collect();
        Self::new(cat, ms.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    /// (v, v): the identity on vΛ.
    pub fn vertex(cat: &SmallCategory, v: Obj) -> Self {
        let i = cat.identity(v);
        Zigzag { pairs: alloc::vec![(i, i)] }
    }

    /// (r(α), α), whose map is τ^α.
    pub fn tau(cat: &SmallCategory, a: Mor) -> Self {
        Zigzag {
            pairs: alloc::vec![(cat.identity(cat.dst(a)), a)],
        }
    }

    /// (α, r(α)), whose map is σ^α.
    pub fn sigma(cat: &SmallCategory, a: Mor) -> Self {
        Zigzag {
            pairs: alloc::vec![(a, cat.identity(cat.dst(a)))],
        }
    }

    pub fn pairs(&self) -> &[(Mor, Mor)] {
        &self.pairs
    }

    /// s(ζ) = s(βₙ); the domain of φ_ζ lies in s(ζ)Λ.
    pub fn src(&self, cat: &SmallCategory) -> Obj {
        cat.src(self.pairs[self.pairs.len() - 1].1)
    }

    /// r(ζ) = s(α₁); the range of φ_ζ lies in r(ζ)Λ.
    pub fn dst(&self, cat: &SmallCategory) -> Obj {
        cat.src(self.pairs[0].0)
    }

    /// ζ̄ = (βₙ, αₙ, …, β₁, α₁).
    pub fn reverse(&self) -> Self {
        Zigzag {
            pairs: self.pairs.iter().rev().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// ζ₁ζ₂, with φ_{ζ₁ζ₂} = φ_{ζ₁} ∘ φ_{ζ₂}.
    pub fn concat(&self, cat: &SmallCategory, other: &Zigzag) -> Result<Self, ZigzagError> {
        if self.src(cat) != other.dst(cat) {
            return Err(ZigzagError::Concat {
                left: cat.object_name(self.src(cat)).into(),
                right: cat.object_name(other.dst(cat)).into(),
            });
        }
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Ok(Zigzag { pairs })
    }

    pub fn ids<'a>(&self, cat: &'a SmallCategory) -> Vec<&'a str> {
        self.pairs
            .iter()
            .flat_map(|&(a, b)| [cat.name(a), cat.name(b)])
            .collect()
    }

    pub fn display(&self, cat: &SmallCategory) -> String {
        let mut s = String::from("(");
        for (i, id) in self.ids(cat).into_iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{id}");
        }
        s.push(')');
        s
    }
}

/// A finite partial injection on the morphisms, stored as sorted pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartialMap {
    pairs: Vec<(u32, u32)>,
}

impl PartialMap {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pairs(mut pairs: Vec<(Mor, Mor)>) -> Self {
        pairs.sort();
        pairs.dedup();
        PartialMap {
            pairs: pairs.into_iter().map(|(a, b)| (a.0, b.0)).collect(),
        }
    }

    pub fn identity_on(ms: impl IntoIterator<Item = Mor>) -> Self {
        Self::from_pairs(ms.into_iter().map(|m| (m, m)).collect())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Mor, Mor)> + '_ {
        self.pairs.iter().map(|&(a, b)| (Mor(a), Mor(b)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn apply(&self, m: Mor) -> Option<Mor> {
        self.pairs
            .binary_search_by_key(&m.0, |p| p.0)
            .ok()
            .map(|i| Mor(self.pairs[i].1))
    }

    pub fn in_domain(&self, m: Mor) -> bool {
        self.apply(m).is_some()
    }

    pub fn domain(&self, n: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for p in &self.pairs {
            s.insert(p.0 as usize);
        }
        s
    }

    pub fn range(&self, n: usize) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for p in &self.pairs {
            s.insert(p.1 as usize);
        }
        s
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PartialMap) -> PartialMap {
        let mut pairs = Vec::new();
        for &(x, y) in &other.pairs {
            if let Some(z) = self.apply(Mor(y)) {
                pairs.push((x, z.0));
            }
        }
        PartialMap { pairs }
    }

    pub fn inverse(&self) -> PartialMap {
        let mut pairs: Vec<(u32, u32)> = self.pairs.iter().map(|&(a, b)| (b, a)).collect();
        pairs.sort();
        PartialMap { pairs }
    }

    pub fn restrict(&self, set: &FixedBitSet) -> PartialMap {
        PartialMap {
            pairs: self
                .pairs
                .iter()
                .copied()
                .filter(|p| set.contains(p.0 as usize))
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.pairs.iter().all(|p| p.0 == p.1)
    }

    pub fn is_injective(&self) -> bool {
        let mut r: Vec<u32> = self.pairs.iter().map(|p| p.1).collect();
        r.sort();
        r.windows(2).all(|w| w[0] != w[1])
    }

    /// Whether `self` extends `other`.
    pub fn extends(&self, other: &PartialMap) -> bool {
        other.pairs.iter().all(|&(a, b)| self.apply(Mor(a)) == Some(Mor(b)))
    }

    pub fn display(&self, cat: &SmallCategory) -> String {
        let mut s = String::from("{");
        for (i, (a, b)) in self.pairs().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            let _ = write!(s, "{} -> {}", cat.name(a), cat.name(b));
        }
        s.push('}');
        s
    }
}

/// φ_ζ together with its truncation diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagMap {
    pub map: PartialMap,
    /// Elements of s(ζ)Λ at which some τ step left a bounded carrier.
    pub edges: Vec<Mor>,
    /// True when computed on a bounded carrier.
    pub bounded: bool,
}

/// Evaluates φ_ζ(λ), or reports where it stops.
pub fn apply_zigzag(cat: &SmallCategory, z: &Zigzag, lambda: Mor) -> Result<Option<Mor>, Undefined> {
    if cat.dst(lambda) != z.src(cat) {
        return Err(Undefined::NotComposable);
    }
    let mut x = lambda;
    for &(a, b) in z.pairs().iter().rev() {
        x = cat.tau(b, x)?;
        match cat.sigma_unchecked(a, x) {
            Some(y) => x = y,
            None => return Ok(None),
        }
    }
    Ok(Some(x))
}

/// φ_ζ as a partial injection on s(ζ)Λ.
pub fn zigzag_map(cat: &SmallCategory, z: &Zigzag) -> ZigzagMap {
    let mut pairs = Vec::new();
    let mut edges = Vec::new();
    for &l in cat.with_range(z.src(cat)) {
        match apply_zigzag(cat, z, l) {
            Ok(Some(y)) => pairs.push((l, y)),
            Ok(None) => {}
            Err(_) => edges.push(l),
        }
    }
    ZigzagMap {
        map: PartialMap::from_pairs(pairs),
        edges,
        bounded: !cat.is_total(),
    }
}

/// A(ζ), the domain of φ_ζ.
pub fn zigzag_set(cat: &SmallCategory, z: &Zigzag) -> FixedBitSet {
    zigzag_map(cat, z).map.domain(cat.num_morphisms())
}

#[derive(Debug, Clone)]
pub struct Element {
    pub map: PartialMap,
    /// None only for the zero map when every path to it crosses a vertex
    /// mismatch.
    pub witness: Option<Zigzag>,
}

/// The inverse semigroup of zigzag maps of a total category, with elements
/// in canonical (sorted-map) order.
#[derive(Debug, Clone)]
pub struct InverseSemigroup {
    elements: Vec<Element>,
    index: HashMap<PartialMap, usize>,
    n: usize,
}

pub const DEFAULT_SEMIGROUP_LIMIT: usize = 200_000;

/// Closes {τ^α, σ^α, id_{vΛ}} under composition.
pub fn generate_semigroup(cat: &SmallCategory, limit: usize) -> Result<InverseSemigroup, SemigroupError> {
    cat.require_total().map_err(|_| SemigroupError::NotTotal)?;
    let mut gens: Vec<Element> = Vec::new();
    for v in cat.objects() {
        let z = Zigzag::vertex(cat, v);
        gens.push(Element {
            map: zigzag_map(cat, &z).map,
            witness: Some(z),
        });
    }
    for a in cat.morphisms().filter(|&a| !cat.is_identity(a)) {
        for z in [Zigzag::tau(cat, a), Zigzag::sigma(cat, a)] {
            gens.push(Element {
                map: zigzag_map(cat, &z).map,
                witness: Some(z),
            });
        }
    }
    let mut elements: Vec<Element> = Vec::new();
    let mut index: HashMap<PartialMap, usize> = HashMap::new();
    for g in &gens {
        if !index.contains_key(&g.map) {
            index.insert(g.map.clone(), elements.len());
            elements.push(g.clone());
        }
    }
    let mut head = 0;
    while head < elements.len() {
        let e = elements[head].clone();
        head += 1;
        for g in &gens {
            let map = e.map.compose(&g.map);
            let witness = match (&e.witness, &g.witness) {
                (Some(a), Some(b)) => a.concat(cat, b).ok(),
                _ => None,
            };
            match index.get(&map) {
                Some(&i) => {
                    if elements[i].witness.is_none() && witness.is_some() {
                        elements[i].witness = witness;
                    }
                }
                None => {
                    if elements.len() >= limit {
                        return Err(SemigroupError::TooLarge(limit));
                    }
                    index.insert(map.clone(), elements.len());
                    elements.push(Element { map, witness });
                }
            }
        }
    }
    elements.sort_by(|a, b| a.map.cmp(&b.map));
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.map.clone(), i))
        .collect();
    Ok(InverseSemigroup {
        elements,
        index,
        n: cat.num_morphisms(),
    })
}

impl InverseSemigroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn find(&self, map: &PartialMap) -> Option<usize> {
        self.index.get(map).copied()
    }

    pub fn contains(&self, map: &PartialMap) -> bool {
        self.index.contains_key(map)
    }

    /// Index of `a ∘ b`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        let m = self.elements[a].map.compose(&self.elements[b].map);
        self.index[&m]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.index[&self.elements[a].map.inverse()]
    }

    pub fn zero(&self) -> Option<usize> {
        self.find(&PartialMap::empty())
    }

    pub fn domain(&self, a: usize) -> FixedBitSet {
        self.elements[a].map.domain(self.n)
    }

    pub fn witness_display(&self, cat: &SmallCategory, a: usize) -> String {
        match &self.elements[a].witness {
            Some(z) => z.display(cat),
            None => format!("0"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(cat: &SmallCategory, s: &FixedBitSet) -> Vec<String> {
        s.ones().map(|i| cat.name(Mor(i as u32)).into()).collect()
    }

    #[test]
    fn kg_beta_alpha() {
        let kg = fixtures::kg(2);
        let z = Zigzag::from_ids(&kg, &["beta", "alpha"]).unwrap();
        let m = zigzag_map(&kg, &z).map;
        assert_eq!(m.len(), 2);
        assert_eq!(m.apply(kg.m("gamma1")), Some(kg.m("delta1")));
        assert_eq!(m.apply(kg.m("gamma2")), Some(kg.m("delta2")));
        let back = zigzag_map(&kg, &z.reverse()).map;
        let idem = back.compose(&m);
        assert_eq!(idem, PartialMap::identity_on([kg.m("gamma1"), kg.m("gamma2")]));
        let other = back.compose(&zigzag_map(&kg, &z).map.compose(&back));
        assert_eq!(other, back);
        let ab_ba = zigzag_map(&kg, &Zigzag::from_ids(&kg, &["alpha", "beta", "beta", "alpha"]).unwrap()).map;
        assert_eq!(ab_ba, PartialMap::identity_on([kg.m("gamma1"), kg.m("gamma2")]));
        let ba_ab = zigzag_map(&kg, &Zigzag::from_ids(&kg, &["beta", "alpha", "alpha", "beta"]).unwrap()).map;
        assert_eq!(ba_ab, PartialMap::identity_on([kg.m("delta1"), kg.m("delta2")]));
        assert_eq!(z.reverse().ids(&kg), ["alpha", "beta"]);
    }

    #[test]
    fn group_translation() {
        let g = fixtures::group(2);
        let z = Zigzag::from_ids(&g, &["g", "e"]).unwrap();
        let m = zigzag_map(&g, &z).map;
        assert_eq!(m.apply(g.m("e")), Some(g.m("g")));
        assert_eq!(m.apply(g.m("g")), Some(g.m("e")));
        let sg = generate_semigroup(&g, 100).unwrap();
        assert_eq!(sg.len(), 2);
        let g5 = fixtures::group(5);
        let sg5 = generate_semigroup(&g5, 100).unwrap();
        for e in sg5.elements() {
            assert_eq!(e.map.len(), 5);
        }
    }

    #[test]
    fn zigzag_sets() {
        let kg = fixtures::kg(2);
        // A(ζ̄₁ζ₁ζ̄₂ζ₂) with ζ₁ = (α, u), ζ₂ = (β, u) is αΛ ∩ βΛ.
        let z = Zigzag::from_ids(&kg, &["u", "alpha", "alpha", "u", "u", "beta", "beta", "u"]).unwrap();
        assert_eq!(names(&kg, &zigzag_set(&kg, &z)), ["alpha.gamma1", "alpha.gamma2"]);
        let a = kg.m("alpha");
        assert_eq!(zigzag_set(&kg, &Zigzag::sigma(&kg, a)), kg.cone(a));
        let u = kg.lookup_object("u").unwrap();
        assert_eq!(zigzag_set(&kg, &Zigzag::vertex(&kg, u)), kg.set_of(kg.with_range(u).iter().copied()));
    }

    #[test]
    fn bad_shapes() {
        let kg = fixtures::kg(2);
        assert!(matches!(Zigzag::from_ids(&kg, &["alpha", "gamma1"]), Err(ZigzagError::RangeMismatch { .. })));
        let z1 = Zigzag::from_ids(&kg, &["beta", "alpha"]).unwrap();
        assert!(z1.concat(&kg, &z1).is_err());
        assert!(z1.reverse().concat(&kg, &z1).is_ok());
    }

    #[test]
    fn par_semigroup() {
        let par = fixtures::par();
        let sg = generate_semigroup(&par, 1000).unwrap();
        let f = par.m("f");
        let g = par.m("g");
        for z in [Zigzag::tau(&par, f), Zigzag::sigma(&par, f), Zigzag::tau(&par, g), Zigzag::sigma(&par, g)] {
            assert!(sg.contains(&zigzag_map(&par, &z).map));
        }
        let zero = sg.zero().expect("zero present");
        assert!(sg.get(zero).witness.is_some());
        let sfg = Zigzag::sigma(&par, f).concat(&par, &Zigzag::tau(&par, g)).unwrap();
        assert!(zigzag_map(&par, &sfg).map.is_empty());
    }

    #[test]
    fn kg_semigroup_contains_shift() {
        let kg = fixtures::kg(2);
        let sg = generate_semigroup(&kg, 10_000).unwrap();
        let z = Zigzag::from_ids(&kg, &["beta", "alpha"]).unwrap();
        assert!(sg.contains(&zigzag_map(&kg, &z).map));
    }

    #[test]
    fn witnesses_reproduce_maps() {
        for cat in [fixtures::par(), fixtures::kg(2), fixtures::group(3), fixtures::sep(3, 1)] {
            let sg = generate_semigroup(&cat, 100_000).unwrap();
            for (i, e) in sg.elements().iter().enumerate() {
                if let Some(w) = &e.witness {
                    assert_eq!(zigzag_map(&cat, w).map, e.map);
                }
                let inv = sg.inverse(i);
                assert_eq!(sg.product(i, sg.product(inv, i)), i);
                assert!(e.map.is_injective());
            }
        }
    }

    /// Every map on a finitely aligned category is a union of τ^γ∘σ^δ.
    #[test]
    fn finitely_aligned_decomposition() {
        for cat in [fixtures::par(), fixtures::kg(2)] {
            let n = cat.num_morphisms();
            let sg = generate_semigroup(&cat, 10_000).unwrap();
            let mut pieces = Vec::new();
            for g in cat.morphisms() {
                for d in cat.morphisms() {
                    if cat.src(g) != cat.src(d) {
                        continue;
                    }
                    let p = zigzag_map(&cat, &Zigzag::tau(&cat, g))
                        .map
                        .compose(&zigzag_map(&cat, &Zigzag::sigma(&cat, d)).map);
                    pieces.push(p);
                }
            }
            for e in sg.elements() {
                let mut covered = FixedBitSet::with_capacity(n);
                for p in &pieces {
                    if !p.is_empty() && e.map.extends(p) {
                        covered.union_with(&p.domain(n));
                    }
                }
                assert_eq!(covered, e.map.domain(n));
            }
        }
    }

    #[test]
    fn bounded_edges() {
        let n = fixtures::nat(4);
        let z = Zigzag::tau(&n, n.m("2"));
        let zm = zigzag_map(&n, &z);
        assert!(zm.bounded);
        assert_eq!(zm.edges, [n.m("3"), n.m("4")]);
        assert!(generate_semigroup(&n, 10).is_err());
    }
}
