//! Zigzag sets at a vertex and the ring of sets they generate.
//!
//! The ring 𝒜ᵥ is finite here, so it is handled through its atoms: the
//! classes of elements of vΛ that lie in exactly the same zigzag sets.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use hashbrown::HashMap;

use crate::category::{Mor, Obj, SmallCategory};
use crate::zigzag::Zigzag;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("operation requires a total carrier")]
    NotTotal,
    #[error("ring has {atoms} atoms, above the enumeration limit {limit}")]
    TooLarge { atoms: usize, limit: usize },
    #[error("set is not a union of atoms of the ring")]
    NotInRing,
}

/// A nonempty zigzag set A(ζ) with one witness ζ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSet {
    pub elements: FixedBitSet,
    pub witness: Zigzag,
}

/// 𝒟ᵥ⁽⁰⁾: the distinct nonempty zigzag sets inside vΛ, largest first.
#[derive(Debug, Clone)]
pub struct DZeroFamily {
    pub vertex: Obj,
    pub sets: Vec<DSet>,
    universe: FixedBitSet,
}

impl DZeroFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> &FixedBitSet {
        &self.sets[i].elements
    }

    /// vΛ as a bitset.
    pub fn universe(&self) -> &FixedBitSet {
        &self.universe
    }

    pub fn position(&self, s: &FixedBitSet) -> Option<usize> {
        self.sets.iter().position(|d| &d.elements == s)
    }

    /// Index of vΛ.
    pub fn top(&self) -> usize {
        self.position(&self.universe).expect("vΛ is a zigzag set")
    }

    /// Members of the family contained in `s`.
    pub fn subsets_of(&self, s: &FixedBitSet) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.set(i).is_subset(s)).collect()
    }
}

fn canonical_order(a: &FixedBitSet, b: &FixedBitSet) -> core::cmp::Ordering {
    b.count_ones(..)
        .cmp(&a.count_ones(..))
        .then_with(|| a.ones().cmp(b.ones()))
}

/// 𝒟⁽⁰⁾ at every vertex, indexed by object.
///
/// Rather than enumerating the semigroup, this closes {wΛ} under the two
/// moves S ↦ βS and S ↦ σ^α(S), which produce exactly the ranges of zigzag
/// maps. A set S = A(ζ) maps to βS = A(ζ·(β, r(β))) and
/// σ^α(S) = A(ζ·(r(α), α)).
pub fn build_dzero_all(cat: &SmallCategory) -> Result<Vec<DZeroFamily>, RingError> {
    cat.require_total().map_err(|_| RingError::NotTotal)?;
    let mut found: Vec<HashMap<FixedBitSet, Zigzag>> = alloc::vec![HashMap::new(); cat.num_objects()];
    let mut queue: VecDeque<(Obj, FixedBitSet)> = VecDeque::new();
    for w in cat.objects() {
        let s = cat.set_of(cat.with_range(w).iter().copied());
        found[w.idx()].insert(s.clone(), Zigzag::vertex(cat, w));
        queue.push_back((w, s));
    }
    while let Some((w, s)) = queue.pop_front() {
        let z = found[w.idx()][&s].clone();
        let mut push = |target: Obj, next: FixedBitSet, step: Zigzag| {
            if next.is_clear() || found[target.idx()].contains_key(&next) {
                return;
            }
            let wz = z.concat(cat, &step).expect("shapes agree by construction");
            found[target.idx()].insert(next.clone(), wz);
            queue.push_back((target, next));
        };
        for &b in cat.with_source(w) {
            if cat.is_identity(b) {
                continue;
            }
            let mut next = cat.empty_set();
            for x in s.ones() {
                if let Some(y) = cat.compose(b, Mor(x as u32)) {
                    next.insert(y.idx());
                }
            }
            push(cat.dst(b), next, Zigzag::sigma(cat, b));
        }
        for &a in cat.with_range(w) {
            if cat.is_identity(a) {
                continue;
            }
            let mut next = cat.empty_set();
            for &(y, ay) in cat.right_products(a) {
                if s.contains(ay.idx()) {
                    next.insert(y.idx());
                }
            }
            push(cat.src(a), next, Zigzag::tau(cat, a));
        }
    }
    Ok(cat
        .objects()
        .map(|v| {
            let mut sets: Vec<DSet> = found[v.idx()]
                .drain()
                .map(|(elements, witness)| DSet { elements, witness })
                .collect();
            sets.sort_by(|a, b| canonical_order(&a.elements, &b.elements));
            DZeroFamily {
                vertex: v,
                sets,
                universe: cat.set_of(cat.with_range(v).iter().copied()),
            }
        })
        .collect())
}

pub fn build_dzero(cat: &SmallCategory, v: Obj) -> Result<DZeroFamily, RingError> {
    Ok(build_dzero_all(cat)?.swap_remove(v.idx()))
}

/// E ∖ (F₁ ∪ … ∪ Fₙ) with all sets drawn from 𝒟ᵥ⁽⁰⁾ (by index).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DTerm {
    pub set: usize,
    pub minus: Vec<usize>,
}

/// An element of 𝒜ᵥ with a disjoint normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSet {
    pub vertex: Obj,
    pub elements: FixedBitSet,
    pub normal_form: Vec<DTerm>,
}

/// 𝒜ᵥ described by its atoms.
#[derive(Debug, Clone)]
pub struct SetRing {
    pub family: DZeroFamily,
    atoms: Vec<FixedBitSet>,
    /// Smallest D-set containing each atom.
    atom_dset: Vec<usize>,
    atom_of: HashMap<usize, usize>,
}

impl SetRing {
    pub fn new(family: DZeroFamily) -> Self {
        let mut by_signature: HashMap<Vec<usize>, FixedBitSet> = HashMap::new();
        let cap = family.universe.len();
        for x in family.universe.ones() {
            let sig: Vec<usize> = (0..family.len()).filter(|&i| family.set(i).contains(x)).collect();
            by_signature
                .entry(sig)
                .or_insert_with(|| FixedBitSet::with_capacity(cap))
                .insert(x);
        }
        let mut atoms: Vec<(Vec<usize>, FixedBitSet)> = by_signature.into_iter().collect();
        atoms.sort_by(|a, b| a.1.ones().cmp(b.1.ones()));
        let mut atom_of = HashMap::new();
        let mut atom_dset = Vec::new();
        let mut out = Vec::new();
        for (i, (sig, atom)) in atoms.into_iter().enumerate() {
            let mut meet = family.universe.clone();
            for &s in &sig {
                meet.intersect_with(family.set(s));
            }
            let e = family.position(&meet).expect("𝒟⁽⁰⁾ is closed under nonempty intersection");
            atom_dset.push(e);
            for x in atom.ones() {
                atom_of.insert(x, i);
            }
            out.push(atom);
        }
        SetRing {
            family,
            atoms: out,
            atom_dset,
            atom_of,
        }
    }

    pub fn vertex(&self) -> Obj {
        self.family.vertex
    }

    pub fn atoms(&self) -> &[FixedBitSet] {
        &self.atoms
    }

    /// The smallest zigzag set containing atom `a`.
    pub fn atom_dset(&self, a: usize) -> usize {
        self.atom_dset[a]
    }

    pub fn atom_of(&self, m: Mor) -> Option<usize> {
        self.atom_of.get(&m.idx()).copied()
    }

    /// Whether `s` is a union of atoms, i.e. lies in 𝒜ᵥ.
    pub fn contains(&self, s: &FixedBitSet) -> bool {
        if !s.is_subset(&self.family.universe) {
            return false;
        }
        s.ones().all(|x| self.atoms[self.atom_of[&x]].is_subset(s))
    }

    pub fn atoms_in(&self, s: &FixedBitSet) -> Vec<usize> {
        (0..self.atoms.len()).filter(|&a| self.atoms[a].is_subset(s)).collect()
    }

    /// Normal form of an atom: its smallest zigzag set minus the maximal
    /// zigzag subsets missing it.
    pub fn atom_term(&self, a: usize) -> DTerm {
        let e = self.atom_dset[a];
        let x = self.atoms[a].ones().next().expect("atoms are nonempty");
        let es = self.family.set(e);
        let mut cands: Vec<usize> = (0..self.family.len())
            .filter(|&g| self.family.set(g).is_subset(es) && !self.family.set(g).contains(x))
            .collect();
        let all = cands.clone();
        cands.retain(|&g| {
            !all.iter()
                .any(|&h| h != g && self.family.set(g).is_subset(self.family.set(h)))
        });
        DTerm { set: e, minus: cands }
    }

    pub fn evaluate_term(&self, t: &DTerm) -> FixedBitSet {
        let mut s = self.family.set(t.set).clone();
        for &f in &t.minus {
            s.difference_with(self.family.set(f));
        }
        s
    }

    pub fn evaluate(&self, terms: &[DTerm]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.family.universe.len());
        for t in terms {
            s.union_with(&self.evaluate_term(t));
        }
        s
    }

    /// Disjoint decomposition into terms E ∖ ∪Fᵢ, chosen greedily: the next
    /// term is the largest E ∩ R (R the uncovered part) expressible as E
    /// minus zigzag subsets disjoint from R, else a single atom.
    pub fn normal_form(&self, s: &FixedBitSet) -> Result<Vec<DTerm>, RingError> {
        if !self.contains(s) {
            return Err(RingError::NotInRing);
        }
        let fam = &self.family;
        let mut rest = s.clone();
        let mut terms = Vec::new();
        while !rest.is_clear() {
            let mut order: Vec<(usize, usize)> = (0..fam.len())
                .map(|e| (fam.set(e).intersection_count(&rest), e))
                .filter(|p| p.0 > 0)
                .collect();
            order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut chosen = None;
            for &(_, e) in &order {
                let es = fam.set(e);
                let minus: Vec<usize> = (0..fam.len())
                    .filter(|&f| f != e && fam.set(f).is_subset(es) && fam.set(f).is_disjoint(&rest))
                    .collect();
                let t = DTerm { set: e, minus };
                if self.evaluate_term(&t).is_subset(&rest) {
                    chosen = Some(t);
                    break;
                }
            }
            let t = chosen.unwrap_or_else(|| {
                let x = rest.ones().next().expect("nonempty");
                self.atom_term(self.atom_of[&x])
            });
            rest.difference_with(&self.evaluate_term(&t));
            terms.push(t);
        }
        Ok(terms)
    }

    /// Every element of 𝒜ᵥ, ordered by atom subset mask.
    pub fn elements(&self, atom_limit: usize) -> Result<Vec<RingSet>, RingError> {
        let k = self.atoms.len();
        if k > atom_limit || k >= 31 {
            return Err(RingError::TooLarge {
                atoms: k,
                limit: atom_limit,
            });
        }
        let mut out = Vec::with_capacity(1 << k);
        for mask in 0u32..(1u32 << k) {
            let mut s = FixedBitSet::with_capacity(self.family.universe.len());
            for a in 0..k {
                if mask & (1 << a) != 0 {
                    s.union_with(&self.atoms[a]);
                }
            }
            let normal_form = self.normal_form(&s)?;
            out.push(RingSet {
                vertex: self.vertex(),
                elements: s,
                normal_form,
            });
        }
        Ok(out)
    }
}

pub const DEFAULT_ATOM_LIMIT: usize = 20;

/// 𝒜ᵥ with normal forms.
pub fn generate_ring(cat: &SmallCategory, v: Obj, atom_limit: usize) -> Result<Vec<RingSet>, RingError> {
    SetRing::new(build_dzero(cat, v)?).elements(atom_limit)
}

/// Violated condition when extending a map on 𝒟ᵥ⁽⁰⁾ to a ring homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomFailure {
    /// μ(E ∩ F) ≠ μ(E) ∩ μ(F); `meet` is None when E ∩ F = ∅.
    Intersection { e: usize, f: usize, meet: Option<usize> },
    /// E = ∪Fᵢ but μ(E) ≠ ∪μ(Fᵢ).
    Union { e: usize, family: Vec<usize>, missing: usize },
}

/// A Boolean ring homomorphism 𝒜ᵥ → P(target), stored on atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingHom {
    pub atom_images: Vec<FixedBitSet>,
}

impl RingHom {
    pub fn apply(&self, ring: &SetRing, s: &FixedBitSet) -> Result<FixedBitSet, RingError> {
        if !ring.contains(s) {
            return Err(RingError::NotInRing);
        }
        let mut out = FixedBitSet::with_capacity(self.atom_images.first().map_or(0, |a| a.len()));
        for a in ring.atoms_in(s) {
            out.union_with(&self.atom_images[a]);
        }
        Ok(out)
    }
}

/// Extends μ : 𝒟ᵥ⁽⁰⁾ → P(target) to 𝒜ᵥ, if μ respects intersections and
/// finite covering unions.
pub fn extend_to_ring_hom(ring: &SetRing, mu: &[FixedBitSet]) -> Result<RingHom, HomFailure> {
    let fam = &ring.family;
    assert_eq!(mu.len(), fam.len());
    let cap = mu.first().map_or(0, |m| m.len());
    for e in 0..fam.len() {
        for f in e..fam.len() {
            let mut meet = fam.set(e).clone();
            meet.intersect_with(fam.set(f));
            let mut image = mu[e].clone();
            image.intersect_with(&mu[f]);
            let (idx, expect) = if meet.is_clear() {
                (None, FixedBitSet::with_capacity(cap))
            } else {
                let i = fam.position(&meet).expect("closed under intersection");
                (Some(i), mu[i].clone())
            };
            if expect != image {
                return Err(HomFailure::Intersection { e, f, meet: idx });
            }
        }
    }
    // For a point x ∈ μ(E), the largest subfamily avoiding x decides
    // whether some cover of E fails at x.
    for e in 0..fam.len() {
        let es = fam.set(e);
        let proper: Vec<usize> = (0..fam.len()).filter(|&f| f != e && fam.set(f).is_subset(es)).collect();
        for x in mu[e].ones() {
            let family: Vec<usize> = proper.iter().copied().filter(|&f| !mu[f].contains(x)).collect();
            let mut un = FixedBitSet::with_capacity(es.len());
            for &f in &family {
                un.union_with(fam.set(f));
            }
            if &un == es {
                return Err(HomFailure::Union { e, family, missing: x });
            }
        }
    }
    let atom_images = (0..ring.atoms().len())
        .map(|a| {
            let t = ring.atom_term(a);
            let mut img = mu[t.set].clone();
            for &g in &t.minus {
                img.difference_with(&mu[g]);
            }
            img
        })
        .collect();
    Ok(RingHom { atom_images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::String;

    fn named(cat: &SmallCategory, fam: &DZeroFamily) -> Vec<Vec<String>> {
        fam.sets
            .iter()
            .map(|d| d.elements.ones().map(|i| String::from(cat.name(Mor(i as u32)))).collect())
            .collect()
    }

    #[test]
    fn dzero_examples() {
        let par = fixtures::par();
        let u = par.lookup_object("u").unwrap();
        assert_eq!(named(&par, &build_dzero(&par, u).unwrap()), [alloc::vec!["u", "f", "g"], alloc::vec!["f"], alloc::vec!["g"]]);
        let g = fixtures::group(2);
        assert_eq!(build_dzero(&g, Obj(0)).unwrap().len(), 1);
        let kg = fixtures::kg(2);
        let fam = build_dzero(&kg, kg.lookup_object("u").unwrap()).unwrap();
        assert_eq!(
            named(&kg, &fam),
            [
                alloc::vec!["u", "alpha", "beta", "alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["alpha", "alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["beta", "alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["alpha.gamma1"],
                alloc::vec!["alpha.gamma2"],
            ]
        );
    }

    #[test]
    fn witnesses_give_their_sets() {
        for cat in [fixtures::kg(3), fixtures::sep(3, 1), fixtures::par()] {
            for fam in build_dzero_all(&cat).unwrap() {
                for d in &fam.sets {
                    assert_eq!(d.witness.src(&cat), fam.vertex);
                    assert_eq!(crate::zigzag::zigzag_set(&cat, &d.witness), d.elements);
                }
            }
        }
    }

    #[test]
    fn ring_examples() {
        let par = fixtures::par();
        let u = par.lookup_object("u").unwrap();
        assert_eq!(generate_ring(&par, u, 20).unwrap().len(), 8);
        assert_eq!(generate_ring(&fixtures::group(2), Obj(0), 20).unwrap().len(), 2);
        let kg = fixtures::kg(2);
        let ring = generate_ring(&kg, kg.lookup_object("u").unwrap(), 20).unwrap();
        let just_u = kg.set_of([kg.m("u")]);
        assert!(ring.iter().any(|r| r.elements == just_u));
        for r in &ring {
            let sr = SetRing::new(build_dzero(&kg, kg.lookup_object("u").unwrap()).unwrap());
            assert_eq!(sr.evaluate(&r.normal_form), r.elements);
        }
    }

    #[test]
    fn normal_forms_are_disjoint() {
        let cat = fixtures::kg(3);
        let ring = SetRing::new(build_dzero(&cat, cat.lookup_object("u").unwrap()).unwrap());
        for r in ring.elements(20).unwrap() {
            let mut seen = cat.empty_set();
            for t in &r.normal_form {
                let s = ring.evaluate_term(t);
                assert!(s.is_disjoint(&seen));
                seen.union_with(&s);
                for &f in &t.minus {
                    assert!(ring.family.set(f).is_subset(ring.family.set(t.set)));
                }
            }
            assert_eq!(seen, r.elements);
        }
    }

    #[test]
    fn identity_and_zero_homs() {
        let kg = fixtures::kg(2);
        let ring = SetRing::new(build_dzero(&kg, kg.lookup_object("u").unwrap()).unwrap());
        let mu: Vec<FixedBitSet> = ring.family.sets.iter().map(|d| d.elements.clone()).collect();
        let h = extend_to_ring_hom(&ring, &mu).unwrap();
        for r in ring.elements(20).unwrap() {
            assert_eq!(h.apply(&ring, &r.elements).unwrap(), r.elements);
        }
        let zero: Vec<FixedBitSet> = mu.iter().map(|_| FixedBitSet::with_capacity(4)).collect();
        let h = extend_to_ring_hom(&ring, &zero).unwrap();
        assert!(h.atom_images.iter().all(|a| a.is_clear()));
    }

    fn bits(cap: usize, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(cap);
        for &x in xs {
            s.insert(x);
        }
        s
    }

    #[test]
    fn failing_homs() {
        let par = fixtures::par();
        let ring = SetRing::new(build_dzero(&par, par.lookup_object("u").unwrap()).unwrap());
        // order: uΛ, {f}, {g}
        let mu = [bits(3, &[0, 1]), bits(3, &[0]), bits(3, &[0])];
        assert!(matches!(extend_to_ring_hom(&ring, &mu), Err(HomFailure::Intersection { meet: None, .. })));
        let mu = [bits(3, &[0, 1, 2]), bits(3, &[0]), bits(3, &[1])];
        let h = extend_to_ring_hom(&ring, &mu).unwrap();
        assert_eq!(h.apply(&ring, &par.set_of([par.m("u")])).unwrap(), bits(3, &[2]));

        let kg = fixtures::kg(2);
        let ring = SetRing::new(build_dzero(&kg, kg.lookup_object("u").unwrap()).unwrap());
        // {αγ₁,αγ₂} = {αγ₁} ∪ {αγ₂}, but its image is larger.
        let mu = [
            bits(3, &[0, 1, 2]),
            bits(3, &[0, 1, 2]),
            bits(3, &[0, 1, 2]),
            bits(3, &[0, 1, 2]),
            bits(3, &[0]),
            bits(3, &[1]),
        ];
        assert_eq!(
            extend_to_ring_hom(&ring, &mu),
            Err(HomFailure::Union { e: 3, family: alloc::vec![4, 5], missing: 2 })
        );
    }

    /// Brute-force closure of 𝒟⁽⁰⁾ under ∪, ∩ and ∖ equals the atom unions.
    #[test]
    fn ring_matches_closure_oracle() {
        for cat in [fixtures::par(), fixtures::kg(2), fixtures::kg(3)] {
            for v in cat.objects() {
                let fam = build_dzero(&cat, v).unwrap();
                let mut closed: Vec<FixedBitSet> = fam.sets.iter().map(|d| d.elements.clone()).collect();
                closed.push(cat.empty_set());
                loop {
                    let mut added = false;
                    let snapshot = closed.clone();
                    for a in &snapshot {
                        for b in &snapshot {
                            let mut u = a.clone();
                            u.union_with(b);
                            let mut d = a.clone();
                            d.difference_with(b);
                            for s in [u, d] {
                                if !closed.contains(&s) {
                                    closed.push(s);
                                    added = true;
                                }
                            }
                        }
                    }
                    if !added {
                        break;
                    }
                }
                let ring = SetRing::new(fam).elements(20).unwrap();
                assert_eq!(closed.len(), ring.len());
                for r in &ring {
                    assert!(closed.contains(&r.elements));
                }
            }
        }
    }

    /// Finitely aligned case: principal cones alone generate the same ring.
    #[test]
    fn cones_generate_ring() {
        for cat in [fixtures::par(), fixtures::kg(2)] {
            for v in cat.objects() {
                let ring = SetRing::new(build_dzero(&cat, v).unwrap());
                let cones: Vec<FixedBitSet> = cat.with_range(v).iter().map(|&a| cat.cone(a)).collect();
                for x in ring.family.universe().ones() {
                    let sig: Vec<bool> = cones.iter().map(|c| c.contains(x)).collect();
                    for y in ring.family.universe().ones() {
                        let same = cones.iter().zip(&sig).all(|(c, &s)| c.contains(y) == s);
                        let same_atom = ring.atom_of(Mor(x as u32)) == ring.atom_of(Mor(y as u32));
                        assert_eq!(same, same_atom);
                    }
                }
            }
        }
    }

    /// φ_ζ maps ring sets at s(ζ) into ring sets at r(ζ).
    #[test]
    fn ring_invariant_under_zigzag_maps() {
        let cat = fixtures::kg(2);
        let sg = crate::zigzag::generate_semigroup(&cat, 10_000).unwrap();
        let rings: Vec<SetRing> = build_dzero_all(&cat).unwrap().into_iter().map(SetRing::new).collect();
        for e in sg.elements() {
            let Some(w) = &e.witness else { continue };
            let (s, r) = (w.src(&cat), w.dst(&cat));
            for set in rings[s.idx()].elements(20).unwrap() {
                let mut img = cat.empty_set();
                for x in set.elements.ones() {
                    if let Some(y) = e.map.apply(Mor(x as u32)) {
                        img.insert(y.idx());
                    }
                }
                assert!(rings[r.idx()].contains(&img));
            }
        }
    }
}
