//! Germ groupoids G₁ and G₂ over the spectrum.
//!
//! A germ [ζ, x] is taken over the generated semigroup element of ζ. The
//! smallest set of 𝒰ₓ is the atom of x, so [ζ, x]₂ is decided by φ_ζ on
//! that atom and [ζ, x]₁ by the image point Φ_ζ(x).

use alloc::string::String;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use hashbrown::{HashMap, HashSet};

use crate::category::{Mor, Obj, SmallCategory};
use crate::spectrum::Spectrum;
use crate::zigzag::{zigzag_map, InverseSemigroup, PartialMap, Zigzag};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GermError {
    #[error("point {point} is not in the domain of the map")]
    Domain { point: usize },
    #[error("image of an atom is not an atom")]
    NotAnAtom,
    #[error("not a subcategory: {0}")]
    NotSubcategory(String),
    #[error("groupoid axiom fails: {0}")]
    Axiom(String),
    #[error("point {0} is not a unit")]
    NotAUnit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GermIndex {
    One,
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    One(usize, usize),
    Two(usize, PartialMap),
}

#[derive(Debug, Clone)]
pub struct Germ {
    pub source: usize,
    pub range: usize,
    /// First semigroup element (canonical order) representing the germ.
    pub element: usize,
    /// The representative's map restricted to the source atom.
    pub local: PartialMap,
}

/// A finite groupoid of germs; units are point ids of the spectrum.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    pub index: GermIndex,
    pub units: Vec<usize>,
    germs: Vec<Germ>,
    reps: Vec<Vec<usize>>,
    lookup: HashMap<Key, usize>,
    unit_germ: HashMap<usize, usize>,
}

/// Borrowed view of a total category with its semigroup and spectrum.
#[derive(Debug, Clone, Copy)]
pub struct GermContext<'a> {
    pub cat: &'a SmallCategory,
    pub sg: &'a InverseSemigroup,
    pub spec: &'a Spectrum,
}

impl<'a> GermContext<'a> {
    pub fn new(cat: &'a SmallCategory, sg: &'a InverseSemigroup, spec: &'a Spectrum) -> Self {
        GermContext { cat, sg, spec }
    }

    /// x ∈ Â(ζ), i.e. the atom of x lies in the domain.
    pub fn in_domain(&self, map: &PartialMap, x: usize) -> bool {
        self.spec.atom(x).ones().all(|m| map.in_domain(Mor(m as u32)))
    }

    /// Φ for a partial map at a point.
    pub fn phi_map(&self, map: &PartialMap, x: usize) -> Result<usize, GermError> {
        if !self.in_domain(map, x) {
            return Err(GermError::Domain { point: x });
        }
        let image: Vec<Mor> = self
            .spec
            .atom(x)
            .ones()
            .map(|m| map.apply(Mor(m as u32)).expect("in domain"))
            .collect();
        let y = self
            .spec
            .point_of_morphism(self.cat, image[0])
            .ok_or(GermError::NotAnAtom)?;
        if self.cat.set_of(image) != *self.spec.atom(y) {
            return Err(GermError::NotAnAtom);
        }
        Ok(y)
    }

    /// Φ_ζ(x).
    pub fn phi_point(&self, z: &Zigzag, x: usize) -> Result<usize, GermError> {
        self.phi_map(&zigzag_map(self.cat, z).map, x)
    }

    fn local(&self, map: &PartialMap, x: usize) -> PartialMap {
        map.restrict(self.spec.atom(x))
    }

    fn key(&self, i: GermIndex, map: &PartialMap, x: usize) -> Result<Key, GermError> {
        Ok(match i {
            GermIndex::One => Key::One(x, self.phi_map(map, x)?),
            GermIndex::Two => {
                if !self.in_domain(map, x) {
                    return Err(GermError::Domain { point: x });
                }
                Key::Two(x, self.local(map, x))
            }
        })
    }

    /// [ζ, x]ᵢ = [ζ′, x]ᵢ.
    pub fn germ_equal(&self, i: GermIndex, z1: &Zigzag, z2: &Zigzag, x: usize) -> Result<bool, GermError> {
        let m1 = zigzag_map(self.cat, z1).map;
        let m2 = zigzag_map(self.cat, z2).map;
        self.germ_equal_maps(i, &m1, &m2, x)
    }

    pub fn germ_equal_maps(&self, i: GermIndex, m1: &PartialMap, m2: &PartialMap, x: usize) -> Result<bool, GermError> {
        Ok(self.key(i, m1, x)? == self.key(i, m2, x)?)
    }

    /// Points in Â for a semigroup element.
    pub fn domain_points(&self, s: usize) -> Vec<usize> {
        let map = &self.sg.get(s).map;
        let Some((first, _)) = map.pairs().next() else {
            return Vec::new();
        };
        self.spec
            .at(self.cat.dst(first))
            .filter(|&x| self.in_domain(map, x))
            .collect()
    }

    /// Gᵢ(Λ) over all points.
    pub fn build_groupoid(&self, i: GermIndex) -> Result<FiniteGroupoid, GermError> {
        let mut germs: Vec<Germ> = Vec::new();
        let mut reps: Vec<Vec<usize>> = Vec::new();
        let mut lookup: HashMap<Key, usize> = HashMap::new();
        for s in 0..self.sg.len() {
            let map = &self.sg.get(s).map;
            for x in self.domain_points(s) {
                let key = self.key(i, map, x)?;
                match lookup.get(&key) {
                    Some(&g) => reps[g].push(s),
                    None => {
                        lookup.insert(key, germs.len());
                        germs.push(Germ {
                            source: x,
                            range: self.phi_map(map, x)?,
                            element: s,
                            local: self.local(map, x),
                        });
                        reps.push(alloc::vec![s]);
                    }
                }
            }
        }
        let units: Vec<usize> = (0..self.spec.len()).collect();
        let mut unit_germ = HashMap::new();
        for &x in &units {
            let v = self.spec.point(x).vertex;
            let id = PartialMap::identity_on(self.cat.with_range(v).iter().copied());
            unit_germ.insert(x, lookup[&self.key(i, &id, x)?]);
        }
        Ok(FiniteGroupoid {
            index: i,
            units,
            germs,
            reps,
            lookup,
            unit_germ,
        })
    }

    /// The germ [s, y] in `g`, if y ∈ Â(s) and the germ is present.
    pub fn germ_of(&self, g: &FiniteGroupoid, s: usize, y: usize) -> Option<usize> {
        let key = self.key(g.index, &self.sg.get(s).map, y).ok()?;
        g.lookup.get(&key).copied()
    }

    /// [s, E] = {[s, y] : y ∈ Ê} for E ⊆ dom s, as germ ids of `g`.
    pub fn base_set(&self, g: &FiniteGroupoid, s: usize, e: &FixedBitSet) -> Vec<usize> {
        let map = &self.sg.get(s).map;
        let mut out: Vec<usize> = self
            .domain_points(s)
            .into_iter()
            .filter(|&y| self.spec.in_hat(y, e))
            .filter_map(|y| self.key(g.index, map, y).ok())
            .filter_map(|k| g.lookup.get(&k).copied())
            .collect();
        out.sort();
        out
    }

    /// Smallest base neighbourhoods [s, atom(x)] of a germ, one per
    /// representative.
    fn neighbourhoods(&self, g: &FiniteGroupoid, germ: usize) -> Vec<Vec<usize>> {
        let x = g.germs[germ].source;
        g.reps[germ]
            .iter()
            .map(|&s| self.base_set(g, s, self.spec.atom(x)))
            .collect()
    }

    /// Every pair of distinct germs has disjoint base neighbourhoods. Only
    /// the smallest neighbourhood per representative needs checking since
    /// [s, E] shrinks with E.
    pub fn is_hausdorff(&self, g: &FiniteGroupoid) -> bool {
        let nbs: Vec<Vec<Vec<usize>>> = (0..g.len()).map(|i| self.neighbourhoods(g, i)).collect();
        for a in 0..g.len() {
            for b in a + 1..g.len() {
                let sep = nbs[a]
                    .iter()
                    .any(|u| nbs[b].iter().any(|w| u.iter().all(|x| !w.contains(x))));
                if !sep {
                    return false;
                }
            }
        }
        true
    }

    /// Whether a set of germs is open and closed in the base topology.
    pub fn is_clopen(&self, g: &FiniteGroupoid, subset: &[bool]) -> bool {
        (0..g.len()).all(|i| {
            self.neighbourhoods(g, i)
                .iter()
                .any(|u| u.iter().all(|&h| subset[h] == subset[i]))
        })
    }

    /// The condition under which G₁ = G₂: for each nonempty E ∈ 𝒜, α ∈ E
    /// and nontrivial invertible μ at s(α), some β with αβ ∈ E has
    /// μβ ∉ βΛ or μ⁻¹β ∉ βΛ. The condition is hardest for the smallest E
    /// containing α, its atom.
    pub fn condition_two(&self) -> ConditionTwo {
        let cat = self.cat;
        for a in cat.morphisms() {
            let v = cat.src(a);
            let x = self
                .spec
                .point_of_morphism(cat, a)
                .expect("every morphism lies in an atom");
            let atom = self.spec.atom(x);
            for mu in cat.invertibles(v) {
                if cat.is_identity(mu) {
                    continue;
                }
                let mu_inv = cat.inverse(mu).expect("invertible");
                let ok = cat.with_range(v).iter().any(|&b| {
                    let in_e = cat.compose(a, b).is_some_and(|ab| atom.contains(ab.idx()));
                    let moves = |m: Mor| cat.compose(m, b).is_none_or(|mb| !cat.in_cone(b, mb));
                    in_e && (moves(mu) || moves(mu_inv))
                });
                if !ok {
                    return ConditionTwo {
                        holds: false,
                        counterexample: Some((a, mu)),
                    };
                }
            }
        }
        ConditionTwo {
            holds: true,
            counterexample: None,
        }
    }

    /// G_i restricted to germs of zigzags with entries in the subcategory
    /// `sub`, over points at its objects.
    pub fn restrict_subcategory(&self, full: &FiniteGroupoid, sub: &[Mor]) -> Result<FiniteGroupoid, GermError> {
        let cat = self.cat;
        let members = cat.set_of(sub.iter().copied());
        for &a in sub {
            for o in [cat.src(a), cat.dst(a)] {
                if !members.contains(cat.identity(o).idx()) {
                    return Err(GermError::NotSubcategory(alloc::format!(
                        "identity of {} missing",
                        cat.object_name(o)
                    )));
                }
            }
            for &(b, ab) in cat.right_products(a) {
                if members.contains(b.idx()) && !members.contains(ab.idx()) {
                    return Err(GermError::NotSubcategory(alloc::format!(
                        "{}{} = {} missing",
                        cat.name(a),
                        cat.name(b),
                        cat.name(ab)
                    )));
                }
            }
        }
        let objects: Vec<Obj> = sub.iter().filter_map(|&a| cat.as_object(a)).collect();
        let mut gens: Vec<usize> = Vec::new();
        let find = |z: Zigzag| self.sg.find(&zigzag_map(cat, &z).map).expect("generator in semigroup");
        for &v in &objects {
            gens.push(find(Zigzag::vertex(cat, v)));
        }
        for &a in sub.iter().filter(|&&a| !cat.is_identity(a)) {
            gens.push(find(Zigzag::tau(cat, a)));
            gens.push(find(Zigzag::sigma(cat, a)));
        }
        let mut seen: HashSet<usize> = gens.iter().copied().collect();
        let mut queue: Vec<usize> = seen.iter().copied().collect();
        queue.sort();
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for &g in &gens {
                let p = self.sg.product(e, g);
                if seen.insert(p) {
                    queue.push(p);
                }
            }
        }
        queue.sort();
        let mut keep = alloc::vec![false; full.len()];
        for &s in &queue {
            let map = &self.sg.get(s).map;
            for x in self.domain_points(s) {
                if !objects.contains(&self.spec.point(x).vertex) {
                    continue;
                }
                let k = self.key(full.index, map, x)?;
                keep[full.lookup[&k]] = true;
            }
        }
        let units: Vec<usize> = full
            .units
            .iter()
            .copied()
            .filter(|&x| objects.contains(&self.spec.point(x).vertex))
            .collect();
        let sub_g = full.restrict(&keep, units);
        sub_g.verify()?;
        if !self.is_clopen(full, &keep) {
            return Err(GermError::Axiom("subgroupoid is not clopen".into()));
        }
        Ok(sub_g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionTwo {
    pub holds: bool,
    /// (α, μ) with no suitable β.
    pub counterexample: Option<(Mor, Mor)>,
}

impl FiniteGroupoid {
    pub fn len(&self) -> usize {
        self.germs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.germs.is_empty()
    }

    pub fn germs(&self) -> &[Germ] {
        &self.germs
    }

    pub fn germ(&self, g: usize) -> &Germ {
        &self.germs[g]
    }

    /// Semigroup elements representing a germ.
    pub fn representatives(&self, g: usize) -> &[usize] {
        &self.reps[g]
    }

    pub fn unit(&self, x: usize) -> Result<usize, GermError> {
        self.unit_germ.get(&x).copied().ok_or(GermError::NotAUnit(x))
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit_germ.get(&self.germs[g].source) == Some(&g)
    }

    fn key_of(&self, source: usize, range: usize, local: &PartialMap) -> Key {
        match self.index {
            GermIndex::One => Key::One(source, range),
            GermIndex::Two => Key::Two(source, local.clone()),
        }
    }

    /// g·h, defined when s(g) = r(h).
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        let (a, b) = (&self.germs[g], &self.germs[h]);
        if a.source != b.range {
            return None;
        }
        let local = a.local.compose(&b.local);
        self.lookup.get(&self.key_of(b.source, a.range, &local)).copied()
    }

    pub fn inverse(&self, g: usize) -> Option<usize> {
        let a = &self.germs[g];
        self.lookup
            .get(&self.key_of(a.range, a.source, &a.local.inverse()))
            .copied()
    }

    /// Germs in `keep` over the given units, reindexed.
    pub fn restrict(&self, keep: &[bool], units: Vec<usize>) -> FiniteGroupoid {
        let mut map = alloc::vec![usize::MAX; self.len()];
        let mut germs = Vec::new();
        let mut reps = Vec::new();
        for g in 0..self.len() {
            if keep[g] {
                map[g] = germs.len();
                germs.push(self.germs[g].clone());
                reps.push(self.reps[g].clone());
            }
        }
        let lookup = self
            .lookup
            .iter()
            .filter(|(_, &g)| keep[g])
            .map(|(k, &g)| (k.clone(), map[g]))
            .collect();
        let unit_germ = units
            .iter()
            .filter_map(|&x| self.unit_germ.get(&x).filter(|&&g| keep[g]).map(|&g| (x, map[g])))
            .collect();
        FiniteGroupoid {
            index: self.index,
            units,
            germs,
            reps,
            lookup,
            unit_germ,
        }
    }

    /// G restricted to germs with source and range in `points`.
    pub fn restrict_to_points(&self, points: &[usize]) -> FiniteGroupoid {
        let keep: Vec<bool> = self
            .germs
            .iter()
            .map(|g| points.contains(&g.source) && points.contains(&g.range))
            .collect();
        self.restrict(&keep, points.to_vec())
    }

    /// Germs with source x, in id order.
    pub fn from_unit(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&g| self.germs[g].source == x).collect()
    }

    /// Checks units, inverses, closure and associativity.
    pub fn verify(&self) -> Result<(), GermError> {
        let fail = |s: &str, g: usize| Err(GermError::Axiom(alloc::format!("{s} at germ {g}")));
        for &x in &self.units {
            match self.unit_germ.get(&x) {
                Some(&u) if self.germs[u].source == x && self.germs[u].range == x => {}
                _ => return fail("missing unit", x),
            }
        }
        let mut by_range: HashMap<usize, Vec<usize>> = HashMap::new();
        for g in 0..self.len() {
            by_range.entry(self.germs[g].range).or_default().push(g);
        }
        for g in 0..self.len() {
            let (s, r) = (self.germs[g].source, self.germs[g].range);
            let (us, ur) = (self.unit(s)?, self.unit(r)?);
            if self.compose(g, us) != Some(g) || self.compose(ur, g) != Some(g) {
                return fail("unit law", g);
            }
            let Some(inv) = self.inverse(g) else {
                return fail("missing inverse", g);
            };
            if self.compose(inv, g) != Some(us) || self.compose(g, inv) != Some(ur) {
                return fail("inverse law", g);
            }
            for &h in by_range.get(&s).map(|v| v.as_slice()).unwrap_or(&[]) {
                let Some(gh) = self.compose(g, h) else {
                    return fail("not closed", g);
                };
                if self.germs[gh].source != self.germs[h].source || self.germs[gh].range != r {
                    return fail("source/range of product", g);
                }
                let hs = self.germs[h].source;
                for &k in by_range.get(&hs).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let l = self.compose(gh, k);
                    let rr = self.compose(h, k).and_then(|hk| self.compose(g, hk));
                    if l.is_none() || l != rr {
                        return fail("associativity", g);
                    }
                }
            }
        }
        Ok(())
    }
}

/// The subcategory generated by `gens`: closure under composition plus
/// the identities at all sources and ranges.
pub fn generate_subcategory(cat: &SmallCategory, gens: &[Mor]) -> Vec<Mor> {
    let mut set = cat.empty_set();
    for &a in gens {
        set.insert(a.idx());
        set.insert(cat.identity(cat.src(a)).idx());
        set.insert(cat.identity(cat.dst(a)).idx());
    }
    loop {
        let current: Vec<Mor> = set.ones().map(|i| Mor(i as u32)).collect();
        let before = set.count_ones(..);
        for &a in &current {
            for &(b, ab) in cat.right_products(a) {
                if set.contains(b.idx()) {
                    set.insert(ab.idx());
                }
            }
        }
        if set.count_ones(..) == before {
            return current;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::zigzag::generate_semigroup;

    struct Fixture {
        cat: SmallCategory,
        sg: InverseSemigroup,
        spec: Spectrum,
    }

    fn fixture(cat: SmallCategory) -> Fixture {
        let sg = generate_semigroup(&cat, 100_000).unwrap();
        let spec = Spectrum::compute(&cat).unwrap();
        Fixture { cat, sg, spec }
    }

    impl Fixture {
        fn ctx(&self) -> GermContext<'_> {
            GermContext::new(&self.cat, &self.sg, &self.spec)
        }
    }

    #[test]
    fn group_dichotomy() {
        let f = fixture(fixtures::group(2));
        let ctx = f.ctx();
        let g1 = ctx.build_groupoid(GermIndex::One).unwrap();
        let g2 = ctx.build_groupoid(GermIndex::Two).unwrap();
        assert_eq!(g1.len(), 1);
        assert_eq!(g2.len(), 2);
        g1.verify().unwrap();
        g2.verify().unwrap();
        let z = Zigzag::from_ids(&f.cat, &["g", "e"]).unwrap();
        let id = Zigzag::vertex(&f.cat, Obj(0));
        assert!(ctx.germ_equal(GermIndex::One, &z, &id, 0).unwrap());
        assert!(!ctx.germ_equal(GermIndex::Two, &z, &id, 0).unwrap());
        assert_eq!(ctx.phi_point(&z, 0).unwrap(), 0);
        assert!(ctx.is_hausdorff(&g2));
        let c2 = ctx.condition_two();
        assert!(!c2.holds);
        assert_eq!(c2.counterexample, Some((f.cat.m("e"), f.cat.m("g"))));
    }

    #[test]
    fn par_groupoids_coincide() {
        let f = fixture(fixtures::par());
        let ctx = f.ctx();
        let g1 = ctx.build_groupoid(GermIndex::One).unwrap();
        let g2 = ctx.build_groupoid(GermIndex::Two).unwrap();
        assert_eq!(g1.len(), g2.len());
        // units at u (3) and v (1); plus [(f,g),·] and [(g,f),·] between the
        // two boundary points, and the arrows between v's point and the
        // fixed points at f and g.
        assert_eq!(g1.len(), 10);
        assert!(ctx.is_hausdorff(&g1));
        assert!(ctx.condition_two().holds);
        let z = Zigzag::new(&f.cat, alloc::vec![(f.cat.m("f"), f.cat.m("u")), (f.cat.m("u"), f.cat.m("g"))]).unwrap();
        let x = f.spec.point_of_morphism(&f.cat, f.cat.m("v")).unwrap();
        assert_eq!(ctx.phi_point(&z, x), Err(GermError::Domain { point: x }));
    }

    #[test]
    fn fixed_points_move_with_phi() {
        let f = fixture(fixtures::kg(2));
        let ctx = f.ctx();
        let z = Zigzag::from_ids(&f.cat, &["beta", "alpha"]).unwrap();
        for (a, b) in [("gamma1", "delta1"), ("gamma2", "delta2")] {
            let x = f.spec.point_of_morphism(&f.cat, f.cat.m(a)).unwrap();
            let y = f.spec.point_of_morphism(&f.cat, f.cat.m(b)).unwrap();
            assert_eq!(ctx.phi_point(&z, x).unwrap(), y);
        }
    }

    /// 𝒰ₓ enumerated in full: ∼₂ agreement on some E ∈ 𝒰ₓ, ∼₁ agreement of
    /// Φ on some Ê.
    fn germ_equal_oracle(f: &Fixture, i: GermIndex, m1: &PartialMap, m2: &PartialMap, x: usize) -> bool {
        let ctx = f.ctx();
        let v = f.spec.point(x).vertex;
        let ring = f.spec.ring(v);
        let n = f.cat.num_morphisms();
        let dom = {
            let mut d = m1.domain(n);
            d.intersect_with(&m2.domain(n));
            d
        };
        ring.elements(20).unwrap().into_iter().any(|r| {
            let e = r.elements;
            if !f.spec.in_hat(x, &e) || !e.is_subset(&dom) {
                return false;
            }
            match i {
                GermIndex::Two => m1.restrict(&e) == m2.restrict(&e),
                GermIndex::One => f
                    .spec
                    .hat(v, &e)
                    .into_iter()
                    .all(|y| ctx.phi_map(m1, y).unwrap() == ctx.phi_map(m2, y).unwrap()),
            }
        })
    }

    #[test]
    fn germ_equal_matches_oracle() {
        for cat in [fixtures::par(), fixtures::kg(2), fixtures::group(3)] {
            let f = fixture(cat);
            let ctx = f.ctx();
            for a in 0..f.sg.len() {
                for x in ctx.domain_points(a) {
                    for b in 0..f.sg.len() {
                        let (m1, m2) = (&f.sg.get(a).map, &f.sg.get(b).map);
                        if !ctx.in_domain(m2, x) {
                            continue;
                        }
                        for i in [GermIndex::One, GermIndex::Two] {
                            assert_eq!(ctx.germ_equal_maps(i, m1, m2, x).unwrap(), germ_equal_oracle(&f, i, m1, m2, x));
                        }
                        let two = ctx.germ_equal_maps(GermIndex::Two, m1, m2, x).unwrap();
                        let one = ctx.germ_equal_maps(GermIndex::One, m1, m2, x).unwrap();
                        assert!(!two || one);
                    }
                }
            }
        }
    }

    #[test]
    fn kg_groupoids() {
        let f = fixture(fixtures::kg(2));
        let ctx = f.ctx();
        let g1 = ctx.build_groupoid(GermIndex::One).unwrap();
        let g2 = ctx.build_groupoid(GermIndex::Two).unwrap();
        g1.verify().unwrap();
        g2.verify().unwrap();
        assert_eq!(g1.len(), g2.len());
        assert!(ctx.is_hausdorff(&g2));
        assert!(ctx.condition_two().holds);
        let bd = f.spec.boundary().unwrap();
        let gb = g2.restrict_to_points(&bd);
        gb.verify().unwrap();
        // The boundary is the orbit of the fixed points at the sources of
        // maximal paths: αγ₁, αγ₂, γ₁, γ₂, δ₁, δ₂, v.
        assert_eq!(bd.len(), 7);
        assert_eq!(gb.len(), 49);
    }

    #[test]
    fn quotient_two_to_one() {
        let f = fixture(fixtures::group(3));
        let ctx = f.ctx();
        let g1 = ctx.build_groupoid(GermIndex::One).unwrap();
        let g2 = ctx.build_groupoid(GermIndex::Two).unwrap();
        let q = |g: usize| {
            let germ = g2.germ(g);
            (0..g1.len())
                .find(|&h| g1.germ(h).source == germ.source && g1.germ(h).range == germ.range)
                .unwrap()
        };
        for a in 0..g2.len() {
            for b in 0..g2.len() {
                if let Some(ab) = g2.compose(a, b) {
                    assert_eq!(Some(q(ab)), g1.compose(q(a), q(b)));
                }
            }
        }
    }

    #[test]
    fn subcategory_restrictions() {
        let f = fixture(fixtures::kg(2));
        let ctx = f.ctx();
        let g2 = ctx.build_groupoid(GermIndex::Two).unwrap();
        let all: Vec<Mor> = f.cat.morphisms().collect();
        assert_eq!(ctx.restrict_subcategory(&g2, &all).unwrap().len(), g2.len());
        let ids: Vec<Mor> = f.cat.objects().map(|v| f.cat.identity(v)).collect();
        let units_only = ctx.restrict_subcategory(&g2, &ids).unwrap();
        assert_eq!(units_only.len(), f.spec.len());
        assert!((0..units_only.len()).all(|g| units_only.is_unit(g)));
        let sub = generate_subcategory(&f.cat, &[f.cat.m("alpha"), f.cat.m("gamma1")]);
        let proper = ctx.restrict_subcategory(&g2, &sub).unwrap();
        assert!(proper.len() < g2.len());
        assert!(proper.len() > units_only.len() - f.spec.at(f.cat.lookup_object("y").unwrap()).len());
        let bad = [f.cat.m("alpha")];
        assert!(matches!(ctx.restrict_subcategory(&g2, &bad), Err(GermError::NotSubcategory(_))));
    }
}
