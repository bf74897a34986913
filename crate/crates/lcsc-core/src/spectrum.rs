//! Filters in 𝒟ᵥ⁽⁰⁾, the points vΛ*, ultrafilters of 𝒜ᵥ, maximal points and
//! the boundary.
//!
//! In a finite family closed under nonempty intersection every filter is
//! principal, C_E = {F : F ⊇ E}, and every ultrafilter of 𝒜ᵥ is principal at
//! an atom. Points are stored in vertex order, then by atom order.

use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::alignment;
use crate::category::{Mor, Obj, SmallCategory};
use crate::setring::{build_dzero_all, DZeroFamily, RingError, SetRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("not a filter in the zigzag sets at this vertex")]
    NotAFilter,
    #[error("filter is covered by a finite disjoint family")]
    Covered,
    #[error("not an ultrafilter base")]
    NotAnUltrafilter,
    #[error("category is not finitely aligned")]
    NotFinitelyAligned,
    #[error("set is not hereditary")]
    NotHereditary,
    #[error("set is not directed")]
    NotDirected,
    #[error("boundary methods disagree at vertex {0}")]
    BoundaryMismatch(u32),
    #[error("maximality methods disagree at vertex {0}")]
    MaximalMismatch(u32),
}

/// A filter in 𝒟ᵥ⁽⁰⁾, given by sorted indices into the family at `vertex`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FilterPoint {
    pub vertex: Obj,
    pub sets: Vec<usize>,
}

/// An ultrafilter of 𝒜ᵥ, principal at `atom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultrafilter {
    pub vertex: Obj,
    pub atom: FixedBitSet,
}

impl Ultrafilter {
    /// E ∈ 𝒰 iff the atom lies in E.
    pub fn contains(&self, e: &FixedBitSet) -> bool {
        self.atom.is_subset(e)
    }
}

/// Whether `sets` is a filter of the family: nonempty, upward closed and
/// closed under intersection.
pub fn is_filter(fam: &DZeroFamily, sets: &[usize]) -> bool {
    if sets.is_empty() {
        return false;
    }
    for &e in sets {
        for f in 0..fam.len() {
            if fam.set(e).is_subset(fam.set(f)) && !sets.contains(&f) {
                return false;
            }
        }
        for &f in sets {
            let mut m = fam.set(e).clone();
            m.intersect_with(fam.set(f));
            match fam.position(&m) {
                Some(i) if sets.contains(&i) => {}
                _ => return false,
            }
        }
    }
    true
}

/// C_E = {F : F ⊇ E}.
pub fn principal_filter(fam: &DZeroFamily, e: usize) -> FilterPoint {
    FilterPoint {
        vertex: fam.vertex,
        sets: (0..fam.len()).filter(|&f| fam.set(e).is_subset(fam.set(f))).collect(),
    }
}

/// The least member of a filter.
pub fn filter_min(fam: &DZeroFamily, c: &FilterPoint) -> Option<usize> {
    c.sets
        .iter()
        .copied()
        .find(|&e| c.sets.iter().all(|&f| fam.set(e).is_subset(fam.set(f))))
}

/// Whether the filter passes the no-cover test: no finite family of sets
/// outside C covers C. The largest such family is everything outside C.
pub fn is_point(fam: &DZeroFamily, c: &FilterPoint) -> bool {
    let outside: Vec<usize> = (0..fam.len()).filter(|f| !c.sets.contains(f)).collect();
    !alignment::covers_filter(fam, &outside, &c.sets)
}

/// vΛ*: the filters generated by single sets (every filter is of this
/// form) that pass the no-cover test.
pub fn lambda_star_of(fam: &DZeroFamily) -> Vec<FilterPoint> {
    let mut out: Vec<FilterPoint> = (0..fam.len())
        .map(|e| principal_filter(fam, e))
        .filter(|c| is_point(fam, c))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn lambda_star(cat: &SmallCategory, v: Obj) -> Result<Vec<FilterPoint>, SpectrumError> {
    Ok(lambda_star_of(&crate::setring::build_dzero(cat, v)?))
}

#[derive(Debug, Clone)]
pub struct Point {
    pub vertex: Obj,
    /// Index of the atom of 𝒜ᵥ.
    pub atom: usize,
    /// Least set of the filter.
    pub dset: usize,
    pub filter: FilterPoint,
}

/// Spectrum of a total category: rings, points and their order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    rings: Vec<SetRing>,
    points: Vec<Point>,
    /// first point id per vertex, plus a final sentinel
    offsets: Vec<usize>,
}

impl Spectrum {
    pub fn compute(cat: &SmallCategory) -> Result<Self, SpectrumError> {
        let rings: Vec<SetRing> = build_dzero_all(cat)?.into_iter().map(SetRing::new).collect();
        let mut points = Vec::new();
        let mut offsets = Vec::new();
        for ring in &rings {
            offsets.push(points.len());
            let mut here: Vec<Point> = Vec::new();
            for c in lambda_star_of(&ring.family) {
                let u = ultrafilter_of(ring, &c)?;
                let atom = ring
                    .atoms()
                    .iter()
                    .position(|a| *a == u.atom)
                    .ok_or(SpectrumError::NotAnUltrafilter)?;
                let dset = filter_min(&ring.family, &c).ok_or(SpectrumError::NotAFilter)?;
                here.push(Point {
                    vertex: ring.vertex(),
                    atom,
                    dset,
                    filter: c,
                });
            }
            here.sort_by_key(|p| p.atom);
            points.extend(here);
        }
        offsets.push(points.len());
        Ok(Spectrum {
            rings,
            points,
            offsets,
        })
    }

    pub fn rings(&self) -> &[SetRing] {
        &self.rings
    }

    pub fn ring(&self, v: Obj) -> &SetRing {
        &self.rings[v.idx()]
    }

    pub fn family(&self, v: Obj) -> &DZeroFamily {
        &self.rings[v.idx()].family
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, p: usize) -> &Point {
        &self.points[p]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point ids at vertex v.
    pub fn at(&self, v: Obj) -> core::ops::Range<usize> {
        self.offsets[v.idx()]..self.offsets[v.idx() + 1]
    }

    /// The atom of a point as a set of morphisms.
    pub fn atom(&self, p: usize) -> &FixedBitSet {
        let pt = &self.points[p];
        &self.rings[pt.vertex.idx()].atoms()[pt.atom]
    }

    /// The point whose atom contains `m`.
    pub fn point_of_morphism(&self, cat: &SmallCategory, m: Mor) -> Option<usize> {
        let v = cat.dst(m);
        let a = self.rings[v.idx()].atom_of(m)?;
        self.at(v).find(|&p| self.points[p].atom == a)
    }

    /// Point id of a filter at its vertex.
    pub fn find(&self, c: &FilterPoint) -> Option<usize> {
        self.at(c.vertex).find(|&p| self.points[p].filter == *c)
    }

    /// x ∈ Ê for a ring set E (atom ⊆ E).
    pub fn in_hat(&self, p: usize, e: &FixedBitSet) -> bool {
        self.atom(p).is_subset(e)
    }

    /// Ê for a set of morphisms at vertex v.
    pub fn hat(&self, v: Obj, e: &FixedBitSet) -> Vec<usize> {
        self.at(v).filter(|&p| self.in_hat(p, e)).collect()
    }

    pub fn ultrafilter(&self, p: usize) -> Ultrafilter {
        Ultrafilter {
            vertex: self.points[p].vertex,
            atom: self.atom(p).clone(),
        }
    }

    /// C_α = {D : α ∈ D}.
    pub fn fixed_point(&self, cat: &SmallCategory, a: Mor) -> FilterPoint {
        let fam = self.family(cat.dst(a));
        FilterPoint {
            vertex: fam.vertex,
            sets: (0..fam.len()).filter(|&i| fam.set(i).contains(a.idx())).collect(),
        }
    }

    /// Maximal elements of vΛ* under inclusion.
    pub fn maximal_points(&self, v: Obj) -> Vec<usize> {
        let r = self.at(v);
        r.clone()
            .filter(|&p| {
                let c = &self.points[p].filter.sets;
                !r.clone().any(|q| {
                    let d = &self.points[q].filter.sets;
                    q != p && d.len() > c.len() && c.iter().all(|x| d.contains(x))
                })
            })
            .collect()
    }

    /// Points C such that every zigzag set meeting all members of C
    /// contains a member of C.
    pub fn maximal_points_by_criterion(&self, v: Obj) -> Vec<usize> {
        let fam = self.family(v);
        self.at(v)
            .filter(|&p| {
                let c = &self.points[p].filter.sets;
                (0..fam.len()).all(|f| {
                    let meets_all = c.iter().all(|&e| !fam.set(f).is_disjoint(fam.set(e)));
                    !meets_all || c.iter().any(|&e| fam.set(e).is_subset(fam.set(f)))
                })
            })
            .collect()
    }

    /// Open base at v: Ê for zigzag sets and for atoms, as point lists.
    pub fn base(&self, v: Obj) -> Vec<Vec<usize>> {
        let ring = self.ring(v);
        let mut b: Vec<Vec<usize>> = (0..ring.family.len())
            .map(|e| self.hat(v, ring.family.set(e)))
            .collect();
        for a in ring.atoms() {
            b.push(self.hat(v, a));
        }
        b.retain(|s| !s.is_empty());
        b.sort();
        b.dedup();
        b
    }

    /// Closure of `set` at v: points all of whose basic neighbourhoods
    /// meet `set`.
    pub fn closure(&self, v: Obj, set: &[usize]) -> Vec<usize> {
        let base = self.base(v);
        self.at(v)
            .filter(|p| base.iter().filter(|b| b.contains(p)).all(|b| b.iter().any(|q| set.contains(q))))
            .collect()
    }

    /// Boundary as the closure of the maximal points.
    pub fn boundary_by_closure(&self, v: Obj) -> Vec<usize> {
        self.closure(v, &self.maximal_points(v))
    }

    /// Boundary by the criterion: for each finite ℱ not covering C and
    /// each E ∈ C some zigzag set fits in E ∖ ∪ℱ. Every non-covering
    /// family lies inside the complement of C, and the condition only gets
    /// harder as ℱ grows, so ℱ = 𝒟ᵥ⁽⁰⁾ ∖ C decides it.
    pub fn boundary_by_criterion(&self, v: Obj) -> Vec<usize> {
        let fam = self.family(v);
        self.at(v)
            .filter(|&p| {
                let c = &self.points[p].filter.sets;
                let outside: Vec<usize> = (0..fam.len()).filter(|f| !c.contains(f)).collect();
                criterion_holds(fam, c, &outside)
            })
            .collect()
    }

    /// v∂Λ, checked two ways.
    pub fn boundary_points(&self, v: Obj) -> Result<Vec<usize>, SpectrumError> {
        let a = self.boundary_by_closure(v);
        let b = self.boundary_by_criterion(v);
        if a != b {
            return Err(SpectrumError::BoundaryMismatch(v.0));
        }
        Ok(a)
    }

    /// ∂Λ over all vertices.
    pub fn boundary(&self) -> Result<Vec<usize>, SpectrumError> {
        let mut out = Vec::new();
        for v in 0..self.rings.len() {
            out.extend(self.boundary_points(Obj(v as u32))?);
        }
        Ok(out)
    }

    pub fn maximal(&self) -> Result<Vec<usize>, SpectrumError> {
        let mut out = Vec::new();
        for v in 0..self.rings.len() {
            let v = Obj(v as u32);
            let a = self.maximal_points(v);
            if a != self.maximal_points_by_criterion(v) {
                return Err(SpectrumError::MaximalMismatch(v.0));
            }
            out.extend(a);
        }
        Ok(out)
    }
}

/// The boundary condition for one non-covering family.
pub fn criterion_holds(fam: &DZeroFamily, c: &[usize], family: &[usize]) -> bool {
    let mut un = FixedBitSet::with_capacity(fam.universe().len());
    for &f in family {
        un.union_with(fam.set(f));
    }
    c.iter().all(|&e| {
        let mut rest = fam.set(e).clone();
        rest.difference_with(&un);
        (0..fam.len()).any(|g| fam.set(g).is_subset(&rest))
    })
}

/// 𝒰_C, generated by E ∖ ∪ℱ for E ∈ C and ℱ ∩ C = ∅. Its least member is
/// the atom min(C) ∖ ∪(𝒟 ∖ C).
pub fn ultrafilter_of(ring: &SetRing, c: &FilterPoint) -> Result<Ultrafilter, SpectrumError> {
    let fam = &ring.family;
    if c.vertex != fam.vertex || !is_filter(fam, &c.sets) {
        return Err(SpectrumError::NotAFilter);
    }
    if !is_point(fam, c) {
        return Err(SpectrumError::Covered);
    }
    let e = filter_min(fam, c).ok_or(SpectrumError::NotAFilter)?;
    let mut atom = fam.set(e).clone();
    for f in 0..fam.len() {
        if !c.sets.contains(&f) {
            atom.difference_with(fam.set(f));
        }
    }
    if !ring.atoms().contains(&atom) {
        return Err(SpectrumError::NotAnUltrafilter);
    }
    Ok(Ultrafilter { vertex: c.vertex, atom })
}

/// 𝒰 ∩ 𝒟ᵥ⁽⁰⁾.
pub fn point_of(ring: &SetRing, u: &Ultrafilter) -> Result<FilterPoint, SpectrumError> {
    if u.vertex != ring.vertex() || !ring.atoms().contains(&u.atom) {
        return Err(SpectrumError::NotAnUltrafilter);
    }
    let fam = &ring.family;
    Ok(FilterPoint {
        vertex: u.vertex,
        sets: (0..fam.len()).filter(|&e| u.contains(fam.set(e))).collect(),
    })
}

/// H(C) = {α : αΛ ∈ C}.
pub fn hereditary_of(cat: &SmallCategory, fam: &DZeroFamily, c: &FilterPoint) -> Vec<Mor> {
    cat.with_range(c.vertex)
        .iter()
        .copied()
        .filter(|&a| fam.position(&cat.cone(a)).is_some_and(|i| c.sets.contains(&i)))
        .collect()
}

/// Whether H ⊆ vΛ is hereditary (closed under initial segments) and
/// directed (any two members have a common extension in H).
pub fn check_directed_hereditary(cat: &SmallCategory, h: &[Mor]) -> Result<(), SpectrumError> {
    let hs = cat.set_of(h.iter().copied());
    for &b in h {
        if cat.initial_segments(b).iter().any(|a| !hs.contains(a.idx())) {
            return Err(SpectrumError::NotHereditary);
        }
    }
    for (i, &a) in h.iter().enumerate() {
        for &b in &h[i..] {
            let mut c = cat.cone(a);
            c.intersect_with(&cat.cone(b));
            if c.is_disjoint(&hs) {
                return Err(SpectrumError::NotDirected);
            }
        }
    }
    Ok(())
}

/// The point {E : E ⊇ αΛ for some α ∈ H}, for finitely aligned categories.
pub fn point_of_hereditary(cat: &SmallCategory, fam: &DZeroFamily, h: &[Mor]) -> Result<FilterPoint, SpectrumError> {
    if !alignment::is_finitely_aligned(cat).map_err(|_| SpectrumError::NotFinitelyAligned)?.finitely_aligned {
        return Err(SpectrumError::NotFinitelyAligned);
    }
    if h.is_empty() || h.iter().any(|&a| cat.dst(a) != fam.vertex) {
        return Err(SpectrumError::NotHereditary);
    }
    check_directed_hereditary(cat, h)?;
    let sets = (0..fam.len())
        .filter(|&e| h.iter().any(|&a| cat.cone(a).is_subset(fam.set(e))))
        .collect();
    Ok(FilterPoint {
        vertex: fam.vertex,
        sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::String;

    fn all_filters_oracle(fam: &DZeroFamily) -> Vec<FilterPoint> {
        assert!(fam.len() <= 16);
        let mut out = Vec::new();
        for mask in 1u32..(1 << fam.len()) {
            let sets: Vec<usize> = (0..fam.len()).filter(|i| mask & (1 << i) != 0).collect();
            if is_filter(fam, &sets) {
                out.push(FilterPoint {
                    vertex: fam.vertex,
                    sets,
                });
            }
        }
        out
    }

    fn names(cat: &SmallCategory, fam: &DZeroFamily, c: &FilterPoint) -> Vec<Vec<String>> {
        c.sets
            .iter()
            .map(|&e| fam.set(e).ones().map(|i| String::from(cat.name(Mor(i as u32)))).collect())
            .collect()
    }

    #[test]
    fn every_filter_is_principal() {
        for cat in [fixtures::par(), fixtures::kg(2), fixtures::kg(3), fixtures::group(3)] {
            for fam in build_dzero_all(&cat).unwrap() {
                let mut brute = all_filters_oracle(&fam);
                brute.sort();
                let mut principal: Vec<FilterPoint> = (0..fam.len()).map(|e| principal_filter(&fam, e)).collect();
                principal.sort();
                assert_eq!(brute, principal);
            }
        }
    }

    /// The no-cover test over every finite family, not just the complement.
    #[test]
    fn point_test_matches_all_families() {
        for cat in [fixtures::par(), fixtures::kg(2)] {
            for fam in build_dzero_all(&cat).unwrap() {
                for c in all_filters_oracle(&fam) {
                    let mut covered = false;
                    for mask in 1u32..(1 << fam.len()) {
                        let family: Vec<usize> = (0..fam.len()).filter(|i| mask & (1 << i) != 0).collect();
                        if family.iter().all(|f| !c.sets.contains(f)) && alignment::covers_filter(&fam, &family, &c.sets) {
                            covered = true;
                        }
                    }
                    assert_eq!(!covered, is_point(&fam, &c));
                }
            }
        }
    }

    #[test]
    fn par_points() {
        let par = fixtures::par();
        let u = par.lookup_object("u").unwrap();
        let fam = crate::setring::build_dzero(&par, u).unwrap();
        let pts = lambda_star(&par, u).unwrap();
        let named: Vec<_> = pts.iter().map(|c| names(&par, &fam, c)).collect();
        assert_eq!(
            named,
            [
                alloc::vec![alloc::vec!["u", "f", "g"]],
                alloc::vec![alloc::vec!["u", "f", "g"], alloc::vec!["f"]],
                alloc::vec![alloc::vec!["u", "f", "g"], alloc::vec!["g"]],
            ]
        );
        let spec = Spectrum::compute(&par).unwrap();
        let cf = spec.fixed_point(&par, par.m("f"));
        assert_eq!(cf.sets, [0, 1]);
        let u_f = ultrafilter_of(spec.ring(u), &cf).unwrap();
        assert_eq!(u_f.atom, par.set_of([par.m("f")]));
        // The ultrafilter is {A : f ∈ A}.
        for r in spec.ring(u).elements(20).unwrap() {
            assert_eq!(u_f.contains(&r.elements), r.elements.contains(par.m("f").idx()));
        }
        assert_eq!(spec.at(u).len(), 3);
        let maxi: Vec<_> = spec.maximal_points(u).into_iter().map(|p| spec.point(p).filter.clone()).collect();
        assert_eq!(maxi, [pts[1].clone(), pts[2].clone()]);
        assert_eq!(spec.boundary_points(u).unwrap().len(), 2);
    }

    #[test]
    fn group_and_kg_points() {
        let g = fixtures::group(2);
        let spec = Spectrum::compute(&g).unwrap();
        assert_eq!(spec.len(), 1);
        assert_eq!(spec.maximal().unwrap(), [0]);
        assert_eq!(spec.boundary().unwrap(), [0]);
        assert_eq!(spec.fixed_point(&g, g.m("g")).sets, [0]);

        let kg = fixtures::kg(2);
        let spec = Spectrum::compute(&kg).unwrap();
        let u = kg.lookup_object("u").unwrap();
        // atoms {u}, {α}, {β}, {αγ₁}, {αγ₂}; αΛ ∩ βΛ is covered by the two
        // singletons and is not a point.
        assert_eq!(spec.at(u).len(), 5);
        let fam = spec.family(u);
        let c = spec.fixed_point(&kg, kg.m("alpha.gamma1"));
        assert_eq!(
            names(&kg, fam, &c),
            [
                alloc::vec!["u", "alpha", "beta", "alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["alpha", "alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["beta", "alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["alpha.gamma1", "alpha.gamma2"],
                alloc::vec!["alpha.gamma1"],
            ]
        );
        let maxi = spec.maximal_points(u);
        let expect = [
            spec.point_of_morphism(&kg, kg.m("alpha.gamma1")).unwrap(),
            spec.point_of_morphism(&kg, kg.m("alpha.gamma2")).unwrap(),
        ];
        assert_eq!(maxi, expect);
        assert_eq!(spec.boundary_points(u).unwrap(), expect);
    }

    #[test]
    fn round_trips() {
        for cat in [fixtures::par(), fixtures::kg(2), fixtures::kg(4), fixtures::sep(3, 1), fixtures::group(4)] {
            let spec = Spectrum::compute(&cat).unwrap();
            for v in cat.objects() {
                let ring = spec.ring(v);
                assert_eq!(spec.at(v).len(), ring.atoms().len());
                for p in spec.at(v) {
                    let c = &spec.point(p).filter;
                    let u = ultrafilter_of(ring, c).unwrap();
                    assert_eq!(&point_of(ring, &u).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn fixed_points_are_dense() {
        let kg = fixtures::kg(3);
        let spec = Spectrum::compute(&kg).unwrap();
        for v in kg.objects() {
            let fam = spec.family(v);
            for e in 0..fam.len() {
                let fixed = fam.set(e).ones().any(|m| {
                    let c = spec.fixed_point(&kg, Mor(m as u32));
                    c.sets.contains(&e)
                });
                assert!(fixed);
            }
        }
    }

    /// Criterion (b) evaluated over every finite non-covering family.
    #[test]
    fn boundary_criterion_all_families() {
        for cat in [fixtures::par(), fixtures::kg(2), fixtures::group(2)] {
            let spec = Spectrum::compute(&cat).unwrap();
            for v in cat.objects() {
                let fam = spec.family(v);
                let brute: Vec<usize> = spec
                    .at(v)
                    .filter(|&p| {
                        let c = &spec.point(p).filter.sets;
                        (0u32..(1 << fam.len())).all(|mask| {
                            let family: Vec<usize> = (0..fam.len()).filter(|i| mask & (1 << i) != 0).collect();
                            alignment::covers_filter(fam, &family, c) || criterion_holds(fam, c, &family)
                        })
                    })
                    .collect();
                assert_eq!(brute, spec.boundary_by_criterion(v));
                assert_eq!(brute, spec.boundary_points(v).unwrap());
            }
        }
    }

    #[test]
    fn hereditary_sets() {
        let par = fixtures::par();
        let u = par.lookup_object("u").unwrap();
        let spec = Spectrum::compute(&par).unwrap();
        let fam = spec.family(u);
        let cf = spec.fixed_point(&par, par.m("f"));
        assert_eq!(hereditary_of(&par, fam, &cf), [par.m("u"), par.m("f")]);
        let c = point_of_hereditary(&par, fam, &[par.m("u")]).unwrap();
        assert_eq!(c.sets, [0]);
        assert_eq!(
            point_of_hereditary(&par, fam, &[par.m("u"), par.m("f"), par.m("g")]),
            Err(SpectrumError::NotDirected)
        );
        assert_eq!(point_of_hereditary(&par, fam, &[par.m("f")]), Err(SpectrumError::NotHereditary));
    }
}
