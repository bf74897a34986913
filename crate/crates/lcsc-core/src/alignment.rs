//! Common extensions, ∨F, covers and exhaustive sets.

use alloc::string::String;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::category::{Mor, Obj, SmallCategory};
use crate::setring::DZeroFamily;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlignError {
    #[error("empty morphism set")]
    Empty,
    #[error("morphisms do not share a range")]
    Ranges,
    #[error("operation requires a total carrier")]
    NotTotal,
}

/// ∩αΛ over F and its minimal elements, one per ≈-class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionReport {
    pub input: Vec<Mor>,
    pub common: FixedBitSet,
    pub minimal: Vec<Mor>,
}

fn check_family(cat: &SmallCategory, f: &[Mor]) -> Result<(), AlignError> {
    let Some(&first) = f.first() else {
        return Err(AlignError::Empty);
    };
    if f.iter().any(|&a| cat.dst(a) != cat.dst(first)) {
        return Err(AlignError::Ranges);
    }
    Ok(())
}

/// ∩_{α∈F} αΛ.
pub fn common_extensions(cat: &SmallCategory, f: &[Mor]) -> Result<FixedBitSet, AlignError> {
    check_family(cat, f)?;
    let mut s = cat.cone(f[0]);
    for &a in &f[1..] {
        s.intersect_with(&cat.cone(a));
    }
    Ok(s)
}

/// ∨F with ≈-class representatives chosen by least id.
pub fn minimal_common_extensions(cat: &SmallCategory, f: &[Mor]) -> Result<ExtensionReport, AlignError> {
    let common = common_extensions(cat, f)?;
    let members: Vec<Mor> = common.ones().map(|i| Mor(i as u32)).collect();
    let cones: Vec<FixedBitSet> = members.iter().map(|&m| cat.cone(m)).collect();
    let mut classes: Vec<(FixedBitSet, Mor)> = Vec::new();
    for (i, &e) in members.iter().enumerate() {
        // ε is minimal iff no common extension has a strictly larger cone
        // containing ε.
        let minimal = members
            .iter()
            .enumerate()
            .all(|(j, _)| !cones[j].contains(e.idx()) || cones[j] == cones[i]);
        if !minimal {
            continue;
        }
        match classes.iter_mut().find(|c| c.0 == cones[i]) {
            Some(c) => {
                if cat.name(e) < cat.name(c.1) {
                    c.1 = e;
                }
            }
            None => classes.push((cones[i].clone(), e)),
        }
    }
    let mut minimal: Vec<Mor> = classes.into_iter().map(|c| c.1).collect();
    minimal.sort();
    Ok(ExtensionReport {
        input: f.to_vec(),
        common,
        minimal,
    })
}

/// |∨{α, β}|.
pub fn vee_count(cat: &SmallCategory, a: Mor, b: Mor) -> Result<usize, AlignError> {
    Ok(minimal_common_extensions(cat, &[a, b])?.minimal.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentReport {
    pub finitely_aligned: bool,
    /// (α, β, |∨{α,β}|) for every co-ranged pair α < β with α ⋒ β.
    pub pairs: Vec<(Mor, Mor, usize)>,
    pub max_vee: usize,
}

/// Checks αΛ ∩ βΛ = ∪_{ε∈∨{α,β}} εΛ for every pair.
pub fn is_finitely_aligned(cat: &SmallCategory) -> Result<AlignmentReport, AlignError> {
    cat.require_total().map_err(|_| AlignError::NotTotal)?;
    let mut pairs = Vec::new();
    let mut ok = true;
    let mut max_vee = 0;
    for v in cat.objects() {
        let vl = cat.with_range(v);
        for (i, &a) in vl.iter().enumerate() {
            for &b in &vl[i + 1..] {
                let rep = minimal_common_extensions(cat, &[a, b])?;
                if rep.common.is_clear() {
                    continue;
                }
                let mut un = cat.empty_set();
                for &e in &rep.minimal {
                    un.union_with(&cat.cone(e));
                }
                ok &= un == rep.common;
                max_vee = max_vee.max(rep.minimal.len());
                pairs.push((a, b, rep.minimal.len()));
            }
        }
    }
    Ok(AlignmentReport {
        finitely_aligned: ok,
        pairs,
        max_vee,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverVerdict {
    Covers,
    /// Some zigzag subset of E misses every member.
    Uncovered { witness: usize },
    /// The family is not inside E.
    NotContained,
}

impl CoverVerdict {
    pub fn covers(&self) -> bool {
        matches!(self, CoverVerdict::Covers)
    }
}

/// Whether `family` (indices into 𝒟ᵥ⁽⁰⁾) covers the zigzag set `e`.
pub fn covers_set(fam: &DZeroFamily, family: &[usize], e: usize) -> CoverVerdict {
    let es = fam.set(e);
    let mut un = FixedBitSet::with_capacity(es.len());
    for &f in family {
        un.union_with(fam.set(f));
    }
    if !un.is_subset(es) {
        return CoverVerdict::NotContained;
    }
    for g in 0..fam.len() {
        if fam.set(g).is_subset(es) && fam.set(g).is_disjoint(&un) {
            return CoverVerdict::Uncovered { witness: g };
        }
    }
    CoverVerdict::Covers
}

/// Whether some member E of the filter `c` lies inside ∪family.
pub fn covers_filter(fam: &DZeroFamily, family: &[usize], c: &[usize]) -> bool {
    if family.is_empty() {
        return false;
    }
    let mut un = FixedBitSet::with_capacity(fam.universe().len());
    for &f in family {
        un.union_with(fam.set(f));
    }
    c.iter().any(|&e| fam.set(e).is_subset(&un))
}

/// F ⊆ vΛ is exhaustive if every β ∈ vΛ meets some α ∈ F. Returns the
/// first β meeting nothing, if any.
pub fn exhaustive_witness(cat: &SmallCategory, v: Obj, f: &[Mor]) -> Option<Mor> {
    let mut un = cat.empty_set();
    for &a in f {
        un.union_with(&cat.cone(a));
    }
    cat.with_range(v)
        .iter()
        .copied()
        .find(|&b| cat.right_products(b).iter().all(|p| !un.contains(p.1.idx())))
}

pub fn is_exhaustive(cat: &SmallCategory, v: Obj, f: &[Mor]) -> bool {
    exhaustive_witness(cat, v, f).is_none()
}

pub fn names(cat: &SmallCategory, ms: &[Mor]) -> Vec<String> {
    ms.iter().map(|&m| String::from(cat.name(m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::setring::build_dzero;

    #[test]
    fn extension_examples() {
        let kg = fixtures::kg(2);
        let (a, b) = (kg.m("alpha"), kg.m("beta"));
        let rep = minimal_common_extensions(&kg, &[a, b]).unwrap();
        assert_eq!(names(&kg, &rep.minimal), ["alpha.gamma1", "alpha.gamma2"]);
        assert_eq!(rep.common, kg.set_of([kg.m("alpha.gamma1"), kg.m("alpha.gamma2")]));
        assert_eq!(common_extensions(&kg, &[a]).unwrap(), kg.cone(a));
        let par = fixtures::par();
        assert!(common_extensions(&par, &[par.m("f"), par.m("g")]).unwrap().is_clear());
        assert!(minimal_common_extensions(&par, &[par.m("f"), par.m("g")]).unwrap().minimal.is_empty());
        let g = fixtures::group(2);
        let rep = minimal_common_extensions(&g, &[g.m("e"), g.m("g")]).unwrap();
        assert_eq!(names(&g, &rep.minimal), ["e"]);
        assert_eq!(common_extensions(&par, &[]), Err(AlignError::Empty));
    }

    #[test]
    fn kg_vee_grows() {
        for n in [2, 4, 8] {
            let kg = fixtures::kg(n);
            assert_eq!(vee_count(&kg, kg.m("alpha"), kg.m("beta")).unwrap(), n);
            let rep = is_finitely_aligned(&kg).unwrap();
            assert!(rep.finitely_aligned);
            assert_eq!(rep.max_vee, n);
        }
        assert!(is_finitely_aligned(&fixtures::par()).unwrap().finitely_aligned);
        assert_eq!(is_finitely_aligned(&fixtures::nat(3)), Err(AlignError::NotTotal));
    }

    #[test]
    fn covers() {
        let par = fixtures::par();
        let fam = build_dzero(&par, par.lookup_object("u").unwrap()).unwrap();
        // uΛ, {f}, {g}
        assert!(covers_set(&fam, &[1, 2], 0).covers());
        assert_eq!(covers_set(&fam, &[1], 0), CoverVerdict::Uncovered { witness: 2 });
        assert!(covers_set(&fam, &[0], 0).covers());
        assert_eq!(covers_set(&fam, &[0], 1), CoverVerdict::NotContained);
        assert!(!covers_filter(&fam, &[1, 2], &[0]));
        assert!(covers_filter(&fam, &[1], &[0, 1]));
        assert!(!covers_filter(&fam, &[], &[0, 1]));
    }

    #[test]
    fn exhaustive() {
        let par = fixtures::par();
        let u = par.lookup_object("u").unwrap();
        assert!(is_exhaustive(&par, u, &[par.m("f"), par.m("g")]));
        assert_eq!(exhaustive_witness(&par, u, &[par.m("f")]), Some(par.m("g")));
        for v in par.objects() {
            assert!(is_exhaustive(&par, v, &[par.identity(v)]));
        }
    }
}
