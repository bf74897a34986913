//! Right reversibility and the groupoid of fractions α⁻¹β.
//!
//! Pairs (α, β) with r(α) = r(β) are grouped by the equivalence generated
//! by (α, β) ∼ (xα, xβ), which on a carrier closed enough to hold the
//! witnesses is the relation xα = yγ, xβ = yδ. Bounded carriers only see
//! pairs whose witnesses fit inside the bound.

use alloc::string::String;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use hashbrown::HashMap;

use crate::category::{Mor, SmallCategory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OreError {
    #[error("ranges differ: r({0:?}) != r({1:?})")]
    Shape(Mor, Mor),
    #[error("category is not right cancellative")]
    NotRightCancellative,
    #[error("category is not right reversible: {0:?}, {1:?}")]
    NotRightReversible(Mor, Mor),
    #[error("product depends on the witness")]
    WitnessDependent { classes: (usize, usize) },
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("target is not a groupoid")]
    NotAGroupoid,
}

/// Λα.
pub fn left_multiples(cat: &SmallCategory, a: Mor) -> FixedBitSet {
    let mut s = cat.empty_set();
    for &x in cat.with_source(cat.dst(a)) {
        if let Some(xa) = cat.compose(x, a) {
            s.insert(xa.idx());
        }
    }
    s
}

/// α = xβ for some x.
fn right_divides(cat: &SmallCategory, b: Mor, a: Mor) -> bool {
    cat.factorizations(a).iter().any(|&(_, y)| y == b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The carrier is the whole category.
    Exhaustive,
    /// Within the carrier every equation xα = yβ has α, β right-comparable,
    /// and the pair is not right-comparable.
    RightRigid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reversibility {
    Reversible,
    Counterexample { alpha: Mor, beta: Mor, certificate: Certificate },
    /// No common left multiple inside the bound and no certificate.
    Unknown { alpha: Mor, beta: Mor },
}

/// Every composite with two factorizations xα = yβ has α ∈ Λβ or β ∈ Λα.
pub fn is_right_rigid(cat: &SmallCategory) -> bool {
    cat.morphisms().all(|g| {
        let f = cat.factorizations(g);
        f.iter().all(|&(_, a)| {
            f.iter()
                .all(|&(_, b)| right_divides(cat, b, a) || right_divides(cat, a, b))
        })
    })
}

/// Λα ∩ Λβ ≠ ∅ for all α, β with s(α) = s(β), pairs in index order.
pub fn is_right_reversible(cat: &SmallCategory) -> Reversibility {
    let multiples: Vec<FixedBitSet> = cat.morphisms().map(|a| left_multiples(cat, a)).collect();
    let mut rigid: Option<bool> = None;
    for a in cat.morphisms() {
        for b in cat.morphisms().filter(|&b| b > a && cat.src(b) == cat.src(a)) {
            if !multiples[a.idx()].is_disjoint(&multiples[b.idx()]) {
                continue;
            }
            if cat.is_total() {
                return Reversibility::Counterexample {
                    alpha: a,
                    beta: b,
                    certificate: Certificate::Exhaustive,
                };
            }
            let r = *rigid.get_or_insert_with(|| is_right_rigid(cat));
            let comparable = right_divides(cat, a, b) || right_divides(cat, b, a);
            return if r && !comparable {
                Reversibility::Counterexample {
                    alpha: a,
                    beta: b,
                    certificate: Certificate::RightRigid,
                }
            } else {
                Reversibility::Unknown { alpha: a, beta: b }
            };
        }
    }
    Reversibility::Reversible
}

fn check_pair(cat: &SmallCategory, p: (Mor, Mor)) -> Result<(), OreError> {
    if cat.dst(p.0) != cat.dst(p.1) {
        return Err(OreError::Shape(p.0, p.1));
    }
    Ok(())
}

/// Witnesses x, y with xα = yγ and xβ = yδ, first in (x, y) index order.
pub fn fraction_equiv(cat: &SmallCategory, p: (Mor, Mor), q: (Mor, Mor)) -> Result<Option<(Mor, Mor)>, OreError> {
    check_pair(cat, p)?;
    check_pair(cat, q)?;
    for &x in cat.with_source(cat.dst(p.0)) {
        let (Some(xa), Some(xb)) = (cat.compose(x, p.0), cat.compose(x, p.1)) else {
            continue;
        };
        for &y in cat.with_source(cat.dst(q.0)) {
            if cat.compose(y, q.0) == Some(xa) && cat.compose(y, q.1) == Some(xb) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// Classes of S on the carrier with their product table.
#[derive(Debug, Clone)]
pub struct FractionGroupoid {
    pairs: Vec<(Mor, Mor)>,
    class_of: HashMap<(Mor, Mor), usize>,
    classes: Vec<Vec<usize>>,
    table: HashMap<(usize, usize), usize>,
    /// Products checked for witness independence.
    pub witnesses_checked: usize,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl FractionGroupoid {
    pub fn new(cat: &SmallCategory) -> Result<Self, OreError> {
        if !cat.is_right_cancellative() {
            return Err(OreError::NotRightCancellative);
        }
        if let Reversibility::Counterexample { alpha, beta, .. } = is_right_reversible(cat) {
            return Err(OreError::NotRightReversible(alpha, beta));
        }
        let mut pairs = Vec::new();
        for a in cat.morphisms() {
            for &b in cat.with_range(cat.dst(a)) {
                pairs.push((a, b));
            }
        }
        let index: HashMap<(Mor, Mor), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut parent: Vec<usize> = (0..pairs.len()).collect();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for &x in cat.with_source(cat.dst(a)) {
                if let (Some(xa), Some(xb)) = (cat.compose(x, a), cat.compose(x, b)) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, index[&(xa, xb)]));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut root_class: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = HashMap::new();
        for i in 0..pairs.len() {
            let r = find(&mut parent, i);
            let c = *root_class.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(i);
            class_of.insert(pairs[i], c);
        }
        let mut g = FractionGroupoid {
            pairs,
            class_of,
            classes,
            table: HashMap::new(),
            witnesses_checked: 0,
        };
        g.fill_table(cat)?;
        Ok(g)
    }

    /// Every representative pair and witness of every product is tried;
    /// all must land in one class.
    fn fill_table(&mut self, cat: &SmallCategory) -> Result<(), OreError> {
        for c1 in 0..self.classes.len() {
            for c2 in 0..self.classes.len() {
                let mut found: Option<usize> = None;
                for &i in &self.classes[c1] {
                    let (a, b) = self.pairs[i];
                    for &j in &self.classes[c2] {
                        let (g, d) = self.pairs[j];
                        if cat.src(b) != cat.src(g) {
                            continue;
                        }
                        for &x in cat.with_source(cat.dst(b)) {
                            let Some(xb) = cat.compose(x, b) else { continue };
                            for &y in cat.with_source(cat.dst(g)) {
                                if cat.compose(y, g) != Some(xb) {
                                    continue;
                                }
                                let (Some(xa), Some(yd)) = (cat.compose(x, a), cat.compose(y, d)) else {
                                    continue;
                                };
                                let Some(&c) = self.class_of.get(&(xa, yd)) else { continue };
                                self.witnesses_checked += 1;
                                match found {
                                    None => found = Some(c),
                                    Some(f) if f != c => {
                                        return Err(OreError::WitnessDependent { classes: (c1, c2) })
                                    }
                                    _ => {}
                                }
                            }
                        }
                    }
                }
                if let Some(c) = found {
                    self.table.insert((c1, c2), c);
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, p: (Mor, Mor)) -> Option<usize> {
        self.class_of.get(&p).copied()
    }

    /// First pair of the class in index order.
    pub fn representative(&self, c: usize) -> (Mor, Mor) {
        self.pairs[self.classes[c][0]]
    }

    pub fn members(&self, c: usize) -> impl Iterator<Item = (Mor, Mor)> + '_ {
        self.classes[c].iter().map(|&i| self.pairs[i])
    }

    /// [α, β] goes from s(β) to s(α).
    pub fn source(&self, cat: &SmallCategory, c: usize) -> crate::category::Obj {
        cat.src(self.representative(c).1)
    }

    pub fn range(&self, cat: &SmallCategory, c: usize) -> crate::category::Obj {
        cat.src(self.representative(c).0)
    }

    /// ι(α) = [r(α), α].
    pub fn iota(&self, cat: &SmallCategory, a: Mor) -> usize {
        self.class_of[&(cat.identity(cat.dst(a)), a)]
    }

    pub fn inverse(&self, c: usize) -> usize {
        let (a, b) = self.representative(c);
        self.class_of[&(b, a)]
    }

    /// Product within the carrier, None when no witness fits.
    pub fn product(&self, c1: usize, c2: usize) -> Option<usize> {
        self.table.get(&(c1, c2)).copied()
    }

    pub fn is_unit(&self, c: usize) -> bool {
        let (a, b) = self.representative(c);
        a == b
    }

    /// ι is injective on the carrier.
    pub fn iota_injective(&self, cat: &SmallCategory) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.len());
        cat.morphisms().all(|a| {
            let c = self.iota(cat, a);
            let fresh = !seen.contains(c);
            seen.insert(c);
            fresh
        })
    }

    /// (checked, failures) over all triples with both bracketings defined.
    pub fn check_associativity(&self) -> (usize, usize) {
        let mut checked = 0;
        let mut failures = 0;
        for a in 0..self.len() {
            for b in 0..self.len() {
                let Some(ab) = self.product(a, b) else { continue };
                for c in 0..self.len() {
                    let (Some(l), Some(r)) = (self.product(ab, c), self.product(b, c).and_then(|bc| self.product(a, bc)))
                    else {
                        continue;
                    };
                    checked += 1;
                    if l != r {
                        failures += 1;
                    }
                }
            }
        }
        (checked, failures)
    }
}

/// π̃([α, β]) = π(α)⁻¹π(β) for a functor π: Λ → H into a groupoid given
/// as a category with all morphisms invertible; `pi` maps each morphism of
/// Λ. Checks that π is a functor, π̃ is well defined on classes, π̃ι = π
/// and π̃ is multiplicative on every defined product.
pub fn extend_hom(cat: &SmallCategory, fg: &FractionGroupoid, h: &SmallCategory, pi: &[Mor]) -> Result<Vec<Mor>, OreError> {
    if h.morphisms().any(|m| h.inverse(m).is_none()) {
        return Err(OreError::NotAGroupoid);
    }
    for a in cat.morphisms() {
        for &(b, ab) in cat.right_products(a) {
            if h.compose(pi[a.idx()], pi[b.idx()]) != Some(pi[ab.idx()]) {
                return Err(OreError::NotAFunctor(alloc::format!("π({}{})", cat.name(a), cat.name(b))));
            }
        }
    }
    let value = |(a, b): (Mor, Mor)| {
        let inv = h.inverse(pi[a.idx()]).expect("groupoid");
        h.compose(inv, pi[b.idx()])
            .ok_or_else(|| OreError::NotAFunctor(alloc::format!("π({})⁻¹π({})", cat.name(a), cat.name(b))))
    };
    let mut images = Vec::with_capacity(fg.len());
    for c in 0..fg.len() {
        let v = value(fg.representative(c))?;
        for p in fg.members(c) {
            if value(p)? != v {
                return Err(OreError::NotAFunctor("not constant on a class".into()));
            }
        }
        images.push(v);
    }
    for a in cat.morphisms() {
        if images[fg.iota(cat, a)] != pi[a.idx()] {
            return Err(OreError::NotAFunctor(alloc::format!("π̃ι({}) != π", cat.name(a))));
        }
    }
    for c1 in 0..fg.len() {
        for c2 in 0..fg.len() {
            if let Some(c) = fg.product(c1, c2) {
                if h.compose(images[c1], images[c2]) != Some(images[c]) {
                    return Err(OreError::NotAFunctor("π̃ not multiplicative".into()));
                }
            }
        }
    }
    Ok(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, nsq_name};

    #[test]
    fn reversibility_examples() {
        assert_eq!(is_right_reversible(&fixtures::nsq(3)), Reversibility::Reversible);
        assert_eq!(is_right_reversible(&fixtures::group(2)), Reversibility::Reversible);
        let f = fixtures::free2(4);
        assert_eq!(
            is_right_reversible(&f),
            Reversibility::Counterexample {
                alpha: f.m("a"),
                beta: f.m("b"),
                certificate: Certificate::RightRigid
            }
        );
        let par = fixtures::par();
        assert!(matches!(
            is_right_reversible(&par),
            Reversibility::Counterexample {
                certificate: Certificate::Exhaustive,
                ..
            }
        ));
    }

    #[test]
    fn nat_fractions() {
        let n = fixtures::nat(8);
        let m = |k: usize| n.m(&alloc::format!("{k}"));
        assert_eq!(fraction_equiv(&n, (m(2), m(5)), (m(1), m(4))).unwrap(), Some((m(0), m(1))));
        assert_eq!(fraction_equiv(&n, (m(2), m(5)), (m(1), m(3))).unwrap(), None);
        assert_eq!(fraction_equiv(&n, (m(2), m(5)), (m(2), m(5))).unwrap(), Some((m(0), m(0))));
        let fg = FractionGroupoid::new(&n).unwrap();
        assert_eq!(fg.len(), 17);
        let c = |a: usize, b: usize| fg.class((m(a), m(b))).unwrap();
        assert_eq!(fg.product(c(0, 2), c(0, 3)), Some(c(0, 5)));
        assert_eq!(fg.product(c(2, 0), c(0, 3)), Some(c(0, 1)));
        assert_eq!(fg.product(c(3, 5), c(5, 3)), Some(c(3, 3)));
        assert!(fg.is_unit(c(4, 4)));
        assert!(fg.iota_injective(&n));
        assert_eq!(fg.product(fg.iota(&n, m(3)), fg.iota(&n, m(4))), Some(fg.iota(&n, m(7))));
        let (checked, failures) = fg.check_associativity();
        assert!(checked > 0 && failures == 0);
    }

    #[test]
    fn nsq_classes_are_differences() {
        let q = fixtures::nsq(2);
        let fg = FractionGroupoid::new(&q).unwrap();
        assert_eq!(fg.len(), 25);
        let coords = |m: Mor| {
            let s = q.name(m);
            let (a, b) = s.trim_matches(|c| c == '(' || c == ')').split_once(',').unwrap();
            (a.parse::<i64>().unwrap(), b.parse::<i64>().unwrap())
        };
        let mut key_class: HashMap<(i64, i64), usize> = HashMap::new();
        for c in 0..fg.len() {
            for (a, b) in fg.members(c) {
                let (pa, pb) = (coords(a), coords(b));
                let d = (pb.0 - pa.0, pb.1 - pa.1);
                assert_eq!(*key_class.entry(d).or_insert(c), c);
            }
        }
        assert_eq!(key_class.len(), fg.len());
        assert_eq!(fg.class((q.m(&nsq_name(1, 0)), q.m(&nsq_name(0, 1)))), Some(fg.inverse(fg.class((q.m(&nsq_name(0, 1)), q.m(&nsq_name(1, 0)))).unwrap())));
    }

    #[test]
    fn extension_to_cyclic_group() {
        let n = fixtures::nat(6);
        let z3 = fixtures::group(3);
        let pi: Vec<Mor> = n.morphisms().map(|m| z3.m(&fixtures::group_name(n.name(m).parse::<usize>().unwrap() % 3))).collect();
        let fg = FractionGroupoid::new(&n).unwrap();
        let img = extend_hom(&n, &fg, &z3, &pi).unwrap();
        assert_eq!(img[fg.class((n.m("0"), n.m("5"))).unwrap()], z3.m("g2"));
        let mut bad = pi.clone();
        bad[1] = z3.m("e");
        assert!(matches!(extend_hom(&n, &fg, &z3, &bad), Err(OreError::NotAFunctor(_))));
    }

    #[test]
    fn free_monoid_rejected() {
        assert!(matches!(FractionGroupoid::new(&fixtures::free2(3)), Err(OreError::NotRightReversible(_, _))));
    }
}
