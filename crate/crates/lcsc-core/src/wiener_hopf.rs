//! Wiener–Hopf operators W_t for a submonoid Λ of a group Y, on a finite
//! truncation of ℓ²(Λ), and certificates that W_t lies in the algebra of
//! zigzag operators.
//!
//! Groups are word models with exact membership for Λ, so truncation only
//! affects which basis vectors exist: a column whose image lies in Λ but
//! outside the truncation is flagged as an edge and ignored in comparisons.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::hash::Hash;

use fixedbitset::FixedBitSet;
use hashbrown::HashMap;

use crate::operator::{deviation, PartialPerm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WienerHopfError {
    #[error("element not in the group: {0}")]
    NotInGroup(String),
    #[error("element not in the monoid: {0}")]
    NotInMonoid(String),
}

/// A group with a distinguished submonoid Λ.
pub trait GroupModel {
    type E: Clone + Eq + Hash + Ord + Debug;
    fn identity(&self) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn in_monoid(&self, a: &Self::E) -> bool;
    fn display(&self, a: &Self::E) -> String;
    fn parse(&self, s: &str) -> Result<Self::E, WienerHopfError>;
}

/// ℤⁿ with Λ = ℕⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeModel {
    pub rank: usize,
}

impl GroupModel for LatticeModel {
    type E = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        alloc::vec![0; self.rank]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn in_monoid(&self, a: &Vec<i64>) -> bool {
        a.iter().all(|&x| x >= 0)
    }

    fn display(&self, a: &Vec<i64>) -> String {
        let parts: Vec<String> = a.iter().map(|x| format!("{x}")).collect();
        format!("({})", parts.join(","))
    }

    /// `(a,b,...)`.
    fn parse(&self, s: &str) -> Result<Vec<i64>, WienerHopfError> {
        let bad = || WienerHopfError::NotInGroup(String::from(s));
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let v: Vec<i64> = inner
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if v.len() != self.rank {
            return Err(bad());
        }
        Ok(v)
    }
}

/// The free group on α, β, γ₁..γₙ with Λ generated by α, β, γᵢ and
/// δᵢ = β⁻¹αγᵢ. Letters are ±1 (α), ±2 (β), ±(2+i) (γᵢ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroupModel {
    pub n: usize,
}

pub const ALPHA: i32 = 1;
pub const BETA: i32 = 2;

pub fn gamma(i: usize) -> i32 {
    2 + i as i32
}

impl FreeGroupModel {
    fn letter_name(&self, l: i32) -> String {
        let base = match l.abs() {
            1 => String::from("a"),
            2 => String::from("b"),
            k => format!("c{}", k - 2),
        };
        if l < 0 {
            format!("{base}'")
        } else {
            base
        }
    }

    pub fn delta(&self, i: usize) -> Vec<i32> {
        alloc::vec![-BETA, ALPHA, gamma(i)]
    }

    /// Splits a reduced word into generators of Λ, or None.
    pub fn tokens(&self, w: &[i32]) -> Option<Vec<Vec<i32>>> {
        let mut out = Vec::new();
        let mut k = 0;
        while k < w.len() {
            let l = w[k];
            if l > 0 {
                out.push(alloc::vec![l]);
                k += 1;
            } else if l == -BETA && k + 2 < w.len() && w[k + 1] == ALPHA && w[k + 2] > BETA {
                out.push(w[k..k + 3].to_vec());
                k += 3;
            } else {
                return None;
            }
        }
        Some(out)
    }

    /// Elements of Λ that are products of at most `l` generators.
    pub fn ball(&self, l: usize) -> Vec<Vec<i32>> {
        let mut gens: Vec<Vec<i32>> = alloc::vec![alloc::vec![ALPHA], alloc::vec![BETA]];
        for i in 1..=self.n {
            gens.push(alloc::vec![gamma(i)]);
            gens.push(self.delta(i));
        }
        let mut seen: hashbrown::HashSet<Vec<i32>> = hashbrown::HashSet::new();
        seen.insert(Vec::new());
        let mut frontier = alloc::vec![Vec::new()];
        for _ in 0..l {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &gens {
                    let p = self.mul(w, g);
                    if seen.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Vec<i32>> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }
}

impl GroupModel for FreeGroupModel {
    type E = Vec<i32>;

    fn identity(&self) -> Vec<i32> {
        Vec::new()
    }

    fn mul(&self, a: &Vec<i32>, b: &Vec<i32>) -> Vec<i32> {
        let mut out = a.clone();
        for &l in b {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    fn inv(&self, a: &Vec<i32>) -> Vec<i32> {
        a.iter().rev().map(|l| -l).collect()
    }

    fn in_monoid(&self, a: &Vec<i32>) -> bool {
        self.tokens(a).is_some()
    }

    fn display(&self, a: &Vec<i32>) -> String {
        if a.is_empty() {
            return String::from("e");
        }
        let parts: Vec<String> = a.iter().map(|&l| self.letter_name(l)).collect();
        parts.join(".")
    }

    /// Dot-separated letters `a`, `b`, `c1`.., with `'` for inverses;
    /// `e` is the empty word.
    fn parse(&self, s: &str) -> Result<Vec<i32>, WienerHopfError> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Vec::new());
        }
        let bad = || WienerHopfError::NotInGroup(String::from(s));
        let mut w = Vec::new();
        for part in s.split('.') {
            let (name, inverse) = match part.strip_suffix('\'') {
                Some(p) => (p, true),
                None => (part, false),
            };
            let l = match name {
                "a" => ALPHA,
                "b" => BETA,
                _ => {
                    let i: usize = name.strip_prefix('c').and_then(|x| x.parse().ok()).ok_or_else(bad)?;
                    if i == 0 || i > self.n {
                        return Err(bad());
                    }
                    gamma(i)
                }
            };
            w = self.mul(&w, &alloc::vec![if inverse { -l } else { l }]);
        }
        Ok(w)
    }
}

/// A finite set of elements of Λ spanning the truncated ℓ²(Λ).
#[derive(Debug, Clone)]
pub struct Truncation<G: GroupModel> {
    pub model: G,
    elements: Vec<G::E>,
    index: HashMap<G::E, usize>,
}

impl<G: GroupModel> Truncation<G> {
    pub fn new(model: G, elements: Vec<G::E>) -> Result<Self, WienerHopfError> {
        for e in &elements {
            if !model.in_monoid(e) {
                return Err(WienerHopfError::NotInMonoid(model.display(e)));
            }
        }
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(Truncation { model, elements, index })
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[G::E] {
        &self.elements
    }

    pub fn position(&self, e: &G::E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements.iter().map(|e| self.model.display(e)).collect()
    }

    /// The operator x ↦ f(x) on the truncation, with edge columns where
    /// f(x) lies in Λ but outside the truncation.
    pub fn operator(&self, f: impl Fn(&G::E) -> Option<G::E>) -> Compression {
        let n = self.dim();
        let mut edge = FixedBitSet::with_capacity(n);
        let images: Vec<Option<usize>> = self
            .elements
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let y = f(x)?;
                let p = self.position(&y);
                if p.is_none() && self.model.in_monoid(&y) {
                    edge.insert(j);
                }
                p
            })
            .collect();
        Compression {
            op: PartialPerm::from_fn(n, |j| images[j]),
            edge,
        }
    }

    /// φ_ζ evaluated in the group: τ^β then σ^α per pair, right to left.
    pub fn zigzag_image(&self, z: &[(G::E, G::E)], x: &G::E) -> Option<G::E> {
        let m = &self.model;
        let mut y = x.clone();
        for (a, b) in z.iter().rev() {
            y = m.mul(b, &y);
            let back = m.mul(&m.inv(a), &y);
            if !m.in_monoid(&back) {
                return None;
            }
            y = back;
        }
        Some(y)
    }

    pub fn zigzag_operator(&self, z: &[(G::E, G::E)]) -> Compression {
        self.operator(|x| self.zigzag_image(z, x))
    }
}

/// An operator on a truncation together with its edge columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Compression {
    pub op: PartialPerm,
    pub edge: FixedBitSet,
}

/// ℕⁿ ∩ [0,b]ⁿ in lexicographic order.
pub fn lattice_box(rank: usize, b: i64) -> Truncation<LatticeModel> {
    let mut elements: Vec<Vec<i64>> = alloc::vec![Vec::new()];
    for _ in 0..rank {
        elements = elements
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    Truncation::new(LatticeModel { rank }, elements).expect("box lies in ℕⁿ")
}

pub fn free_group_ball(n: usize, l: usize) -> Truncation<FreeGroupModel> {
    let model = FreeGroupModel { n };
    let elements = model.ball(l);
    Truncation::new(model, elements).expect("ball lies in Λ")
}

/// W_t e_α = e_{tα} if tα ∈ Λ, else 0.
pub fn wiener_hopf<G: GroupModel>(tr: &Truncation<G>, t: &G::E) -> Compression {
    tr.operator(|x| {
        let y = tr.model.mul(t, x);
        tr.model.in_monoid(&y).then_some(y)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    /// ζ = (γ, δ) with t = γ⁻¹δ.
    LeftQuotient,
    /// ζ = (r(μ), μ, ν, r(ν)) with t = μν⁻¹, so W_ζ = W_μ W_ν*.
    RightQuotient,
    /// Several zigzags whose domains together give Λ ∩ t⁻¹Λ.
    Union,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<E> {
    pub kind: CertificateKind,
    /// Each zigzag as its list of (αᵢ, βᵢ) pairs.
    pub family: Vec<Vec<(E, E)>>,
    /// Deviation of W_t from ⋁ W_ζ off the edge columns.
    pub deviation: f64,
    /// Columns excluded as truncation edges.
    pub edge_columns: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Membership<E> {
    Found(Certificate<E>),
    NotFound { candidates: usize },
}

/// Search for a finite family F with φ_ζ = t on A(ζ) and
/// Λ ∩ t⁻¹Λ = ∪ A(ζ), over zigzags (γ, δ) and (r(μ), μ, ν, r(ν)) built
/// from the first `search_bound` truncation elements. The union identity
/// and W_t = ⋁ W_ζ are checked on the truncation.
pub fn wh_membership<G: GroupModel>(tr: &Truncation<G>, t: &G::E, search_bound: usize) -> Membership<G::E> {
    let m = &tr.model;
    let wt = wiener_hopf(tr, t);
    let id = m.identity();
    let mut candidates: Vec<(CertificateKind, Vec<(G::E, G::E)>)> = Vec::new();
    for g in tr.elements().iter().take(search_bound) {
        let d = m.mul(g, t);
        if m.in_monoid(&d) {
            candidates.push((CertificateKind::LeftQuotient, alloc::vec![(g.clone(), d)]));
        }
    }
    for nu in tr.elements().iter().take(search_bound) {
        let mu = m.mul(t, nu);
        if m.in_monoid(&mu) {
            candidates.push((
                CertificateKind::RightQuotient,
                alloc::vec![(id.clone(), mu), (nu.clone(), id.clone())],
            ));
        }
    }
    let ops: Vec<Compression> = candidates.iter().map(|(_, z)| tr.zigzag_operator(z)).collect();
    let compare = |chosen: &[usize]| -> Option<(f64, usize)> {
        let n = tr.dim();
        let mut edge = wt.edge.clone();
        for &i in chosen {
            edge.union_with(&ops[i].edge);
        }
        // Every candidate is a restriction of t, so the join is the union
        // of the column maps.
        let joined = PartialPerm::from_fn(n, |j| chosen.iter().find_map(|&i| ops[i].op.apply(j)));
        let (a, b) = (wt.op.mask(&edge), joined.mask(&edge));
        (a == b).then(|| (deviation(&a, &b), edge.count_ones(..)))
    };
    for i in 0..candidates.len() {
        if let Some((dev, edges)) = compare(&[i]) {
            return Membership::Found(Certificate {
                kind: candidates[i].0.clone(),
                family: alloc::vec![candidates[i].1.clone()],
                deviation: dev,
                edge_columns: edges,
            });
        }
    }
    let all: Vec<usize> = (0..candidates.len()).collect();
    if !all.is_empty() {
        if let Some((dev, edges)) = compare(&all) {
            return Membership::Found(Certificate {
                kind: CertificateKind::Union,
                family: candidates.into_iter().map(|c| c.1).collect(),
                deviation: dev,
                edge_columns: edges,
            });
        }
    }
    Membership::NotFound {
        candidates: candidates.len(),
    }
}

/// Checks W_t = W_μ W_ν* on the truncation off edge columns, returning the
/// deviation.
pub fn verify_right_quotient<G: GroupModel>(tr: &Truncation<G>, t: &G::E, mu: &G::E, nu: &G::E) -> f64 {
    let m = &tr.model;
    let wt = wiener_hopf(tr, t);
    let wmu = tr.operator(|x| Some(m.mul(mu, x)));
    let wnu = tr.operator(|x| Some(m.mul(nu, x)));
    let product = wmu.op.compose(&wnu.op.adjoint());
    // W_ν* e_y is missing when y = νx with x past the truncation; those
    // are the rows of W_t reached from such columns.
    let mut edge = wt.edge.clone();
    edge.union_with(&wmu.edge);
    for (j, y) in tr.elements().iter().enumerate() {
        let x = m.mul(&m.inv(nu), y);
        if m.in_monoid(&x) && tr.position(&x).is_none() {
            edge.insert(j);
        }
    }
    for j in 0..tr.dim() {
        if let Some(x) = wnu.op.adjoint().apply(j) {
            if wmu.edge.contains(x) {
                edge.insert(j);
            }
        }
    }
    deviation(&wt.op.mask(&edge), &product.mask(&edge))
}
