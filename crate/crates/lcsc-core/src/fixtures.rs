//! Builders for the standard example categories.
//!
//! Names follow a fixed scheme so tests and reports can refer to morphisms by
//! id: composites are written with a dot (`alpha.gamma1`), and every object's
//! identity shares the object's id.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::category::{CategoryBuilder, SmallCategory, Totality};

/// Cyclic group ℤ/n as a one-object category. Elements are `e`, `g`, `g2`, ...
pub fn group(n: usize) -> SmallCategory {
    assert!(n >= 1);
    let mut b = CategoryBuilder::new();
    let star = b.object("e");
    let mut els = Vec::with_capacity(n);
    els.push(b.identity(star));
    for k in 1..n {
        els.push(b.morphism(&group_name(k), star, star));
    }
    for i in 0..n {
        for j in 0..n {
            b.compose(els[i], els[j], els[(i + j) % n]);
        }
    }
    b.build(Totality::Total).expect("group table is consistent")
}

pub fn group_name(k: usize) -> String {
    match k {
        0 => "e".into(),
        1 => "g".into(),
        _ => format!("g{k}"),
    }
}

/// Two parallel arrows f, g : v → u.
pub fn par() -> SmallCategory {
    let mut b = CategoryBuilder::new();
    let u = b.object("u");
    let v = b.object("v");
    b.morphism("f", v, u);
    b.morphism("g", v, u);
    b.build(Totality::Total).expect("PAR is consistent")
}

/// The 2-graph with α: x → u, β: y → u, γᵢ: v → x, δᵢ: v → y and
/// αγᵢ = βδᵢ for i = 1..n.
pub fn kg(n: usize) -> SmallCategory {
    let mut b = CategoryBuilder::new();
    let u = b.object("u");
    let x = b.object("x");
    let y = b.object("y");
    let v = b.object("v");
    let alpha = b.morphism("alpha", x, u);
    let beta = b.morphism("beta", y, u);
    let gammas: Vec<_> = (1..=n).map(|i| b.morphism(&format!("gamma{i}"), v, x)).collect();
    let deltas: Vec<_> = (1..=n).map(|i| b.morphism(&format!("delta{i}"), v, y)).collect();
    for i in 0..n {
        let c = b.morphism(&format!("alpha.gamma{}", i + 1), v, u);
        b.compose(alpha, gammas[i], c);
        b.compose(beta, deltas[i], c);
    }
    b.build(Totality::Total).expect("KG is consistent")
}

/// Wrapped version of the separation example: i ∈ ℤ/3M, j ∈ ℤ/p, one
/// source vertex `z` for all γᵢⱼ, δᵢⱼ.
///
/// The five relations αₖγᵢⱼ = βₖδ_{πₖ(i,j)} are realized by naming each
/// identified composite `alpha{k}.gamma{i}_{j}`; the unidentified composites
/// at k = 4, i ≡ 0 are `alpha4.gamma{i}_{j}` and `beta4.delta{i}_{j}`.
pub fn sep(p: usize, m: usize) -> SmallCategory {
    assert!(p > 1 && m >= 1);
    let rows = 3 * m;
    let mut b = CategoryBuilder::new();
    let us: Vec<_> = (0..5).map(|k| b.object(&format!("u{k}"))).collect();
    let v = b.object("v");
    let w = b.object("w");
    let z = b.object("z");
    let alphas: Vec<_> = (0..5).map(|k| b.morphism(&format!("alpha{k}"), v, us[k])).collect();
    let betas: Vec<_> = (0..5).map(|k| b.morphism(&format!("beta{k}"), w, us[k])).collect();
    let idx = |i: usize, j: usize| i * p + j;
    let mut gammas = Vec::with_capacity(rows * p);
    let mut deltas = Vec::with_capacity(rows * p);
    for i in 0..rows {
        for j in 0..p {
            gammas.push(b.morphism(&format!("gamma{i}_{j}"), z, v));
        }
    }
    for i in 0..rows {
        for j in 0..p {
            deltas.push(b.morphism(&format!("delta{i}_{j}"), z, w));
        }
    }
    for k in 0..5 {
        for i in 0..rows {
            for j in 0..p {
                let g = gammas[idx(i, j)];
                let name = format!("alpha{k}.gamma{i}_{j}");
                let target = match k {
                    0 => Some((i, j)),
                    1 if i % 3 == 1 => Some((i, (j + 1) % p)),
                    2 if i % 3 == 2 => Some((i, (j + 1) % p)),
                    3 if i % 3 == 0 => Some(((i + 3) % rows, j)),
                    4 if i % 3 == 0 => None,
                    _ => Some((i, j)),
                };
                let c = b.morphism(&name, z, us[k]);
                b.compose(alphas[k], g, c);
                match target {
                    Some((ti, tj)) => b.compose(betas[k], deltas[idx(ti, tj)], c),
                    None => {
                        let d = b.morphism(&format!("beta4.delta{i}_{j}"), z, us[k]);
                        b.compose(betas[k], deltas[idx(i, j)], d);
                    }
                }
            }
        }
    }
    b.build(Totality::Total).expect("SEP is consistent")
}

/// ℕ truncated to {0..l}; morphism `n` for each n.
pub fn nat(l: usize) -> SmallCategory {
    let mut b = CategoryBuilder::new();
    let o = b.object("0");
    let mut ms = alloc::vec![b.identity(o)];
    for n in 1..=l {
        ms.push(b.morphism(&format!("{n}"), o, o));
    }
    for i in 0..=l {
        for j in 0..=l - i {
            b.compose(ms[i], ms[j], ms[i + j]);
        }
    }
    b.build(Totality::Bounded(l)).expect("ℕ table is consistent")
}

/// ℕ² truncated to the box [0,l]²; morphism `(a,b)`.
pub fn nsq(l: usize) -> SmallCategory {
    let mut b = CategoryBuilder::new();
    let o = b.object("(0,0)");
    let side = l + 1;
    let mut ms = Vec::with_capacity(side * side);
    for a in 0..side {
        for c in 0..side {
            if a == 0 && c == 0 {
                ms.push(b.identity(o));
            } else {
                ms.push(b.morphism(&nsq_name(a, c), o, o));
            }
        }
    }
    for a1 in 0..side {
        for b1 in 0..side {
            for a2 in 0..side - a1 {
                for b2 in 0..side - b1 {
                    b.compose(ms[a1 * side + b1], ms[a2 * side + b2], ms[(a1 + a2) * side + b1 + b2]);
                }
            }
        }
    }
    b.build(Totality::Bounded(l)).expect("ℕ² table is consistent")
}

pub fn nsq_name(a: usize, b: usize) -> String {
    format!("({a},{b})")
}

/// Free monoid on {a, b}, words of length at most l. The empty word is `e`.
pub fn free2(l: usize) -> SmallCategory {
    let mut words: Vec<String> = alloc::vec![String::new()];
    let mut frontier = words.clone();
    for _ in 0..l {
        let mut next = Vec::new();
        for w in &frontier {
            for c in ['a', 'b'] {
                let mut x = w.clone();
                x.push(c);
                next.push(x);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut b = CategoryBuilder::new();
    let o = b.object("e");
    let ids: Vec<_> = words
        .iter()
        .map(|w| if w.is_empty() { b.identity(o) } else { b.morphism(w, o, o) })
        .collect();
    let pos: hashbrown::HashMap<&str, usize> = words.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();
    for (i, x) in words.iter().enumerate() {
        for (j, y) in words.iter().enumerate() {
            if x.len() + y.len() <= l {
                let xy = format!("{x}{y}");
                b.compose(ids[i], ids[j], ids[pos[xy.as_str()]]);
            }
        }
    }
    b.build(Totality::Bounded(l)).expect("free monoid table is consistent")
}
