//! Amalgamation of small categories over an equivalence on their vertices.
//!
//! Morphisms of the amalgam are ≈-classes of composable tuples, represented
//! by normal forms: no identity entries and no adjacent pair composable
//! inside one component.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use rand::Rng;

use crate::category::{CategoryBuilder, Mor, Obj, SmallCategory, StructureError, Totality};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AmalgamError {
    #[error("component {component} is invalid: {reason}")]
    InvalidComponent { component: usize, reason: String },
    #[error("vertex {vertex:?} of component {component} does not exist or is listed twice")]
    BadPartition { component: usize, vertex: Obj },
    #[error("entries {0} and {1} are not composable")]
    NotComposable(usize, usize),
    #[error("composite leaves a bounded component")]
    OutOfBound,
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub comp: usize,
    pub m: Mor,
}

/// A composable tuple; with no entries it is the vertex `range`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmalgamWord {
    pub range: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Replace entries j, j+1 by their composite.
    Merge(usize),
    /// Drop the identity entry j.
    Delete(usize),
}

#[derive(Debug, Clone)]
pub struct Amalgam {
    components: Vec<SmallCategory>,
    class_of: Vec<Vec<usize>>,
    class_names: Vec<String>,
}

impl Amalgam {
    /// `blocks` lists the nontrivial classes; unlisted vertices are
    /// singletons.
    pub fn new(components: Vec<SmallCategory>, blocks: &[Vec<(usize, Obj)>]) -> Result<Self, AmalgamError> {
        for (i, c) in components.iter().enumerate() {
            let report = c.validate();
            if let Some(v) = report.violations.first() {
                return Err(AmalgamError::InvalidComponent {
                    component: i,
                    reason: v.describe(c),
                });
            }
        }
        let mut class_of: Vec<Vec<usize>> = components.iter().map(|c| alloc::vec![usize::MAX; c.num_objects()]).collect();
        let mut members: Vec<Vec<(usize, Obj)>> = Vec::new();
        for block in blocks {
            let k = members.len();
            for &(comp, v) in block {
                let slot = class_of
                    .get_mut(comp)
                    .and_then(|c| c.get_mut(v.idx()))
                    .filter(|s| **s == usize::MAX)
                    .ok_or(AmalgamError::BadPartition { component: comp, vertex: v })?;
                *slot = k;
            }
            members.push(block.clone());
        }
        for (comp, c) in components.iter().enumerate() {
            for v in c.objects() {
                if class_of[comp][v.idx()] == usize::MAX {
                    class_of[comp][v.idx()] = members.len();
                    members.push(alloc::vec![(comp, v)]);
                }
            }
        }
        let prefix = components.len() > 1;
        let class_names = members
            .iter()
            .map(|b| {
                let names: Vec<String> = b
                    .iter()
                    .map(|&(comp, v)| qualified(prefix, comp, components[comp].object_name(v)))
                    .collect();
                names.join("=")
            })
            .collect();
        Ok(Amalgam {
            components,
            class_of,
            class_names,
        })
    }

    /// A single category with all of its vertices identified.
    pub fn identify_all(cat: SmallCategory) -> Self {
        let block: Vec<(usize, Obj)> = cat.objects().map(|v| (0, v)).collect();
        Amalgam::new(alloc::vec![cat], &[block]).expect("one block over valid objects")
    }

    pub fn components(&self) -> &[SmallCategory] {
        &self.components
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_name(&self, c: usize) -> &str {
        &self.class_names[c]
    }

    pub fn class(&self, comp: usize, v: Obj) -> usize {
        self.class_of[comp][v.idx()]
    }

    fn cat(&self, e: Entry) -> &SmallCategory {
        &self.components[e.comp]
    }

    fn src_class(&self, e: Entry) -> usize {
        self.class(e.comp, self.cat(e).src(e.m))
    }

    fn dst_class(&self, e: Entry) -> usize {
        self.class(e.comp, self.cat(e).dst(e.m))
    }

    pub fn is_identity(&self, e: Entry) -> bool {
        self.cat(e).is_identity(e.m)
    }

    /// Entries of all components in (component, morphism) order.
    pub fn all_entries(&self) -> Vec<Entry> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(comp, c)| c.morphisms().map(move |m| Entry { comp, m }))
            .collect()
    }

    pub fn entry(&self, comp: usize, id: &str) -> Option<Entry> {
        self.components.get(comp)?.lookup(id).map(|m| Entry { comp, m })
    }

    /// Checks s(αⱼ) ∼ r(αⱼ₊₁).
    pub fn word(&self, entries: Vec<Entry>) -> Result<AmalgamWord, AmalgamError> {
        let first = *entries.first().expect("nonempty tuple; use vertex() for vertices");
        for j in 0..entries.len() - 1 {
            if self.src_class(entries[j]) != self.dst_class(entries[j + 1]) {
                return Err(AmalgamError::NotComposable(j, j + 1));
            }
        }
        Ok(AmalgamWord {
            range: self.dst_class(first),
            entries,
        })
    }

    pub fn vertex(&self, class: usize) -> AmalgamWord {
        AmalgamWord {
            range: class,
            entries: Vec::new(),
        }
    }

    pub fn source(&self, w: &AmalgamWord) -> usize {
        w.entries.last().map_or(w.range, |&e| self.src_class(e))
    }

    pub fn concat(&self, a: &AmalgamWord, b: &AmalgamWord) -> Result<AmalgamWord, AmalgamError> {
        if self.source(a) != b.range {
            return Err(AmalgamError::NotComposable(a.entries.len(), a.entries.len() + 1));
        }
        let mut entries = a.entries.clone();
        entries.extend_from_slice(&b.entries);
        Ok(AmalgamWord { range: a.range, entries })
    }

    fn mergeable(&self, a: Entry, b: Entry) -> bool {
        a.comp == b.comp && self.cat(a).src(a.m) == self.cat(b).dst(b.m)
    }

    fn merge(&self, a: Entry, b: Entry) -> Result<Entry, AmalgamError> {
        let m = self.cat(a).compose(a.m, b.m).ok_or(AmalgamError::OutOfBound)?;
        Ok(Entry { comp: a.comp, m })
    }

    pub fn is_normal(&self, w: &AmalgamWord) -> bool {
        w.entries.iter().all(|&e| !self.is_identity(e))
            && w.entries.windows(2).all(|p| !self.mergeable(p[0], p[1]))
    }

    /// Stack reduction: each entry is merged into the top of the stack while
    /// possible and identities are dropped.
    pub fn normal_form(&self, w: &AmalgamWord) -> Result<AmalgamWord, AmalgamError> {
        let mut stack: Vec<Entry> = Vec::with_capacity(w.entries.len());
        for &e in &w.entries {
            let mut cur = Some(e).filter(|&e| !self.is_identity(e));
            while let (Some(c), Some(&top)) = (cur, stack.last()) {
                if !self.mergeable(top, c) {
                    break;
                }
                stack.pop();
                let merged = self.merge(top, c)?;
                cur = Some(merged).filter(|&e| !self.is_identity(e));
            }
            if let Some(c) = cur {
                stack.push(c);
            }
        }
        Ok(AmalgamWord {
            range: w.range,
            entries: stack,
        })
    }

    pub fn moves(&self, w: &AmalgamWord) -> Vec<Move> {
        let mut out = Vec::new();
        for (j, &e) in w.entries.iter().enumerate() {
            if self.is_identity(e) {
                out.push(Move::Delete(j));
            }
            if j + 1 < w.entries.len() && self.mergeable(e, w.entries[j + 1]) {
                out.push(Move::Merge(j));
            }
        }
        out
    }

    pub fn apply_move(&self, w: &AmalgamWord, mv: Move) -> Result<AmalgamWord, AmalgamError> {
        let mut entries = w.entries.clone();
        match mv {
            Move::Delete(j) => {
                entries.remove(j);
            }
            Move::Merge(j) => {
                let m = self.merge(entries[j], entries[j + 1])?;
                entries[j] = m;
                entries.remove(j + 1);
            }
        }
        Ok(AmalgamWord { range: w.range, entries })
    }

    /// Applies randomly chosen moves until none applies.
    pub fn normal_form_random<R: Rng>(&self, w: &AmalgamWord, rng: &mut R) -> Result<AmalgamWord, AmalgamError> {
        let mut cur = w.clone();
        loop {
            let moves = self.moves(&cur);
            if moves.is_empty() {
                return Ok(cur);
            }
            cur = self.apply_move(&cur, moves[rng.gen_range(0..moves.len())])?;
        }
    }

    /// A random composable tuple of the given length, identities included.
    pub fn random_word<R: Rng>(&self, len: usize, rng: &mut R) -> AmalgamWord {
        let entries = self.all_entries();
        let mut w: Vec<Entry> = alloc::vec![entries[rng.gen_range(0..entries.len())]];
        while w.len() < len {
            let need = self.src_class(*w.last().expect("nonempty"));
            let options: Vec<Entry> = entries.iter().copied().filter(|&e| self.dst_class(e) == need).collect();
            w.push(options[rng.gen_range(0..options.len())]);
        }
        self.word(w).expect("built composable")
    }

    /// αΛ ∩ βΛ ≠ ∅ for normal forms, decided by comparing entries: all but
    /// the last entry of the shorter word agree, and its last entry is
    /// extended by (or meets, for equal lengths) the corresponding entry
    /// of the other word inside one component.
    pub fn cap(&self, a: &AmalgamWord, b: &AmalgamWord) -> bool {
        if a.range != b.range {
            return false;
        }
        let (s, l) = if a.entries.len() <= b.entries.len() { (a, b) } else { (b, a) };
        let m = s.entries.len();
        if m == 0 {
            return true;
        }
        if s.entries[..m - 1] != l.entries[..m - 1] {
            return false;
        }
        let (x, y) = (s.entries[m - 1], l.entries[m - 1]);
        if x.comp != y.comp {
            return false;
        }
        let cat = self.cat(x);
        if m < l.entries.len() {
            cat.in_cone(x.m, y.m)
        } else {
            let mut meet = cat.cone(x.m);
            meet.intersect_with(&cat.cone(y.m));
            !meet.is_clear()
        }
    }

    /// Normal-form words with 1..=bound entries in length-then-lexicographic
    /// order.
    pub fn enumerate(&self, bound: usize) -> Vec<AmalgamWord> {
        let entries: Vec<Entry> = self.all_entries().into_iter().filter(|&e| !self.is_identity(e)).collect();
        let mut out: Vec<AmalgamWord> = Vec::new();
        let mut frontier: Vec<AmalgamWord> = entries
            .iter()
            .map(|&e| AmalgamWord {
                range: self.dst_class(e),
                entries: alloc::vec![e],
            })
            .collect();
        for _ in 0..bound {
            out.extend(frontier.iter().cloned());
            let mut next = Vec::new();
            for w in &frontier {
                let last = *w.entries.last().expect("nonempty");
                for &e in &entries {
                    if self.src_class(last) == self.dst_class(e) && !self.mergeable(last, e) {
                        let mut n = w.clone();
                        n.entries.push(e);
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        out
    }

    pub fn entry_name(&self, e: Entry) -> String {
        qualified(self.components.len() > 1, e.comp, self.cat(e).name(e.m))
    }

    pub fn word_name(&self, w: &AmalgamWord) -> String {
        if w.entries.is_empty() {
            return self.class_names[w.range].clone();
        }
        let names: Vec<String> = w.entries.iter().map(|&e| self.entry_name(e)).collect();
        names.join("|")
    }

    /// The amalgam truncated to normal forms of at most `bound` entries.
    pub fn truncate(&self, bound: usize) -> Result<TruncatedAmalgam, AmalgamError> {
        let words = self.enumerate(bound);
        let mut b = CategoryBuilder::new();
        let objs: Vec<Obj> = (0..self.num_classes()).map(|c| b.object(&self.class_names[c])).collect();
        let mut index: HashMap<AmalgamWord, Mor> = HashMap::new();
        for (c, &o) in objs.iter().enumerate() {
            index.insert(self.vertex(c), b.identity(o));
        }
        let mut all: Vec<AmalgamWord> = (0..self.num_classes()).map(|c| self.vertex(c)).collect();
        for w in &words {
            let m = b.morphism(&self.word_name(w), objs[self.source(w)], objs[w.range]);
            index.insert(w.clone(), m);
            all.push(w.clone());
        }
        for x in &words {
            for y in &words {
                if self.source(x) != y.range {
                    continue;
                }
                let xy = self.normal_form(&self.concat(x, y)?)?;
                if let Some(&m) = index.get(&xy) {
                    b.compose(index[x], index[y], m);
                }
            }
        }
        let category = b.build(Totality::Bounded(bound))?;
        let mut by_mor = alloc::vec![self.vertex(0); category.num_morphisms()];
        for w in all {
            let i = index[&w].idx();
            by_mor[i] = w;
        }
        Ok(TruncatedAmalgam {
            category,
            words: by_mor,
        })
    }
}

fn qualified(prefix: bool, comp: usize, name: &str) -> String {
    if prefix {
        format!("{comp}:{name}")
    } else {
        String::from(name)
    }
}

#[derive(Debug, Clone)]
pub struct TruncatedAmalgam {
    pub category: SmallCategory,
    /// Normal form of each morphism, by index.
    pub words: Vec<AmalgamWord>,
}

/// {nf(αx) : x a vertex or normal form of at most `ext_bound` entries}.
pub fn extensions(am: &Amalgam, a: &AmalgamWord, pool: &[AmalgamWord]) -> HashSet<AmalgamWord> {
    let mut out = HashSet::new();
    out.insert(a.clone());
    for x in pool {
        if am.source(a) == x.range {
            if let Ok(w) = am.concat(a, x).and_then(|w| am.normal_form(&w)) {
                out.insert(w);
            }
        }
    }
    out
}

/// Brute-force cap: the extension sets of α and β by words from `pool`
/// meet.
pub fn brute_force_cap(am: &Amalgam, a: &AmalgamWord, b: &AmalgamWord, pool: &[AmalgamWord]) -> bool {
    let ea = extensions(am, a, pool);
    extensions(am, b, pool).iter().any(|w| ea.contains(w))
}
