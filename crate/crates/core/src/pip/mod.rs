//! Posets with inconsistent pairs.
//!
//! A [`Pip`] stores its order as covering edges plus a cached reflexive-transitive
//! closure, and its inconsistency as the *minimal* pairs only; the full relation `⌣`
//! is always derived.

mod birkhoff;
mod elementary;
mod export;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::kcore::KVector;

pub use birkhoff::{
    check_ideal_isomorphism, closed_set_from_pip, differential, ideal_join, ideal_vector, differentials_from_irreducibles, join_irreducibles, lower_cover_from_irreducibles,
    normalize, pip_from_closed_set, pip_from_irreducibles, Normalization,
};
pub use elementary::{crossing_elements, is_elementary, ElementaryViolation};
pub use export::{pip_from_json, pip_to_dot, pip_to_json};

/// What an element stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    None,
    /// A join-irreducible point of a closed set.
    Vector(KVector),
    /// A strongly connected component of a residual graph.
    Vertices(Vec<usize>),
    /// A component `X` tagged with the label `α` of the layer it came from.
    Layered { label: u8, vertices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub payload: Payload,
    pub part: Option<usize>,
}

impl Element {
    pub fn new(payload: Payload) -> Self {
        Element { payload, part: None }
    }

    pub fn vector(&self) -> Option<&KVector> {
        match &self.payload {
            Payload::Vector(x) => Some(x),
            _ => None,
        }
    }
}

/// First broken axiom found by [`validate_pip`] or [`validate_relation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipViolation {
    /// The order relation contains a directed cycle through this element.
    Cycle(usize),
    /// Index out of range or a pair of identical elements.
    Malformed(String),
    /// An inconsistent pair `{p, q}` with common upper bound `r`.
    CommonUpperBound { p: usize, q: usize, r: usize },
    /// `{p', q'}` lies below `{p, q}` but the latter is not inconsistent.
    NotUpwardClosed { p: usize, q: usize, p_low: usize, q_low: usize },
    /// Two distinct minimal pairs with `{p', q'}` dominated by `{p, q}`.
    NotMinimal { p: usize, q: usize, p_low: usize, q_low: usize },
}

impl fmt::Display for PipViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipViolation::Cycle(e) => write!(f, "order has a cycle through element {e}"),
            PipViolation::Malformed(m) => write!(f, "malformed: {m}"),
            PipViolation::CommonUpperBound { p, q, r } => {
                write!(f, "IC1/MIC1: inconsistent pair {{{p},{q}}} has common upper bound {r}")
            }
            PipViolation::NotUpwardClosed { p, q, p_low, q_low } => {
                write!(f, "IC2: {{{p_low},{q_low}}} is inconsistent but {{{p},{q}}} above it is not")
            }
            PipViolation::NotMinimal { p, q, p_low, q_low } => {
                write!(f, "MIC2: minimal pair {{{p},{q}}} dominates minimal pair {{{p_low},{q_low}}}")
            }
        }
    }
}

/// A poset with minimally inconsistent pairs.
#[derive(Clone, Debug)]
pub struct Pip {
    elements: Vec<Element>,
    covers: Vec<(usize, usize)>,
    min_inconsistent: Vec<(usize, usize)>,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    mic: HashSet<(usize, usize)>,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Pip {
    /// Builds a PIP from order edges `(lo, hi)` (any generating set, not necessarily covers)
    /// and minimal inconsistent pairs. Fails on cycles or bad indices; MIC axioms are checked
    /// separately by [`Pip::validate`].
    pub fn new(elements: Vec<Element>, order: &[(usize, usize)], min_inconsistent: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        for &(a, b) in order.iter().chain(min_inconsistent) {
            if a >= n || b >= n {
                return Err(Error::validation(format!("element index out of range in pair ({a},{b})")));
            }
        }
        for &(a, b) in min_inconsistent {
            if a == b {
                return Err(Error::validation(format!("element {a} cannot be inconsistent with itself")));
            }
        }
        let below = closure(n, order).map_err(|v| Error::validation(v.to_string()))?;
        Ok(Self::assemble(elements, below, min_inconsistent))
    }

    /// Builds a PIP from a reflexive partial order given as a predicate `leq(i, j)`.
    pub fn from_order(elements: Vec<Element>, leq: impl Fn(usize, usize) -> bool, min_inconsistent: &[(usize, usize)]) -> Self {
        let n = elements.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (j, row) in below.iter_mut().enumerate() {
            for i in 0..n {
                if i == j || leq(i, j) {
                    row.insert(i);
                }
            }
        }
        Self::assemble(elements, below, min_inconsistent)
    }

    fn assemble(elements: Vec<Element>, below: Vec<FixedBitSet>, min_inconsistent: &[(usize, usize)]) -> Self {
        let n = elements.len();
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for (j, row) in below.iter().enumerate() {
            for i in row.ones() {
                above[i].insert(j);
            }
        }
        let mut covers = Vec::new();
        for hi in 0..n {
            let mut strict = below[hi].clone();
            strict.set(hi, false);
            let mut covered = FixedBitSet::with_capacity(n);
            for m in strict.ones() {
                let mut under = below[m].clone();
                under.set(m, false);
                covered.union_with(&under);
            }
            for lo in strict.difference(&covered) {
                covers.push((lo, hi));
            }
        }
        covers.sort_unstable();
        let set: BTreeSet<(usize, usize)> = min_inconsistent.iter().map(|&(a, b)| ordered(a, b)).collect();
        let min_inconsistent: Vec<(usize, usize)> = set.into_iter().collect();
        let mic = min_inconsistent.iter().copied().collect();
        Pip { elements, covers, min_inconsistent, below, above, mic }
    }

    pub fn empty() -> Self {
        Pip::from_order(Vec::new(), |_, _| false, &[])
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn set_parts(&mut self, parts: &[usize]) {
        for (e, &p) in self.elements.iter_mut().zip(parts) {
            e.part = Some(p);
        }
    }

    pub fn set_payloads(&mut self, payloads: Vec<Payload>) {
        for (e, p) in self.elements.iter_mut().zip(payloads) {
            e.payload = p;
        }
    }

    /// Covering edges `(lo, hi)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Minimal inconsistent pairs `(a, b)` with `a < b`, sorted.
    pub fn min_inconsistent(&self) -> &[(usize, usize)] {
        &self.min_inconsistent
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// Principal ideal `↓j` (including `j`).
    pub fn down(&self, j: usize) -> &FixedBitSet {
        &self.below[j]
    }

    /// Principal filter `↑i` (including `i`).
    pub fn up(&self, i: usize) -> &FixedBitSet {
        &self.above[i]
    }

    pub fn is_min_inconsistent(&self, a: usize, b: usize) -> bool {
        self.mic.contains(&ordered(a, b))
    }

    /// Partners of `a` under `⌣̇`.
    pub fn mic_partners(&self, a: usize) -> Vec<usize> {
        self.min_inconsistent
            .iter()
            .filter_map(|&(p, q)| if p == a { Some(q) } else if q == a { Some(p) } else { None })
            .collect()
    }

    /// `p ⌣ q`: some minimal pair lies below `{p, q}`.
    pub fn inconsistent(&self, p: usize, q: usize) -> bool {
        self.min_inconsistent.iter().any(|&(a, b)| {
            (self.leq(a, p) && self.leq(b, q)) || (self.leq(a, q) && self.leq(b, p))
        })
    }

    /// A linear extension: every element appears after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.below[i].count_ones(..), i));
        order
    }

    /// Checks acyclicity (already guaranteed by construction) and the MIC axioms.
    pub fn validate(&self) -> std::result::Result<(), PipViolation> {
        for &(p, q) in &self.min_inconsistent {
            if let Some(r) = self.common_upper_bound(p, q) {
                return Err(PipViolation::CommonUpperBound { p, q, r });
            }
        }
        for &(p, q) in &self.min_inconsistent {
            for &(a, b) in &self.min_inconsistent {
                if (a, b) == (p, q) {
                    continue;
                }
                if self.leq(a, p) && self.leq(b, q) {
                    return Err(PipViolation::NotMinimal { p, q, p_low: a, q_low: b });
                }
                if self.leq(b, p) && self.leq(a, q) {
                    return Err(PipViolation::NotMinimal { p, q, p_low: b, q_low: a });
                }
            }
        }
        Ok(())
    }

    fn common_upper_bound(&self, p: usize, q: usize) -> Option<usize> {
        let mut both = self.above[p].clone();
        both.intersect_with(&self.above[q]);
        both.ones().next()
    }

    /// The full relation `⌣` as sorted pairs `(a, b)` with `a < b`.
    pub fn inconsistency_closure(&self) -> Vec<(usize, usize)> {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.min_inconsistent {
            for p in self.above[a].ones() {
                for q in self.above[b].ones() {
                    if p != q {
                        out.insert(ordered(p, q));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Downward closed and free of minimal inconsistent pairs.
    pub fn is_consistent_ideal(&self, ideal: &[usize]) -> bool {
        let mut set = FixedBitSet::with_capacity(self.len());
        for &i in ideal {
            if i >= self.len() {
                return false;
            }
            set.insert(i);
        }
        ideal.iter().all(|&i| self.below[i].is_subset(&set))
            && self.min_inconsistent.iter().all(|&(a, b)| !(set.contains(a) && set.contains(b)))
    }

    /// Connected components of the `⌣̇` graph, singletons included, each sorted;
    /// components are ordered by their smallest element.
    pub fn recovered_parts(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut parts = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = parts.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in self.mic_partners(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            parts.push(members);
        }
        parts
    }

    /// Canonical relabeling: elements sorted by (normalized part, payload), where a part's
    /// normalized id is the rank of its smallest payload. Returns the permutation `new → old`.
    pub fn canonical_order(&self) -> Vec<usize> {
        let parts = self.recovered_parts();
        let mut part_of = vec![0; self.len()];
        for (p, members) in parts.iter().enumerate() {
            for &m in members {
                part_of[m] = p;
            }
        }
        let mut part_keys: Vec<(Payload, usize)> = parts
            .iter()
            .enumerate()
            .map(|(p, members)| (members.iter().map(|&m| self.elements[m].payload.clone()).min().unwrap(), p))
            .collect();
        part_keys.sort();
        let mut rank = vec![0; parts.len()];
        for (r, (_, p)) in part_keys.iter().enumerate() {
            rank[*p] = r;
        }
        let mut perm: Vec<usize> = (0..self.len()).collect();
        perm.sort_by(|&a, &b| {
            (rank[part_of[a]], &self.elements[a].payload, a).cmp(&(rank[part_of[b]], &self.elements[b].payload, b))
        });
        perm
    }

    /// The canonical form: elements renumbered by [`Pip::canonical_order`] and parts set to
    /// their normalized ids.
    pub fn canonical(&self) -> Pip {
        let perm = self.canonical_order();
        let mut inv = vec![0; self.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let parts = self.recovered_parts();
        let mut part_of = vec![0; self.len()];
        for (p, members) in parts.iter().enumerate() {
            for &m in members {
                part_of[m] = p;
            }
        }
        let mut next = 0;
        let mut part_rank = vec![usize::MAX; parts.len()];
        let elements: Vec<Element> = perm
            .iter()
            .map(|&old| {
                let p = part_of[old];
                if part_rank[p] == usize::MAX {
                    part_rank[p] = next;
                    next += 1;
                }
                Element { payload: self.elements[old].payload.clone(), part: Some(part_rank[p]) }
            })
            .collect();
        let order: Vec<(usize, usize)> = self.covers.iter().map(|&(a, b)| (inv[a], inv[b])).collect();
        let mic: Vec<(usize, usize)> = self.min_inconsistent.iter().map(|&(a, b)| (inv[a], inv[b])).collect();
        Pip::new(elements, &order, &mic).expect("relabeling preserves acyclicity")
    }

    /// Replaces every payload by the image of the element's principal ideal.
    pub fn with_ideal_payloads(&self, map: impl Fn(&[usize]) -> KVector) -> Pip {
        let mut out = self.clone();
        for (e, el) in out.elements.iter_mut().enumerate() {
            let ideal: Vec<usize> = self.below[e].ones().collect();
            el.payload = Payload::Vector(map(&ideal));
        }
        out
    }

    /// Structural equality of canonical forms (payloads, order, minimal pairs).
    pub fn same_canonical(&self, other: &Pip) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a.len() == b.len()
            && a.elements.iter().zip(&b.elements).all(|(x, y)| x.payload == y.payload)
            && a.covers == b.covers
            && a.min_inconsistent == b.min_inconsistent
    }
}

fn closure(n: usize, order: &[(usize, usize)]) -> std::result::Result<Vec<FixedBitSet>, PipViolation> {
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(lo, hi) in order {
        if lo == hi {
            continue;
        }
        succ[lo].push(hi);
        indeg[hi] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(v) = queue.pop() {
        topo.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    if topo.len() < n {
        let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap();
        return Err(PipViolation::Cycle(stuck));
    }
    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for &v in &topo {
        below[v].insert(v);
        let row = below[v].clone();
        for &w in &succ[v] {
            below[w].union_with(&row);
        }
    }
    Ok(below)
}

/// Checks a raw structure: acyclic order plus MIC1/MIC2 for the given minimal pairs.
pub fn validate_pip(n: usize, order: &[(usize, usize)], min_inconsistent: &[(usize, usize)]) -> std::result::Result<(), PipViolation> {
    for &(a, b) in order.iter().chain(min_inconsistent) {
        if a >= n || b >= n {
            return Err(PipViolation::Malformed(format!("pair ({a},{b}) out of range")));
        }
    }
    if let Some(&(a, _)) = min_inconsistent.iter().find(|(a, b)| a == b) {
        return Err(PipViolation::Malformed(format!("element {a} paired with itself")));
    }
    let below = closure(n, order)?;
    let elements = vec![Element::new(Payload::None); n];
    Pip::assemble(elements, below, min_inconsistent).validate()
}

/// Checks a full inconsistency relation `⌣` (not just its minimal pairs) against IC1 and IC2.
pub fn validate_relation(n: usize, order: &[(usize, usize)], relation: &[(usize, usize)]) -> std::result::Result<(), PipViolation> {
    let below = closure(n, order)?;
    let leq = |i: usize, j: usize| below[j].contains(i);
    let rel: HashSet<(usize, usize)> = relation.iter().map(|&(a, b)| ordered(a, b)).collect();
    for &(p, q) in &rel {
        if p == q {
            return Err(PipViolation::Malformed(format!("element {p} paired with itself")));
        }
        if let Some(r) = (0..n).find(|&r| leq(p, r) && leq(q, r)) {
            return Err(PipViolation::CommonUpperBound { p, q, r });
        }
    }
    for &(a, b) in &rel {
        for p in 0..n {
            for q in 0..n {
                if p != q && leq(a, p) && leq(b, q) && !rel.contains(&ordered(p, q)) {
                    return Err(PipViolation::NotUpwardClosed { p, q, p_low: a, q_low: b });
                }
            }
        }
    }
    Ok(())
}
