use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::pip::Pip;

use super::poset_ideals;

const MAX_FRONTIER: usize = 30;

/// An ideal count as a product of per-component counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredCount {
    pub total: BigUint,
    /// `(component count, number of components with that count)`, ascending by count.
    pub factors: Vec<(BigUint, usize)>,
}

impl fmt::Display for FactoredCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|(c, m)| if *m == 1 { c.to_string() } else { format!("{c}^{m}") }).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

impl FactoredCount {
    /// Multiplies in one more independent component with `c` choices.
    pub fn multiply(&mut self, c: BigUint) {
        if c == BigUint::from(1u8) {
            return;
        }
        self.total *= &c;
        match self.factors.binary_search_by(|f| f.0.cmp(&c)) {
            Ok(i) => self.factors[i].1 += 1,
            Err(i) => self.factors.insert(i, (c, 1)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "total": self.total.to_string(),
            "factors": self.factors.iter().map(|(c, m)| serde_json::json!({"count": c.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
            "factored": self.to_string(),
        })
    }
}

fn components(p: &Pip) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in p.covers() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Frontier dynamic program over a linear extension; `None` if the frontier gets too wide.
fn count_component_dp(p: &Pip, comp: &[usize]) -> Option<BigUint> {
    let order: Vec<usize> = {
        let mut o = comp.to_vec();
        o.sort_by_key(|&i| (p.down(i).count_ones(..), i));
        o
    };
    let mut pos = HashMap::new();
    for (t, &e) in order.iter().enumerate() {
        pos.insert(e, t);
    }
    let lower: HashMap<usize, Vec<usize>> =
        order.iter().map(|&e| (e, p.covers().iter().filter(|c| c.1 == e).map(|c| c.0).collect())).collect();
    let last_use: HashMap<usize, usize> = order
        .iter()
        .map(|&e| {
            let t = p.covers().iter().filter(|c| c.0 == e).map(|c| pos[&c.1]).max().unwrap_or(pos[&e]);
            (e, t)
        })
        .collect();
    let mut slot_of: HashMap<usize, usize> = HashMap::new();
    let mut free: Vec<usize> = (0..MAX_FRONTIER).rev().collect();
    let mut states: HashMap<u32, BigUint> = HashMap::from([(0, BigUint::one())]);
    for (t, &e) in order.iter().enumerate() {
        let slot = free.pop()?;
        slot_of.insert(e, slot);
        let need: u32 = lower[&e].iter().map(|l| 1u32 << slot_of[l]).fold(0, |a, b| a | b);
        let mut next: HashMap<u32, BigUint> = HashMap::with_capacity(states.len() * 2);
        for (s, c) in states {
            if s & need == need {
                *next.entry(s | (1 << slot)).or_default() += &c;
            }
            *next.entry(s).or_default() += c;
        }
        let mut clear = 0u32;
        for &d in order[..=t].iter().filter(|d| last_use[d] == t) {
            let sl = slot_of.remove(&d).expect("live slot");
            clear |= 1 << sl;
            free.push(sl);
        }
        states = if clear == 0 {
            next
        } else {
            let mut merged: HashMap<u32, BigUint> = HashMap::with_capacity(next.len());
            for (s, c) in next {
                *merged.entry(s & !clear).or_default() += c;
            }
            merged
        };
    }
    Some(states.into_values().sum())
}

fn count_component_enum(p: &Pip, comp: &[usize]) -> BigUint {
    let idx: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let order: Vec<(usize, usize)> =
        p.covers().iter().filter(|c| idx.contains_key(&c.0)).map(|c| (idx[&c.0], idx[&c.1])).collect();
    let sub = Pip::new(vec![crate::pip::Element::new(crate::pip::Payload::None); comp.len()], &order, &[])
        .expect("sub-poset of a poset");
    BigUint::from(poset_ideals(&sub).count())
}

/// Number of order ideals of the poset underlying `p`, factored over connected components.
pub fn count_poset_ideals(p: &Pip) -> FactoredCount {
    let comps = components(p);
    let counts: Vec<BigUint> = comps
        .par_iter()
        .map(|c| count_component_dp(p, c).unwrap_or_else(|| count_component_enum(p, c)))
        .collect();
    let mut grouped: BTreeMap<BigUint, usize> = BTreeMap::new();
    for c in &counts {
        *grouped.entry(c.clone()).or_default() += 1;
    }
    FactoredCount { total: counts.into_iter().product(), factors: grouped.into_iter().collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pip::{Element, Payload};

    fn build(n: usize, order: &[(usize, usize)]) -> Pip {
        Pip::new(vec![Element::new(Payload::None); n], order, &[]).unwrap()
    }

    #[test]
    fn empty_count_is_one() {
        let c = count_poset_ideals(&build(0, &[]));
        assert_eq!(c.total, BigUint::one());
        assert_eq!(c.to_string(), "1");
    }

    #[test]
    fn isolated_points_give_power_of_two() {
        let c = count_poset_ideals(&build(66, &[]));
        assert_eq!(c.total, BigUint::from(2u8).pow(66));
        assert_eq!(c.to_string(), "2^66");
    }

    #[test]
    fn dp_matches_enumeration_on_a_diamond() {
        let p = build(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (4, 3)]);
        assert_eq!(count_poset_ideals(&p).total, BigUint::from(poset_ideals(&p).count()));
    }
}
