//! Network-representable functions: legal cuts, the map `ψ`, and PIP extraction from a
//! maximum-flow residual graph.

mod fixtures;
mod rules;

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::flownet::{network_from_json, network_to_json, FlowNetwork};
use crate::kcore::{all_points, parse_rat, value::rat_to_string, KVector, Rat, TableFunction, Value};

pub use fixtures::{fixture_corpus, potts_style_network, Fixture};
pub use rules::{apply_exclusion_rules, exclusion_rules_direct, pip_from_network, NetworkPip};

/// A flow network whose non-terminal vertices are `v_i^α`, plus a constant offset `K`.
#[derive(Clone, Debug)]
pub struct GroupedNetwork {
    pub net: FlowNetwork,
    n: usize,
    k: u8,
    /// `groups[i][α - 1]` is the vertex `v_i^α`.
    groups: Vec<Vec<usize>>,
    group_of: Vec<Option<(usize, u8)>>,
    pub offset: Rat,
}

impl GroupedNetwork {
    /// Creates `s = 0`, `t = 1` and `v_i^α = 2 + i·k + (α - 1)` with no arcs.
    pub fn empty(n: usize, k: u8, offset: Rat) -> Self {
        let mut names = vec!["s".to_string(), "t".to_string()];
        let mut groups = Vec::with_capacity(n);
        for i in 0..n {
            let mut g = Vec::with_capacity(k as usize);
            for a in 1..=k {
                g.push(names.len());
                names.push(format!("v{}_{a}", i + 1));
            }
            groups.push(g);
        }
        let net = FlowNetwork::with_names(names, 0, 1).expect("distinct terminals");
        Self::from_parts(net, groups, offset).expect("well-formed groups")
    }

    pub fn from_parts(net: FlowNetwork, groups: Vec<Vec<usize>>, offset: Rat) -> Result<Self> {
        let n = groups.len();
        let k = groups.first().map_or(1, Vec::len);
        if k == 0 || k > u8::MAX as usize || groups.iter().any(|g| g.len() != k) {
            return Err(Error::validation("every group must have the same positive size k"));
        }
        let mut group_of = vec![None; net.vertex_count()];
        for (i, g) in groups.iter().enumerate() {
            for (a, &v) in g.iter().enumerate() {
                if v >= net.vertex_count() || v == net.s || v == net.t || group_of[v].is_some() {
                    return Err(Error::validation(format!("vertex {v} cannot be placed in group {}", i + 1)));
                }
                group_of[v] = Some((i, a as u8 + 1));
            }
        }
        if let Some(v) = (0..net.vertex_count()).find(|&v| v != net.s && v != net.t && group_of[v].is_none()) {
            return Err(Error::validation(format!("vertex {} belongs to no group", net.names()[v])));
        }
        Ok(GroupedNetwork { net, n, k: k as u8, groups, group_of, offset })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn vertex(&self, i: usize, alpha: u8) -> usize {
        self.groups[i][alpha as usize - 1]
    }

    pub fn group_of(&self, v: usize) -> Option<(usize, u8)> {
        self.group_of[v]
    }

    /// `ψ(x) = {s} ∪ {v_i^{x_i} : i ∈ supp x}`, sorted.
    pub fn psi(&self, x: &KVector) -> Vec<usize> {
        let mut out = vec![self.net.s];
        out.extend(x.support().into_iter().map(|i| self.vertex(i, x.get(i))));
        out.sort_unstable();
        out
    }

    pub fn psi_inverse(&self, cut: &[usize]) -> Result<KVector> {
        if !cut.contains(&self.net.s) || cut.contains(&self.net.t) {
            return Err(Error::validation("not an s–t cut"));
        }
        let mut labels = vec![0u8; self.n];
        for &v in cut {
            if let Some((i, a)) = self.group_of.get(v).copied().flatten() {
                if labels[i] != 0 {
                    return Err(Error::validation(format!("cut meets group {} twice", i + 1)));
                }
                labels[i] = a;
            }
        }
        KVector::new(self.k, labels)
    }

    /// Drops every group met at least twice.
    pub fn legalize(&self, cut: &[usize]) -> Result<Vec<usize>> {
        if !cut.contains(&self.net.s) || cut.contains(&self.net.t) {
            return Err(Error::validation("not an s–t cut"));
        }
        let mut hits = vec![0usize; self.n];
        for &v in cut {
            if let Some((i, _)) = self.group_of[v] {
                hits[i] += 1;
            }
        }
        let mut out: Vec<usize> =
            cut.iter().copied().filter(|&v| self.group_of[v].is_none_or(|(i, _)| hits[i] < 2)).collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn cut_capacity(&self, cut: &[usize]) -> i128 {
        let mut side = vec![false; self.net.vertex_count()];
        for &v in cut {
            side[v] = true;
        }
        self.net.cut_capacity(&side)
    }

    /// The function this network represents: `f(x) = c(ψ(x)) + K`.
    pub fn represented_table(&self) -> TableFunction {
        TableFunction::from_fn(self.n, self.k, |x| Value::Finite(Rat::from_integer(self.cut_capacity(&self.psi(x))) + self.offset))
            .expect("finite values")
    }

    pub fn to_json(&self) -> Json {
        let mut v = network_to_json(&self.net);
        let names = self.net.names();
        let groups: BTreeMap<String, Vec<&String>> =
            self.groups.iter().enumerate().map(|(i, g)| ((i + 1).to_string(), g.iter().map(|&v| &names[v]).collect())).collect();
        v["groups"] = json!(groups);
        v["K"] = if *self.offset.denom() == 1 && self.offset.numer().unsigned_abs() < (1u128 << 53) {
            json!(*self.offset.numer() as i64)
        } else {
            json!(rat_to_string(&self.offset))
        };
        v
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let (net, index): (FlowNetwork, HashMap<String, usize>) = network_from_json(v)?;
        let raw = v.get("groups").and_then(Json::as_object).ok_or_else(|| Error::parse("missing object 'groups'"))?;
        let mut keyed: Vec<(usize, Vec<usize>)> = Vec::new();
        for (key, members) in raw {
            let i: usize = key.parse().map_err(|_| Error::parse(format!("group key {key:?} must be a number")))?;
            let members = members
                .as_array()
                .ok_or_else(|| Error::parse("group members must be an array"))?
                .iter()
                .map(|m| {
                    let name = m.as_str().map(str::to_string).unwrap_or_else(|| m.to_string());
                    index.get(&name).copied().ok_or_else(|| Error::parse(format!("unknown vertex {name:?} in group {key}")))
                })
                .collect::<Result<Vec<usize>>>()?;
            keyed.push((i, members));
        }
        keyed.sort();
        if keyed.iter().enumerate().any(|(pos, (i, _))| *i != pos + 1) {
            return Err(Error::parse("group keys must be 1..n"));
        }
        let offset = match v.get("K") {
            None => Rat::from_integer(0),
            Some(Json::String(s)) => parse_rat(s)?,
            Some(Json::Number(n)) => parse_rat(&n.to_string())?,
            Some(_) => return Err(Error::parse("K must be a number")),
        };
        Self::from_parts(net, keyed.into_iter().map(|(_, g)| g).collect(), offset)
    }
}

/// Outcome of checking NR1 and NR2 against a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepresentationError {
    /// `f(x) ≠ c(ψ(x)) + K`.
    Nr1 { x: KVector },
    /// `c(X↓) > c(X)` for this cut.
    Nr2 { cut: Vec<usize> },
    Shape,
}

/// Exhaustive NR1 over `S_k^n` and NR2 over all `2^{|V|-2}` cuts.
pub fn verify_representation(g: &GroupedNetwork, f: &TableFunction) -> std::result::Result<(), RepresentationError> {
    if f.n() != g.n || f.k() != g.k {
        return Err(RepresentationError::Shape);
    }
    for x in all_points(g.n, g.k) {
        let want = Value::Finite(Rat::from_integer(g.cut_capacity(&g.psi(&x))) + g.offset);
        if f.eval(&x) != want {
            return Err(RepresentationError::Nr1 { x });
        }
    }
    let inner: Vec<usize> = (0..g.net.vertex_count()).filter(|&v| v != g.net.s && v != g.net.t).collect();
    assert!(inner.len() < 31, "NR2 check is exhaustive over subsets");
    for mask in 0u32..(1 << inner.len()) {
        let mut cut = vec![g.net.s];
        cut.extend(inner.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v));
        let legal = g.legalize(&cut).expect("valid cut");
        if g.cut_capacity(&legal) > g.cut_capacity(&cut) {
            cut.sort_unstable();
            return Err(RepresentationError::Nr2 { cut });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_of_five_variable_point() {
        let g = GroupedNetwork::empty(5, 3, Rat::from_integer(0));
        let x = KVector::from_digits(3, "10321").unwrap();
        let cut = g.psi(&x);
        let names: Vec<&str> = cut.iter().map(|&v| g.net.names()[v].as_str()).collect();
        assert_eq!(names, vec!["s", "v1_1", "v3_3", "v4_2", "v5_1"]);
        assert_eq!(g.psi_inverse(&cut).unwrap(), x);
        assert_eq!(g.psi(&KVector::zeros(5, 3)), vec![0]);
    }

    #[test]
    fn legalize_drops_doubly_hit_groups() {
        let g = GroupedNetwork::empty(2, 2, Rat::from_integer(0));
        let legal = vec![0, g.vertex(0, 1)];
        assert_eq!(g.legalize(&legal).unwrap(), legal);
        let cut = vec![0, g.vertex(0, 1), g.vertex(0, 2), g.vertex(1, 2)];
        assert_eq!(g.legalize(&cut).unwrap(), vec![0, g.vertex(1, 2)]);
        assert!(g.legalize(&[1]).is_err());
        assert!(g.psi_inverse(&cut).is_err());
    }

    #[test]
    fn empty_network_represents_a_constant() {
        let g = GroupedNetwork::empty(2, 2, Rat::from_integer(7));
        let f = TableFunction::from_fn(2, 2, |_| Value::int(7)).unwrap();
        assert_eq!(verify_representation(&g, &f), Ok(()));
    }

    #[test]
    fn undersized_escape_edge_breaks_nr2() {
        // Choosing either label alone is cheap, but a cut holding both avoids a heavy arc.
        let mut g = GroupedNetwork::empty(1, 2, Rat::from_integer(0));
        let (a, b) = (g.vertex(0, 1), g.vertex(0, 2));
        g.net.add_arc(0, a, 5).unwrap();
        g.net.add_arc(0, b, 5).unwrap();
        g.net.add_arc(a, 1, 1).unwrap();
        g.net.add_arc(b, 1, 1).unwrap();
        let f = g.represented_table();
        assert!(matches!(verify_representation(&g, &f), Err(RepresentationError::Nr2 { .. })));
    }

    #[test]
    fn json_round_trip() {
        let g = potts_style_network(2, 2, &[(0, 1, 3)], &[vec![1, 2], vec![0, 4]], &[vec![2, 2], vec![1, 5]]);
        let v = g.to_json();
        let h = GroupedNetwork::from_json(&v).unwrap();
        assert_eq!(h.to_json(), v);
        assert_eq!(h.represented_table(), g.represented_table());
    }
}
