use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::flownet::{max_flow, pq_poset_from_residual, residual, PqPoset, ResidualGraph};
use crate::kcore::KVector;
use crate::pip::Pip;

use super::GroupedNetwork;

/// Group indices met by each SCC, with multiplicity.
fn group_hits(g: &GroupedNetwork, sccs: &[Vec<usize>]) -> Vec<BTreeMap<usize, Vec<usize>>> {
    sccs.iter()
        .map(|c| {
            let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &v in c {
                if let Some((i, _)) = g.group_of(v) {
                    m.entry(i).or_default().push(v);
                }
            }
            m
        })
        .collect()
}

fn scc_successors(res: &ResidualGraph, pq: &PqPoset) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); pq.sccs.len()];
    for (c, members) in pq.sccs.iter().enumerate() {
        for &v in members {
            for &w in &res.adj[v] {
                let d = pq.comp_of[w];
                if d != c {
                    out[c].push(d);
                }
            }
        }
        out[c].sort_unstable();
        out[c].dedup();
    }
    out
}

fn base_exclusions(g: &GroupedNetwork, pq: &PqPoset, hits: &[BTreeMap<usize, Vec<usize>>]) -> Vec<bool> {
    let m = pq.sccs.len();
    let mut in_x0 = vec![false; g.net.vertex_count()];
    for &v in &pq.x0 {
        in_x0[v] = true;
    }
    let ct = pq.comp_of[g.net.t];
    let mut bad = FixedBitSet::with_capacity(m);
    for (c, h) in hits.iter().enumerate() {
        if h.values().any(|vs| vs.len() >= 2) {
            bad.insert(c);
        }
    }
    (0..m)
        .map(|c| in_x0[pq.sccs[c][0]] || pq.reach[c].contains(ct) || !pq.reach[c].is_disjoint(&bad))
        .collect()
}

/// Exclusion rules (1)–(3) directly, then rule (4) by accumulating the group hits
/// reachable from each SCC in reverse topological order. Returns kept SCC ids, ascending.
pub fn apply_exclusion_rules(g: &GroupedNetwork, res: &ResidualGraph, pq: &PqPoset) -> Vec<usize> {
    let hits = group_hits(g, &pq.sccs);
    let mut removed = base_exclusions(g, pq, &hits);
    let succ = scc_successors(res, pq);
    let m = pq.sccs.len();
    let mut u: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); m];
    for x in 0..m {
        if removed[x] {
            continue;
        }
        let mut ux: BTreeMap<usize, usize> = hits[x].iter().map(|(&i, vs)| (i, vs[0])).collect();
        let mut clash = false;
        for &y in succ[x].iter().filter(|&&y| !removed[y]) {
            for (&i, &v) in &u[y] {
                if *ux.entry(i).or_insert(v) != v {
                    clash = true;
                }
            }
            if clash {
                break;
            }
        }
        if clash {
            for z in 0..m {
                if pq.reach[z].contains(x) {
                    removed[z] = true;
                }
            }
        } else {
            u[x] = ux;
        }
    }
    (0..m).filter(|&c| !removed[c]).collect()
}

/// Rules (1)–(4) checked literally by pairwise reachability, with rule (4) ranging over
/// the minimum-cut poset elements.
pub fn exclusion_rules_direct(g: &GroupedNetwork, pq: &PqPoset) -> Vec<usize> {
    let hits = group_hits(g, &pq.sccs);
    let removed = base_exclusions(g, pq, &hits);
    let once = |c: usize, i: usize| hits[c].get(&i).is_some_and(|vs| vs.len() == 1);
    let candidates = &pq.kept;
    (0..pq.sccs.len())
        .filter(|&c| !removed[c])
        .filter(|&c| {
            !candidates.iter().any(|&x| {
                pq.reach[c].contains(x)
                    && candidates.iter().any(|&y| {
                        y != x && pq.reach[c].contains(y) && hits[x].keys().any(|&i| once(x, i) && once(y, i))
                    })
            })
        })
        .collect()
}

/// The PIP of a network-represented function together with the flow data behind it.
#[derive(Clone, Debug)]
pub struct NetworkPip {
    /// Elements are the surviving SCCs (payload: vertex sets).
    pub pip: Pip,
    pub pq: PqPoset,
    /// SCC id of each PIP element.
    pub sigma: Vec<usize>,
}

impl NetworkPip {
    /// `τ(I)` restricted to the surviving elements.
    pub fn tau(&self, ideal: &[usize]) -> Vec<usize> {
        let mut out = self.pq.x0.clone();
        for &e in ideal {
            out.extend_from_slice(&self.pq.sccs[self.sigma[e]]);
        }
        out.sort_unstable();
        out
    }

    /// `ψ^{-1} ∘ τ`.
    pub fn minimizer(&self, g: &GroupedNetwork, ideal: &[usize]) -> crate::Result<KVector> {
        g.psi_inverse(&self.tau(ideal))
    }
}

/// Max flow, residual, the exclusion rules, then the order by reverse reachability and minimal
/// pairs of SCCs meeting a common group.
pub fn pip_from_network(g: &GroupedNetwork) -> NetworkPip {
    let flow = max_flow(&g.net);
    let res = residual(&g.net, &flow.arc_flow).expect("max flow is feasible");
    let pq = pq_poset_from_residual(&res, g.net.s, g.net.t);
    let sigma = apply_exclusion_rules(g, &res, &pq);
    let hits = group_hits(g, &pq.sccs);
    let t = sigma.len();
    let leq = |a: usize, b: usize| pq.reach[sigma[b]].contains(sigma[a]);
    let mut base = Vec::new();
    for a in 0..t {
        for b in a + 1..t {
            if hits[sigma[a]].keys().any(|i| hits[sigma[b]].contains_key(i)) {
                base.push((a, b));
            }
        }
    }
    let dominated = |&(p, q): &(usize, usize)| {
        base.iter().any(|&(a, b)| (a, b) != (p, q) && ((leq(a, p) && leq(b, q)) || (leq(b, p) && leq(a, q))))
    };
    let mic: Vec<(usize, usize)> = base.iter().copied().filter(|pair| !dominated(pair)).collect();
    let elements = sigma
        .iter()
        .map(|&c| crate::pip::Element::new(crate::pip::Payload::Vertices(pq.sccs[c].clone())))
        .collect();
    let mut pip = Pip::from_order(elements, leq, &mic);
    let parts = pip.recovered_parts();
    let mut part_of = vec![0; t];
    for (p, members) in parts.iter().enumerate() {
        for &e in members {
            part_of[e] = p;
        }
    }
    pip.set_parts(&part_of);
    NetworkPip { pip, pq, sigma }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::consistent_ideals;
    use crate::kcore::Rat;

    #[test]
    fn single_variable_with_two_tied_labels() {
        let mut g = GroupedNetwork::empty(1, 2, Rat::from_integer(0));
        let (a, b) = (g.vertex(0, 1), g.vertex(0, 2));
        for v in [a, b] {
            g.net.add_arc(0, v, 1).unwrap();
            g.net.add_arc(v, 1, 1).unwrap();
        }
        let np = pip_from_network(&g);
        assert_eq!(np.pip.len(), 2);
        assert_eq!(np.pip.min_inconsistent(), &[(0, 1)]);
        let mins: Vec<String> = consistent_ideals(&np.pip).map(|i| np.minimizer(&g, &i).unwrap().to_string()).collect();
        assert_eq!(mins.len(), 3);
    }

    #[test]
    fn unique_minimizer_gives_empty_pip() {
        let mut g = GroupedNetwork::empty(2, 2, Rat::from_integer(0));
        for i in 0..2 {
            for a in 1..=2 {
                let v = g.vertex(i, a);
                g.net.add_arc(v, 1, 1).unwrap();
            }
        }
        assert!(pip_from_network(&g).pip.is_empty());
    }

    #[test]
    fn scc_with_two_group_vertices_is_removed() {
        // v1_1 and v1_2 tied together into one SCC that is not fixed by the flow.
        let mut g = GroupedNetwork::empty(1, 2, Rat::from_integer(0));
        let (a, b) = (g.vertex(0, 1), g.vertex(0, 2));
        g.net.add_edge(a, b, 4).unwrap();
        let flow = max_flow(&g.net);
        let res = residual(&g.net, &flow.arc_flow).unwrap();
        let pq = pq_poset_from_residual(&res, 0, 1);
        assert_eq!(pq.kept.len(), 1);
        assert!(apply_exclusion_rules(&g, &res, &pq).is_empty());
        assert!(exclusion_rules_direct(&g, &pq).is_empty());
    }
}
