use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::pip::{Element, Payload, Pip};

use super::{max_flow, residual, FlowNetwork, ResidualGraph};

/// The poset of strongly connected components whose ideals are exactly the minimum cuts.
#[derive(Clone, Debug)]
pub struct PqPoset {
    /// Every SCC of the residual graph, in reverse topological order.
    pub sccs: Vec<Vec<usize>>,
    /// SCC id of each vertex.
    pub comp_of: Vec<usize>,
    /// For each SCC, the SCC ids it reaches (itself included).
    pub reach: Vec<FixedBitSet>,
    /// Vertices reachable from the source.
    pub x0: Vec<usize>,
    /// SCC ids kept as poset elements, ascending.
    pub kept: Vec<usize>,
    /// Elements carry their vertex sets; `X ≤ Y` iff `X` is reachable from `Y`.
    pub poset: Pip,
}

impl PqPoset {
    /// `τ(I)`: the source side plus the vertex sets of the ideal, sorted.
    pub fn tau(&self, ideal: &[usize]) -> Vec<usize> {
        let mut out = self.x0.clone();
        for &e in ideal {
            out.extend_from_slice(&self.sccs[self.kept[e]]);
        }
        out.sort_unstable();
        out
    }
}

/// Vertices reachable from `s` in `g`.
pub fn reachable_from(g: &ResidualGraph, s: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        for &w in &g.adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// SCCs (reverse topological order), the vertex-to-SCC map and SCC reachability.
pub(crate) fn condensation(g: &ResidualGraph) -> (Vec<Vec<usize>>, Vec<usize>, Vec<FixedBitSet>) {
    let n = g.vertex_count();
    let mut dg = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| dg.add_node(())).collect();
    for (u, row) in g.adj.iter().enumerate() {
        for &v in row {
            dg.add_edge(nodes[u], nodes[v], ());
        }
    }
    let mut sccs: Vec<Vec<usize>> =
        tarjan_scc(&dg).into_iter().map(|c| c.into_iter().map(|x| x.index()).collect()).collect();
    for c in &mut sccs {
        c.sort_unstable();
    }
    let mut comp_of = vec![0; n];
    for (i, c) in sccs.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let m = sccs.len();
    let mut reach = vec![FixedBitSet::with_capacity(m); m];
    for i in 0..m {
        reach[i].insert(i);
        for &v in &sccs[i] {
            for &w in &g.adj[v] {
                let j = comp_of[w];
                if j != i {
                    debug_assert!(j < i, "tarjan order is reverse topological");
                    let (lo, hi) = reach.split_at_mut(i);
                    hi[0].union_with(&lo[j]);
                }
            }
        }
    }
    (sccs, comp_of, reach)
}

/// Builds the poset from a residual graph of a maximum flow.
pub fn pq_poset_from_residual(g: &ResidualGraph, s: usize, t: usize) -> PqPoset {
    let (sccs, comp_of, reach) = condensation(g);
    let from_s = reachable_from(g, s);
    let x0: Vec<usize> = (0..g.vertex_count()).filter(|&v| from_s[v]).collect();
    let ct = comp_of[t];
    let kept: Vec<usize> =
        (0..sccs.len()).filter(|&c| !from_s[sccs[c][0]] && !reach[c].contains(ct)).collect();
    let poset = scc_poset(&sccs, &reach, &kept);
    PqPoset { sccs, comp_of, reach, x0, kept, poset }
}

/// Poset on the `kept` SCCs ordered by reverse reachability, payloads are vertex sets.
pub(crate) fn scc_poset(sccs: &[Vec<usize>], reach: &[FixedBitSet], kept: &[usize]) -> Pip {
    let elements = kept.iter().map(|&c| Element::new(Payload::Vertices(sccs[c].clone()))).collect();
    Pip::from_order(elements, |a, b| reach[kept[b]].contains(kept[a]), &[])
}

/// Computes a maximum flow and the poset of minimum cuts.
pub fn pq_poset(net: &FlowNetwork) -> PqPoset {
    let flow = max_flow(net);
    let g = residual(net, &flow.arc_flow).expect("max flow is feasible");
    pq_poset_from_residual(&g, net.s, net.t)
}

/// The inclusion-minimal minimum cut: vertices reachable from `s` after a maximum flow.
pub fn minimal_min_cut(net: &FlowNetwork) -> Vec<usize> {
    let mut d = super::Dinic::new(net);
    d.run(net.s, net.t);
    let seen = d.reachable(net.s);
    (0..net.vertex_count()).filter(|&v| seen[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::poset_ideals;

    #[test]
    fn unique_cut_has_empty_poset() {
        let mut n = FlowNetwork::new(3, 0, 2).unwrap();
        n.add_arc(0, 1, 1).unwrap();
        n.add_arc(1, 2, 5).unwrap();
        let p = pq_poset(&n);
        assert!(p.poset.is_empty());
        assert_eq!(p.tau(&[]), vec![0]);
        assert_eq!(minimal_min_cut(&n), vec![0]);
    }

    #[test]
    fn equal_series_arcs_give_two_cuts() {
        let mut n = FlowNetwork::new(3, 0, 2).unwrap();
        n.add_arc(0, 1, 3).unwrap();
        n.add_arc(1, 2, 3).unwrap();
        let p = pq_poset(&n);
        assert_eq!(p.poset.len(), 1);
        let cuts: Vec<Vec<usize>> = poset_ideals(&p.poset).map(|i| p.tau(&i)).collect();
        assert_eq!(cuts, vec![vec![0], vec![0, 1]]);
    }
}
