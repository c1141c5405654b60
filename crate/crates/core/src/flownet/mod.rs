//! Exact max flow, residual graphs and the poset of all minimum s–t cuts.

mod json;
mod pq;

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub use json::{network_from_json, network_to_json};
pub use pq::{minimal_min_cut, pq_poset, pq_poset_from_residual, reachable_from, PqPoset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cap: i128,
}

/// A directed network with integer capacities and designated terminals.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    names: Vec<String>,
    arcs: Vec<Arc>,
    pub s: usize,
    pub t: usize,
}

impl FlowNetwork {
    pub fn new(n: usize, s: usize, t: usize) -> Result<Self> {
        Self::with_names((0..n).map(|i| i.to_string()).collect(), s, t)
    }

    pub fn with_names(names: Vec<String>, s: usize, t: usize) -> Result<Self> {
        if s >= names.len() || t >= names.len() || s == t {
            return Err(Error::validation("source and sink must be distinct vertices"));
        }
        Ok(FlowNetwork { names, arcs: Vec::new(), s, t })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i128) -> Result<usize> {
        if from >= self.names.len() || to >= self.names.len() {
            return Err(Error::validation(format!("arc ({from},{to}) has an unknown endpoint")));
        }
        if cap < 0 {
            return Err(Error::validation(format!("arc ({from},{to}) has negative capacity")));
        }
        self.arcs.push(Arc { from, to, cap });
        Ok(self.arcs.len() - 1)
    }

    /// An undirected edge as two opposite arcs of the same capacity; returns both ids.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: i128) -> Result<(usize, usize)> {
        Ok((self.add_arc(u, v, cap)?, self.add_arc(v, u, cap)?))
    }

    pub fn set_cap(&mut self, arc: usize, cap: i128) {
        self.arcs[arc].cap = cap;
    }

    /// Total capacity of arcs leaving `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> i128 {
        self.arcs.iter().filter(|a| side[a.from] && !side[a.to]).map(|a| a.cap).sum()
    }
}

/// Arc flows of a feasible flow and its value out of `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub value: i128,
    pub arc_flow: Vec<i128>,
}

/// Dinic's algorithm on a fixed arc order; state persists so flows can be augmented
/// in phases with different terminals or capacities.
pub struct Dinic {
    n: usize,
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i128>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(net: &FlowNetwork) -> Self {
        let n = net.vertex_count();
        let mut d = Dinic {
            n,
            head: vec![Vec::new(); n],
            to: Vec::with_capacity(net.arcs.len() * 2),
            cap: Vec::with_capacity(net.arcs.len() * 2),
            level: vec![0; n],
            iter: vec![0; n],
        };
        for a in &net.arcs {
            d.head[a.from].push(d.to.len());
            d.to.push(a.to);
            d.cap.push(a.cap);
            d.head[a.to].push(d.to.len());
            d.to.push(a.from);
            d.cap.push(0);
        }
        d
    }

    /// Current flow on arc `a` (the reverse residual capacity).
    pub fn flow(&self, a: usize) -> i128 {
        self.cap[2 * a + 1]
    }

    pub fn arc_flows(&self) -> Vec<i128> {
        (0..self.to.len() / 2).map(|a| self.flow(a)).collect()
    }

    /// Changes the capacity of arc `a`; the current flow must not exceed it.
    pub fn set_cap(&mut self, a: usize, cap: i128) {
        let f = self.flow(a);
        assert!(f <= cap, "capacity below current flow");
        self.cap[2 * a] = cap - f;
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &e in &self.head[v] {
                let w = self.to[e];
                if self.cap[e] > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[v] + 1;
                    q.push_back(w);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, limit: i128) -> i128 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.head[v].len() {
            let e = self.head[v][self.iter[v]];
            let w = self.to[e];
            if self.cap[e] > 0 && self.level[w] == self.level[v] + 1 {
                let d = self.dfs(w, t, limit.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    /// Augments from `s` to `t` until no path remains; returns the added value.
    pub fn run(&mut self, s: usize, t: usize) -> i128 {
        let mut total = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let d = self.dfs(s, t, i128::MAX);
                if d == 0 {
                    break;
                }
                total += d;
            }
        }
        total
    }

    /// Vertices reachable from `s` along arcs with positive residual capacity.
    pub fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &e in &self.head[v] {
                let w = self.to[e];
                if self.cap[e] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// A maximum `s`–`t` flow.
pub fn max_flow(net: &FlowNetwork) -> Flow {
    let mut d = Dinic::new(net);
    let value = d.run(net.s, net.t);
    Flow { value, arc_flow: d.arc_flows() }
}

/// Residual arcs as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualGraph {
    pub adj: Vec<Vec<usize>>,
}

impl ResidualGraph {
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }
}

/// The residual graph of a feasible flow: unsaturated arcs forward, arcs carrying flow
/// backward. Infeasible flows are rejected.
pub fn residual(net: &FlowNetwork, flow: &[i128]) -> Result<ResidualGraph> {
    if flow.len() != net.arcs.len() {
        return Err(Error::validation("flow length differs from the number of arcs"));
    }
    let n = net.vertex_count();
    let mut excess = vec![0i128; n];
    for (a, &f) in net.arcs.iter().zip(flow) {
        if f < 0 || f > a.cap {
            return Err(Error::validation(format!("flow {f} on arc ({},{}) violates its capacity", a.from, a.to)));
        }
        excess[a.from] -= f;
        excess[a.to] += f;
    }
    if let Some(v) = (0..n).find(|&v| v != net.s && v != net.t && excess[v] != 0) {
        return Err(Error::validation(format!("flow is not conserved at vertex {v}")));
    }
    let mut adj = vec![Vec::new(); n];
    for (a, &f) in net.arcs.iter().zip(flow) {
        if f < a.cap {
            adj[a.from].push(a.to);
        }
        if f > 0 {
            adj[a.to].push(a.from);
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    Ok(ResidualGraph { adj })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let mut n = FlowNetwork::new(2, 0, 1).unwrap();
        n.add_arc(0, 1, 5).unwrap();
        assert_eq!(max_flow(&n).value, 5);
        let g = residual(&n, &[5]).unwrap();
        assert!(!g.has_arc(0, 1) && g.has_arc(1, 0));
        let g = residual(&n, &[0]).unwrap();
        assert!(g.has_arc(0, 1) && !g.has_arc(1, 0));
    }

    #[test]
    fn zero_capacity() {
        let mut n = FlowNetwork::new(3, 0, 2).unwrap();
        n.add_arc(0, 1, 0).unwrap();
        n.add_arc(1, 2, 4).unwrap();
        assert_eq!(max_flow(&n).value, 0);
    }

    #[test]
    fn infeasible_flow_is_rejected() {
        let mut n = FlowNetwork::new(3, 0, 2).unwrap();
        n.add_arc(0, 1, 3).unwrap();
        n.add_arc(1, 2, 3).unwrap();
        assert!(residual(&n, &[4, 4]).is_err());
        assert!(residual(&n, &[2, 1]).is_err());
    }

    #[test]
    fn capacity_changes_between_phases() {
        let mut n = FlowNetwork::new(3, 0, 2).unwrap();
        let a = n.add_arc(0, 1, 2).unwrap();
        n.add_arc(1, 2, 10).unwrap();
        let mut d = Dinic::new(&n);
        assert_eq!(d.run(0, 2), 2);
        d.set_cap(a, 7);
        assert_eq!(d.run(0, 2), 5);
        assert_eq!(d.arc_flows(), vec![7, 7]);
    }
}
