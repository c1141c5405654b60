//! Locking multiflows by divide and conquer over the terminal set.
//!
//! A multiflow is kept as weighted paths. Each path joins two terminals, or a terminal
//! `s_α` and one of the α-fringes. Amounts are in scaled capacity units and may be
//! quarter-integral after the three-terminal base case.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::network::{alpha_network, AlphaCut, PottsNetwork, VertexKind};
use crate::error::{Error, Result};
use crate::flownet::{Dinic, FlowNetwork, ResidualGraph};
use crate::kcore::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathEnd {
    Terminal(u8),
    /// A fringe vertex of the network.
    Fringe(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPath {
    pub from: u8,
    pub to: PathEnd,
    /// Network vertices from `s_from` to the end.
    pub vertices: Vec<usize>,
    /// Network edge ids along the path.
    pub edges: Vec<usize>,
    pub amount: Rat,
}

#[derive(Clone, Debug, Default)]
pub struct Multiflow {
    pub paths: Vec<WeightedPath>,
}

/// `|f_α|`: the total amount on paths with `s_α` as an endpoint (scaled units).
pub fn multiflow_value(mf: &Multiflow, a: u8) -> Rat {
    mf.paths.iter().filter(|p| p.from == a || p.to == PathEnd::Terminal(a)).map(|p| p.amount).sum()
}

/// The first edge whose joint load exceeds its capacity.
pub fn multiflow_capacity_violation(netw: &PottsNetwork, mf: &Multiflow) -> Option<usize> {
    let mut load = vec![Rat::zero(); netw.edges.len()];
    for p in &mf.paths {
        if p.amount.is_negative() {
            return p.edges.first().copied().or(Some(0));
        }
        for &e in &p.edges {
            load[e] += p.amount;
        }
    }
    (0..load.len()).find(|&e| load[e] > Rat::from_integer(netw.edges[e].2))
}

/// Reads `Σ_α` off the residual graph of `f_α` viewed as a flow in the α-network.
///
/// Fails if `f_α` is not a maximum flow there, certified by comparing its value with
/// the capacity of the cut it induces.
pub fn sigma_from_multiflow(netw: &PottsNetwork, mf: &Multiflow, a: u8) -> Result<AlphaCut> {
    let an = alpha_network(netw, a);
    let mut net_flow = vec![Rat::zero(); netw.edges.len()];
    let sa = netw.terminal(a);
    for p in &mf.paths {
        let reversed = if p.from == a {
            false
        } else if p.to == PathEnd::Terminal(a) {
            true
        } else {
            continue;
        };
        let mut at = if reversed { *p.vertices.last().expect("nonempty path") } else { sa };
        let steps: Box<dyn Iterator<Item = &usize>> =
            if reversed { Box::new(p.edges.iter().rev()) } else { Box::new(p.edges.iter()) };
        for &e in steps {
            let (u, v, _) = netw.edges[e];
            if at == u {
                net_flow[e] += p.amount;
                at = v;
            } else {
                net_flow[e] -= p.amount;
                at = u;
            }
        }
    }
    let nv = an.net.vertex_count();
    let mut adj = vec![Vec::new(); nv];
    for (e, arcs) in an.edge_arcs.iter().enumerate() {
        let Some((fwd, _)) = *arcs else {
            if !net_flow[e].is_zero() {
                return Err(Error::internal(format!("{a}-flow uses a removed fringe edge {e}")));
            }
            continue;
        };
        let arc = &an.net.arcs()[fwd];
        let cap = Rat::from_integer(arc.cap);
        if net_flow[e].abs() > cap {
            return Err(Error::internal(format!("{a}-flow exceeds the capacity of edge {e}")));
        }
        if net_flow[e] < cap {
            adj[arc.from].push(arc.to);
        }
        if net_flow[e] > -cap {
            adj[arc.to].push(arc.from);
        }
    }
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
    }
    let g = ResidualGraph { adj };
    let seen = crate::flownet::reachable_from(&g, an.net.s);
    if seen[an.net.t] {
        return Err(Error::internal(format!("{a}-flow of the multiflow is not maximum")));
    }
    let capacity = an.net.cut_capacity(&seen);
    if Rat::from_integer(capacity) != multiflow_value(mf, a) {
        return Err(Error::internal(format!("{a}-flow value differs from the capacity of its cut")));
    }
    AlphaCut::from_residual(netw, a, &g, capacity)
}

/// A multiflow with `|f_α|` equal to the minimum α-cut capacity for every α.
pub fn locking_multiflow(netw: &PottsNetwork) -> Result<Multiflow> {
    let nv = netw.vertex_count();
    let top = LNet {
        orig: (0..nv).map(Some).collect(),
        edges: netw.edges.iter().enumerate().map(|(id, &(u, v, cap))| LEdge { u, v, cap, id }).collect(),
        terms: (1..=netw.k).map(|a| (netw.terminal(a), Tid::Real(a))).collect(),
        owner: netw
            .kinds
            .iter()
            .map(|k| match *k {
                VertexKind::Fringe { label, .. } => Some(Tid::Real(label)),
                _ => None,
            })
            .collect(),
    };
    let mut next_virtual = 0;
    let raw = solve(&top, &mut next_virtual)?;
    let mut paths = Vec::with_capacity(raw.len());
    for p in raw {
        let (Tid::Real(from), to) = (p.from, p.to) else {
            return Err(Error::internal("a multiflow path starts at a contracted terminal"));
        };
        let to = match to {
            LEnd::Term(Tid::Real(b)) => PathEnd::Terminal(b),
            LEnd::Fringe(f) => PathEnd::Fringe(f),
            LEnd::Term(Tid::Virtual(_)) => return Err(Error::internal("a multiflow path ends at a contracted terminal")),
        };
        let mut at = netw.terminal(from);
        let mut vertices = vec![at];
        for &(e, fwd) in &p.steps {
            let (u, v, _) = netw.edges[e];
            let (x, y) = if fwd { (u, v) } else { (v, u) };
            if x != at {
                return Err(Error::internal("aggregated path is not contiguous"));
            }
            at = y;
            vertices.push(at);
        }
        let end_ok = match to {
            PathEnd::Terminal(b) => at == netw.terminal(b),
            PathEnd::Fringe(f) => at == f,
        };
        if !end_ok {
            return Err(Error::internal("aggregated path ends at the wrong vertex"));
        }
        paths.push(WeightedPath { from, to, vertices, edges: p.steps.iter().map(|s| s.0).collect(), amount: p.amount });
    }
    Ok(Multiflow { paths })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Tid {
    Real(u8),
    Virtual(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LEnd {
    Term(Tid),
    Fringe(usize),
}

#[derive(Clone, Copy, Debug)]
struct LEdge {
    u: usize,
    v: usize,
    cap: i128,
    id: usize,
}

/// A (sub)network of the recursion. Edges keep the orientation of the original edge.
#[derive(Clone, Debug)]
struct LNet {
    orig: Vec<Option<usize>>,
    edges: Vec<LEdge>,
    terms: Vec<(usize, Tid)>,
    owner: Vec<Option<Tid>>,
}

#[derive(Clone, Debug)]
struct LPath {
    from: Tid,
    to: LEnd,
    /// `(original edge id, traversed in its orientation)`.
    steps: Vec<(usize, bool)>,
    amount: Rat,
}

impl LPath {
    fn reversed(mut self) -> Self {
        let LEnd::Term(t) = self.to else { unreachable!("fringe paths are never reversed") };
        self.to = LEnd::Term(self.from);
        self.from = t;
        self.steps.reverse();
        self.steps.iter_mut().for_each(|s| s.1 = !s.1);
        self
    }

    fn touches(&self, t: Tid) -> bool {
        self.from == t || self.to == LEnd::Term(t)
    }
}

impl LNet {
    fn nv(&self) -> usize {
        self.orig.len()
    }

    fn fringes_of(&self, t: Tid) -> Vec<usize> {
        (0..self.nv()).filter(|&v| self.owner[v] == Some(t)).collect()
    }

    fn has_fringes(&self, t: Tid) -> bool {
        self.owner.contains(&Some(t))
    }

    fn infinity(&self) -> i128 {
        self.edges.iter().map(|e| e.cap).sum::<i128>() + 1
    }

    /// A flow network on the local vertices plus `extra` vertices; edge `e` becomes arcs `2e`, `2e+1`.
    fn flow_network(&self, extra: usize) -> FlowNetwork {
        let mut net = FlowNetwork::new((self.nv() + extra).max(2), 0, 1).expect("at least two vertices");
        for e in &self.edges {
            net.add_edge(e.u, e.v, e.cap).expect("valid edge");
        }
        net
    }

    fn edge_flow(&self, d: &Dinic) -> Vec<i128> {
        (0..self.edges.len()).map(|e| d.flow(2 * e) - d.flow(2 * e + 1)).collect()
    }

    fn ends(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.u, e.v)).collect()
    }

    /// The inclusion-minimal set separating the vertices `a` from the vertices `b`.
    fn minimal_cut(&self, a: &[usize], b: &[usize]) -> (Vec<bool>, i128) {
        let nv = self.nv();
        let (s, t) = (nv, nv + 1);
        let mut net = self.flow_network(2);
        let inf = self.infinity();
        for &x in a {
            net.add_arc(s, x, inf).expect("valid arc");
        }
        for &y in b {
            net.add_arc(y, t, inf).expect("valid arc");
        }
        let mut d = Dinic::new(&net);
        let value = d.run(s, t);
        let mut side = d.reachable(s);
        side.truncate(nv);
        (side, value)
    }

    /// Keeps the marked vertices, merges the rest into a new terminal and drops fringes of `drop`.
    fn contract(&self, inside: &[bool], keep: &[(usize, Tid)], drop: &[Tid], new: Tid) -> LNet {
        let mut map = vec![None; self.nv()];
        let mut orig = Vec::new();
        let mut owner = Vec::new();
        for v in 0..self.nv() {
            let dropped = self.owner[v].is_some_and(|o| drop.contains(&o));
            if inside[v] && !dropped {
                map[v] = Some(orig.len());
                orig.push(self.orig[v]);
                owner.push(self.owner[v]);
            }
        }
        let virt = orig.len();
        orig.push(None);
        owner.push(None);
        let image = |v: usize| -> Option<usize> {
            if inside[v] {
                map[v]
            } else {
                Some(virt)
            }
        };
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let (u, v) = (image(e.u)?, image(e.v)?);
                (u != v).then_some(LEdge { u, v, ..*e })
            })
            .collect();
        let mut terms: Vec<(usize, Tid)> = keep.iter().map(|&(v, t)| (map[v].expect("kept terminal"), t)).collect();
        terms.push((virt, new));
        LNet { orig, edges, terms, owner }
    }
}

fn solve(net: &LNet, counter: &mut u32) -> Result<Vec<LPath>> {
    let s = net.terms.len();
    let fringe_terms: Vec<usize> = (0..s).filter(|&i| net.has_fringes(net.terms[i].1)).collect();
    if s >= 4 {
        return split(net, s / 2, counter);
    }
    if s == 3 {
        if let Some(&i) = fringe_terms.first() {
            return split_one(net, i, counter);
        }
        return hu_three_terminals(net);
    }
    if s == 2 && fringe_terms.len() == 2 {
        return split(net, 1, counter);
    }
    two_phase(net)
}

/// Splits off terminal `i` as the first group.
fn split_one(net: &LNet, i: usize, counter: &mut u32) -> Result<Vec<LPath>> {
    let mut reordered = net.clone();
    let t = reordered.terms.remove(i);
    reordered.terms.insert(0, t);
    split(&reordered, 1, counter)
}

/// Divides the terminals into the first `left` and the rest, solves both sides and
/// concatenates paths across the minimal cut.
fn split(net: &LNet, left: usize, counter: &mut u32) -> Result<Vec<LPath>> {
    let (l, r) = net.terms.split_at(left);
    let lv: Vec<usize> = l.iter().map(|t| t.0).collect();
    let rv: Vec<usize> = r.iter().map(|t| t.0).collect();
    let (side, _) = net.minimal_cut(&lv, &rv);
    for e in &net.edges {
        if (net.owner[e.u].is_some() || net.owner[e.v].is_some()) && side[e.u] != side[e.v] {
            return Err(Error::internal("a fringe is separated from its vertex by a minimal cut"));
        }
    }
    let lt: Vec<Tid> = l.iter().map(|t| t.1).collect();
    let rt: Vec<Tid> = r.iter().map(|t| t.1).collect();
    let s1 = Tid::Virtual(*counter);
    let s2 = Tid::Virtual(*counter + 1);
    *counter += 2;
    let outside: Vec<bool> = side.iter().map(|b| !b).collect();
    let n1 = net.contract(&side, l, &rt, s1);
    let n2 = net.contract(&outside, r, &lt, s2);
    let f1 = solve(&n1, counter)?;
    let f2 = solve(&n2, counter)?;

    let mut out = Vec::new();
    let mut into: BTreeMap<usize, Vec<LPath>> = BTreeMap::new();
    for p in f1 {
        if p.touches(s1) {
            let p = if p.from == s1 { p.reversed() } else { p };
            let last = p.steps.last().ok_or_else(|| Error::internal("empty path into a contracted terminal"))?.0;
            into.entry(last).or_default().push(p);
        } else {
            out.push(p);
        }
    }
    let mut from: BTreeMap<usize, Vec<LPath>> = BTreeMap::new();
    for p in f2 {
        if p.touches(s2) {
            let p = if p.to == LEnd::Term(s2) { p.reversed() } else { p };
            let first = p.steps.first().ok_or_else(|| Error::internal("empty path out of a contracted terminal"))?.0;
            from.entry(first).or_default().push(p);
        } else {
            out.push(p);
        }
    }
    for (e, mut ins) in into {
        let mut outs = from.remove(&e).unwrap_or_default();
        ins.reverse();
        outs.reverse();
        while let (Some(p), Some(q)) = (ins.last_mut(), outs.last_mut()) {
            if p.steps.last() != q.steps.first() {
                return Err(Error::internal(format!("paths meet edge {e} in opposite directions")));
            }
            let amount = p.amount.min(q.amount);
            let mut steps = p.steps.clone();
            steps.extend_from_slice(&q.steps[1..]);
            out.push(LPath { from: p.from, to: q.to, steps, amount });
            p.amount -= amount;
            q.amount -= amount;
            if p.amount.is_zero() {
                ins.pop();
            }
            if q.amount.is_zero() {
                outs.pop();
            }
        }
        if !ins.is_empty() || !outs.is_empty() {
            return Err(Error::internal(format!("flows on both sides of cut edge {e} disagree")));
        }
    }
    if !from.is_empty() {
        return Err(Error::internal("flow leaves a contracted terminal through an uncut edge"));
    }
    Ok(out)
}

/// One or two terminals, at most one of them with fringes: a maximum flow to the other
/// terminal, then an augmentation into the fringes with that flow held fixed.
fn two_phase(net: &LNet) -> Result<Vec<LPath>> {
    let (src, dst) = match net.terms.as_slice() {
        [a] => (*a, None),
        [a, b] if net.has_fringes(b.1) => (*b, Some(*a)),
        [a, b] => (*a, Some(*b)),
        _ => return Err(Error::internal("two-phase case needs one or two terminals")),
    };
    let nv = net.nv();
    let sink = nv;
    let mut fnet = net.flow_network(1);
    let inf = net.infinity();
    let dst_arc = dst.map(|d| fnet.add_arc(d.0, sink, inf).expect("valid arc"));
    let fringes = net.fringes_of(src.1);
    let fringe_arcs: Vec<usize> = fringes.iter().map(|&f| fnet.add_arc(f, sink, 0).expect("valid arc")).collect();
    let mut d = Dinic::new(&fnet);
    let v1 = d.run(src.0, sink);
    if let Some(a) = dst_arc {
        d.set_cap(a, v1);
    }
    fringe_arcs.iter().for_each(|&a| d.set_cap(a, inf));
    let v2 = d.run(src.0, sink);

    let mut sinks: Vec<(usize, i128)> = Vec::new();
    if let (Some(dd), Some(a)) = (dst, dst_arc) {
        sinks.push((dd.0, d.flow(a)));
    }
    for (&f, &a) in fringes.iter().zip(&fringe_arcs) {
        sinks.push((f, d.flow(a)));
    }
    let raw = decompose(nv, &net.ends(), &net.edge_flow(&d), src.0, v1 + v2, &sinks)?;
    raw.into_iter()
        .map(|(steps, end, amt)| {
            let to = match dst {
                Some(dd) if dd.0 == end => LEnd::Term(dd.1),
                _ => LEnd::Fringe(net.orig[end].ok_or_else(|| Error::internal("fringe without an original vertex"))?),
            };
            Ok(LPath { from: src.1, to, steps: to_orig(net, &steps), amount: Rat::from_integer(amt) })
        })
        .collect()
}

/// Three terminals without fringes: Hu's two-commodity construction with doubled capacities.
fn hu_three_terminals(net: &LNet) -> Result<Vec<LPath>> {
    let [(a, ta), (b, tb), (c, tc)] = <[(usize, Tid); 3]>::try_from(net.terms.as_slice()).expect("three terminals");
    let lam = |t: usize, others: [usize; 2]| net.minimal_cut(&[t], &others).1;
    let (la, lb, lc) = (lam(a, [b, c]), lam(b, [a, c]), lam(c, [a, b]));
    let (dab, dac, dbc) = (la + lb - lc, la + lc - lb, lb + lc - la);
    if dab < 0 || dac < 0 || dbc < 0 {
        return Err(Error::internal("cut values of three terminals violate the triangle inequality"));
    }
    let nv = net.nv();
    let (tau, s, t) = (nv, nv + 1, nv + 2);
    let doubled = LNet { edges: net.edges.iter().map(|e| LEdge { cap: 2 * e.cap, ..*e }).collect(), ..net.clone() };
    let m = net.edges.len();
    let run = |src2: usize, snk2: usize| -> Result<Vec<i128>> {
        let mut fnet = doubled.flow_network(3);
        fnet.add_edge(a, tau, dac).expect("valid edge");
        fnet.add_edge(b, tau, dbc).expect("valid edge");
        fnet.add_arc(s, c, dac + dbc).expect("valid arc");
        fnet.add_arc(s, src2, dab).expect("valid arc");
        fnet.add_arc(tau, t, dac + dbc).expect("valid arc");
        fnet.add_arc(snk2, t, dab).expect("valid arc");
        let mut d = Dinic::new(&fnet);
        if d.run(s, t) != dac + dbc + dab {
            return Err(Error::internal("two-commodity flow for three terminals is infeasible"));
        }
        Ok((0..m + 2).map(|e| d.flow(2 * e) - d.flow(2 * e + 1)).collect())
    };
    let x = run(a, b)?;
    let y = run(b, a)?;
    let w1: Vec<i128> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
    let w2: Vec<i128> = x.iter().zip(&y).map(|(p, q)| p - q).collect();
    if w2[m] != 0 || w2[m + 1] != 0 {
        return Err(Error::internal("a-b commodity uses an auxiliary edge"));
    }
    let mut ends = net.ends();
    ends.push((a, tau));
    ends.push((b, tau));
    let quarter = |v: i128| Rat::new(v, 4);
    let mut out = Vec::new();
    for (steps, _, amt) in decompose(nv + 1, &ends, &w1, c, 2 * (dac + dbc), &[(tau, 2 * (dac + dbc))])? {
        let (last, _) = *steps.last().expect("path reaches the auxiliary vertex");
        let to = if last == m { ta } else { tb };
        let steps = to_orig(net, &steps[..steps.len() - 1]);
        out.push(LPath { from: tc, to: LEnd::Term(to), steps, amount: quarter(amt) });
    }
    for (steps, _, amt) in decompose(nv + 1, &ends, &w2, a, 2 * dab, &[(b, 2 * dab)])? {
        out.push(LPath { from: ta, to: LEnd::Term(tb), steps: to_orig(net, &steps), amount: quarter(amt) });
    }
    Ok(out)
}

fn to_orig(net: &LNet, steps: &[(usize, bool)]) -> Vec<(usize, bool)> {
    steps.iter().map(|&(e, fwd)| (net.edges[e].id, fwd)).collect()
}

type RawPath = (Vec<(usize, bool)>, usize, i128);

/// Splits a single-source flow on undirected edges (`flow[e] > 0` means `u → v`) into
/// simple paths ending at sinks, discarding cycles.
fn decompose(nv: usize, ends: &[(usize, usize)], flow: &[i128], source: usize, supply: i128, sinks: &[(usize, i128)]) -> Result<Vec<RawPath>> {
    let mut rem = flow.to_vec();
    let mut out_arcs: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nv];
    for (e, &(u, v)) in ends.iter().enumerate() {
        if rem[e] > 0 {
            out_arcs[u].push((e, true));
        } else if rem[e] < 0 {
            out_arcs[v].push((e, false));
        }
    }
    let mut demand = vec![0i128; nv];
    for &(v, d) in sinks {
        demand[v] += d;
    }
    let amount = |rem: &[i128], (e, fwd): (usize, bool)| if fwd { rem[e] } else { -rem[e] };
    let head = |(e, fwd): (usize, bool)| if fwd { ends[e].1 } else { ends[e].0 };
    let take = |rem: &mut [i128], (e, fwd): (usize, bool), x: i128| {
        if fwd {
            rem[e] -= x
        } else {
            rem[e] += x
        }
    };
    let mut ptr = vec![0usize; nv];
    let mut pos: Vec<Option<usize>> = vec![None; nv];
    let mut left = supply;
    let mut paths = Vec::new();
    while left > 0 {
        let mut verts = vec![source];
        let mut steps: Vec<(usize, bool)> = Vec::new();
        pos[source] = Some(0);
        loop {
            let v = *verts.last().expect("nonempty walk");
            if v != source && demand[v] > 0 {
                break;
            }
            let step = loop {
                let Some(&s) = out_arcs[v].get(ptr[v]) else {
                    return Err(Error::internal("flow decomposition found an unbalanced vertex"));
                };
                if amount(&rem, s) > 0 {
                    break s;
                }
                ptr[v] += 1;
            };
            let w = head(step);
            if let Some(i) = pos[w] {
                let cycle: Vec<(usize, bool)> = steps[i..].iter().copied().chain([step]).collect();
                let b = cycle.iter().map(|&s| amount(&rem, s)).min().expect("nonempty cycle");
                cycle.iter().for_each(|&s| take(&mut rem, s, b));
                for &u in &verts[i + 1..] {
                    pos[u] = None;
                }
                verts.truncate(i + 1);
                steps.truncate(i);
            } else {
                steps.push(step);
                verts.push(w);
                pos[w] = Some(verts.len() - 1);
            }
        }
        let end = *verts.last().expect("nonempty walk");
        let b = steps.iter().map(|&s| amount(&rem, s)).min().unwrap_or(i128::MAX).min(left).min(demand[end]);
        steps.iter().for_each(|&s| take(&mut rem, s, b));
        left -= b;
        demand[end] -= b;
        verts.iter().for_each(|&u| pos[u] = None);
        paths.push((steps, end, b));
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potts::{alpha_mincut, PottsInstance};

    fn r(v: i128) -> Rat {
        Rat::from_integer(v)
    }

    fn check(netw: &PottsNetwork) {
        let mf = locking_multiflow(netw).unwrap();
        assert_eq!(multiflow_capacity_violation(netw, &mf), None);
        for a in 1..=netw.k {
            let direct = alpha_mincut(netw, a).unwrap();
            assert_eq!(multiflow_value(&mf, a), r(direct.capacity), "label {a}");
            let via = sigma_from_multiflow(netw, &mf, a).unwrap();
            assert_eq!(via.base, direct.base);
            assert!(via.poset.poset.same_canonical(&direct.poset.poset));
        }
    }

    #[test]
    fn decompose_cancels_cycles() {
        // 0 -> 1 -> 2 -> 0 cycle plus 0 -> 3
        let ends = [(0, 1), (1, 2), (2, 0), (0, 3)];
        let paths = decompose(4, &ends, &[2, 2, 2, 1], 0, 1, &[(3, 1)]).unwrap();
        assert_eq!(paths, vec![(vec![(3, true)], 3, 1)]);
    }

    #[test]
    fn star_with_three_terminals() {
        // the centre carries no unary preference, each leaf pulls to its own label
        let mut unary = vec![vec![r(0); 4]];
        for a in 1..=3 {
            let mut g = vec![r(1); 4];
            g[a] = r(-1);
            g[0] = r(0);
            unary.push(g);
        }
        let inst = PottsInstance::new(4, 3, vec![(0, 1, r(1)), (0, 2, r(1)), (0, 3, r(1))], unary).unwrap();
        let netw = PottsNetwork::build(&inst).unwrap();
        let mf = locking_multiflow(&netw).unwrap();
        for a in 1..=3 {
            assert_eq!(multiflow_value(&mf, a), r(alpha_mincut(&netw, a).unwrap().capacity));
        }
        check(&netw);
    }

    #[test]
    fn fringe_behind_a_bottleneck() {
        // a terminal path into a fringe must not be starved by the terminal-to-terminal flow
        let inst = PottsInstance::new(
            2,
            2,
            vec![(0, 1, r(5))],
            vec![vec![r(5), r(0), r(10)], vec![r(0), r(5), r(5)]],
        )
        .unwrap();
        check(&PottsNetwork::build(&inst).unwrap());
    }

    #[test]
    fn two_terminals_is_a_single_flow() {
        let inst = PottsInstance::new(1, 2, vec![], vec![vec![r(2), r(0), r(4)]]).unwrap();
        check(&PottsNetwork::build(&inst).unwrap());
    }
}
