use num_integer::Integer;
use num_traits::Signed;

use super::{decompose_unary, PottsInstance, UnaryDecomposition};
use crate::error::{Error, Result};
use crate::flownet::{pq_poset_from_residual, Dinic, FlowNetwork, PqPoset, ResidualGraph};
use crate::kcore::{KVector, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Var(usize),
    Terminal(u8),
    Fringe { vertex: usize, label: u8 },
}

/// The undirected network on `V ∪ fringes ∪ terminals`.
///
/// Capacities are stored multiplied by `scale`, which is chosen so that every
/// capacity is an even integer.
#[derive(Clone, Debug)]
pub struct PottsNetwork {
    pub n: usize,
    pub k: u8,
    pub kinds: Vec<VertexKind>,
    /// `(u, v, scaled capacity)`.
    pub edges: Vec<(usize, usize, i128)>,
    pub scale: i128,
    /// `Σ_i g̃_i(γ_i)`.
    pub offset: Rat,
    pub decomposition: UnaryDecomposition,
    incident: Vec<Vec<usize>>,
}

impl PottsNetwork {
    pub fn build(inst: &PottsInstance) -> Result<Self> {
        let dec = decompose_unary(inst)?;
        let (n, k) = (inst.n, inst.k);
        let mut lcm = 1i128;
        let mut note = |r: &Rat| lcm = lcm.lcm(r.denom());
        inst.edges.iter().for_each(|e| note(&e.2));
        dec.mu.iter().for_each(&mut note);
        dec.sigma.iter().flatten().for_each(&mut note);
        let scale = 2 * lcm;
        let to_int = |r: Rat| -> Result<i128> {
            let s = r * Rat::from_integer(scale);
            debug_assert!(s.is_integer());
            Ok(s.to_integer())
        };

        let mut kinds: Vec<VertexKind> = (0..n).map(VertexKind::Var).collect();
        kinds.extend((1..=k).map(VertexKind::Terminal));
        let mut edges = Vec::new();
        for &(u, v, l) in &inst.edges {
            edges.push((u, v, to_int(l)?));
        }
        for i in 0..n {
            let g = dec.gamma[i];
            if dec.mu[i].is_positive() {
                edges.push((i, n + g as usize - 1, to_int(dec.mu[i])?));
            }
        }
        for i in 0..n {
            for a in 1..=k {
                let s = dec.sigma[i][a as usize - 1];
                if s.is_positive() {
                    let f = kinds.len();
                    kinds.push(VertexKind::Fringe { vertex: i, label: a });
                    edges.push((i, f, to_int(s * Rat::from_integer(2))?));
                }
            }
        }
        let offset = (0..n).map(|i| inst.unary[i][dec.gamma[i] as usize]).sum();
        let mut incident = vec![Vec::new(); kinds.len()];
        for (e, &(u, v, _)) in edges.iter().enumerate() {
            incident[u].push(e);
            incident[v].push(e);
        }
        Ok(PottsNetwork { n, k, kinds, edges, scale, offset, decomposition: dec, incident })
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn terminal(&self, a: u8) -> usize {
        self.n + a as usize - 1
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn fringe_count(&self) -> usize {
        self.kinds.len() - self.n - self.k as usize
    }

    pub fn terminal_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| matches!(self.kinds[e.1], VertexKind::Terminal(_))).count()
    }

    /// Converts a scaled capacity back to function units.
    pub fn unscale(&self, c: Rat) -> Rat {
        c / Rat::from_integer(self.scale)
    }

    /// Capacity (scaled) of the edges leaving the vertex set marked by `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> i128 {
        self.edges.iter().filter(|&&(u, v, _)| side[u] != side[v]).map(|e| e.2).sum()
    }
}

/// The α-network: β-fringes removed, other terminals and α-fringes merged into `s′`.
///
/// Vertices `0..n` are `V`, `n` is `s_α` and `n + 1` is `s′`. `edge_arcs[e]` gives the pair of
/// arcs `(u→v, v→u)` standing for Potts edge `e`, if it survives.
pub struct AlphaNetwork {
    pub net: FlowNetwork,
    pub edge_arcs: Vec<Option<(usize, usize)>>,
}

pub fn alpha_network(netw: &PottsNetwork, a: u8) -> AlphaNetwork {
    let n = netw.n;
    let (sa, sp) = (n, n + 1);
    let mut names: Vec<String> = (0..n).map(|i| format!("v{}", i + 1)).collect();
    names.push(format!("s{a}"));
    names.push("s'".to_string());
    let mut net = FlowNetwork::with_names(names, sa, sp).expect("distinct terminals");
    let map = |v: usize| -> Option<usize> {
        match netw.kinds[v] {
            VertexKind::Var(i) => Some(i),
            VertexKind::Terminal(b) if b == a => Some(sa),
            VertexKind::Terminal(_) => Some(sp),
            VertexKind::Fringe { label, .. } if label == a => Some(sp),
            VertexKind::Fringe { .. } => None,
        }
    };
    let edge_arcs = netw
        .edges
        .iter()
        .map(|&(u, v, c)| {
            let (mu, mv) = (map(u)?, map(v)?);
            let (f, b) = net.add_edge(mu, mv, c).expect("valid endpoints");
            Some((f, b))
        })
        .collect();
    AlphaNetwork { net, edge_arcs }
}

/// An inclusion-minimal minimum α-cut and the poset `Σ_α` of all minimum α-cuts.
#[derive(Clone, Debug)]
pub struct AlphaCut {
    pub label: u8,
    /// Scaled capacity of a minimum α-cut.
    pub capacity: i128,
    /// `Y_α ∩ V`, sorted.
    pub base: Vec<usize>,
    /// Poset over SCCs of the α-network residual graph; payloads are subsets of `V`.
    pub poset: PqPoset,
}

impl AlphaCut {
    pub(crate) fn from_residual(netw: &PottsNetwork, a: u8, g: &ResidualGraph, capacity: i128) -> Result<Self> {
        let n = netw.n;
        let poset = pq_poset_from_residual(g, n, n + 1);
        if poset.poset.elements().iter().any(|e| match &e.payload {
            crate::pip::Payload::Vertices(vs) => vs.iter().any(|&v| v >= n),
            _ => true,
        }) {
            return Err(Error::internal(format!("an element of the {a}-cut poset contains a terminal")));
        }
        let base = poset.x0.iter().copied().filter(|&v| v < n).collect();
        Ok(AlphaCut { label: a, capacity, base, poset })
    }

    /// `Y_α` as a vertex set of the full network (with its admissible fringes).
    pub fn cut_in(&self, netw: &PottsNetwork) -> Vec<usize> {
        admissible_cut(netw, self.label, &self.base)
    }
}

/// `X ∪ {s_α}` plus every β-fringe (β ≠ α) of a vertex in `X`.
fn admissible_cut(netw: &PottsNetwork, a: u8, vars: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; netw.vertex_count()];
    vars.iter().for_each(|&v| inside[v] = true);
    let mut out: Vec<usize> = vars.to_vec();
    out.push(netw.terminal(a));
    for (f, kind) in netw.kinds.iter().enumerate() {
        if let VertexKind::Fringe { vertex, label } = *kind {
            if label != a && inside[vertex] {
                out.push(f);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Minimum α-cut via one maximum flow on the α-network.
pub fn alpha_mincut(netw: &PottsNetwork, a: u8) -> Result<AlphaCut> {
    if a == 0 || a > netw.k {
        return Err(Error::validation(format!("label {a} is outside 1..={}", netw.k)));
    }
    let an = alpha_network(netw, a);
    let mut d = Dinic::new(&an.net);
    let value = d.run(an.net.s, an.net.t);
    let g = crate::flownet::residual(&an.net, &d.arc_flows())?;
    AlphaCut::from_residual(netw, a, &g, value)
}

/// An ordered partition `(X_0, …, X_k)` of the network's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiMulticut {
    pub parts: Vec<Vec<usize>>,
    /// `x(𝒳)`: `x_i = α` iff `i ∈ X_α`.
    pub x: KVector,
    /// `½ Σ_α c(X_α)` in function units.
    pub capacity: Rat,
    /// `capacity + Σ_i g̃_i(γ_i)`, which equals `g̃(x)`.
    pub value: Rat,
}

/// The admissible semi-multicut whose vertex labels are `x`.
pub fn semi_multicut_of(netw: &PottsNetwork, x: &KVector) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); netw.k as usize + 1];
    for (v, kind) in netw.kinds.iter().enumerate() {
        let p = match *kind {
            VertexKind::Var(i) => x.get(i),
            VertexKind::Terminal(a) => a,
            VertexKind::Fringe { vertex, label } => {
                let xi = x.get(vertex);
                if xi == 0 || xi == label {
                    0
                } else {
                    xi
                }
            }
        };
        parts[p as usize].push(v);
    }
    parts
}

/// `½ Σ_{α ≥ 1} c(X_α)` in function units.
pub fn semi_multicut_capacity(netw: &PottsNetwork, parts: &[Vec<usize>]) -> Rat {
    let mut side = vec![false; netw.vertex_count()];
    let mut total = 0i128;
    for p in &parts[1..] {
        side.iter_mut().for_each(|s| *s = false);
        p.iter().for_each(|&v| side[v] = true);
        total += netw.cut_capacity(&side);
    }
    netw.unscale(Rat::new(total, 2))
}

/// `(Y_0, Y_1, …, Y_k)` from the minimal minimum α-cuts.
pub fn min_semi_multicut(netw: &PottsNetwork, cuts: &[AlphaCut]) -> Result<SemiMulticut> {
    let mut labels = vec![0u8; netw.n];
    for c in cuts {
        for &v in &c.base {
            if labels[v] != 0 {
                return Err(Error::internal(format!("minimal cuts for labels {} and {} overlap at vertex {v}", labels[v], c.label)));
            }
            labels[v] = c.label;
        }
    }
    let x = KVector::new(netw.k, labels)?;
    let parts = semi_multicut_of(netw, &x);
    let capacity = semi_multicut_capacity(netw, &parts);
    let direct: i128 = cuts.iter().map(|c| c.capacity).sum();
    if netw.unscale(Rat::new(direct, 2)) != capacity {
        return Err(Error::internal("semi-multicut capacity differs from the sum of minimum α-cuts"));
    }
    Ok(SemiMulticut { value: capacity + netw.offset, parts, x, capacity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcore::{all_points, brute_minimizer_set, Value};

    fn r(v: i128) -> Rat {
        Rat::from_integer(v)
    }

    fn path3() -> PottsInstance {
        PottsInstance::new(
            2,
            3,
            vec![(0, 1, Rat::new(3, 2))],
            vec![vec![r(1), r(0), r(2), r(3)], vec![r(1), r(4), r(1), r(1)]],
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_network_shape() {
        let inst = PottsInstance::new(1, 2, vec![], vec![vec![r(1), r(0), r(3)]]).unwrap();
        let netw = PottsNetwork::build(&inst).unwrap();
        assert!(netw.terminal_edge_count() <= 1);
        assert!(netw.fringe_count() <= 2);
        for x in all_points(1, 2) {
            assert_eq!(semi_multicut_capacity(&netw, &semi_multicut_of(&netw, &x)) + netw.offset, inst.eval(&x));
        }
    }

    #[test]
    fn zero_mu_gives_no_terminal_edges() {
        let inst = PottsInstance::new(2, 2, vec![(0, 1, r(1))], vec![vec![r(0), r(1), r(2)]; 2]).unwrap();
        assert_eq!(PottsNetwork::build(&inst).unwrap().terminal_edge_count(), 0);
    }

    #[test]
    fn capacities_are_even_integers() {
        let netw = PottsNetwork::build(&path3()).unwrap();
        assert!(netw.edges.iter().all(|e| e.2 > 0 && e.2 % 2 == 0));
    }

    #[test]
    fn semi_multicut_identity_on_path() {
        let inst = path3();
        let netw = PottsNetwork::build(&inst).unwrap();
        for x in all_points(2, 3) {
            let parts = semi_multicut_of(&netw, &x);
            assert_eq!(semi_multicut_capacity(&netw, &parts) + netw.offset, inst.eval(&x), "x = {:?}", x.labels());
        }
    }

    #[test]
    fn min_semi_multicut_attains_minimum() {
        let inst = path3();
        let netw = PottsNetwork::build(&inst).unwrap();
        let cuts: Vec<AlphaCut> = (1..=3).map(|a| alpha_mincut(&netw, a).unwrap()).collect();
        let smc = min_semi_multicut(&netw, &cuts).unwrap();
        let table = inst.to_table();
        assert_eq!(Value::Finite(smc.value), table.min_value());
        assert!(brute_minimizer_set(&table).contains(&smc.x));
    }

    #[test]
    fn vertex_preferring_other_label_leaves_base_cut_empty() {
        let inst = PottsInstance::new(1, 2, vec![], vec![vec![r(0), r(5), r(-5)]]).unwrap();
        let netw = PottsNetwork::build(&inst).unwrap();
        assert!(alpha_mincut(&netw, 1).unwrap().base.is_empty());
        assert_eq!(alpha_mincut(&netw, 2).unwrap().base, vec![0]);
    }
}
