use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kcore::Rat;

use super::{verify_representation, GroupedNetwork};

/// A named grouped network from the shipped corpus.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub network: GroupedNetwork,
}

/// Unary arcs `s → v_i^α` (`pull`) and `v_i^α → t` (`push`), and for every edge
/// `(i, j, w)` the symmetric pair `v_i^α ↔ v_j^α` of capacity `w` for each label.
pub fn potts_style_network(
    n: usize,
    k: u8,
    edges: &[(usize, usize, i128)],
    pull: &[Vec<i128>],
    push: &[Vec<i128>],
) -> GroupedNetwork {
    let mut g = GroupedNetwork::empty(n, k, Rat::from_integer(0));
    let (s, t) = (g.net.s, g.net.t);
    for i in 0..n {
        for a in 1..=k {
            let v = g.vertex(i, a);
            let p = pull.get(i).and_then(|r| r.get(a as usize - 1)).copied().unwrap_or(0);
            let q = push.get(i).and_then(|r| r.get(a as usize - 1)).copied().unwrap_or(0);
            if p > 0 {
                g.net.add_arc(s, v, p).expect("valid arc");
            }
            if q > 0 {
                g.net.add_arc(v, t, q).expect("valid arc");
            }
        }
    }
    for &(i, j, w) in edges {
        for a in 1..=k {
            let (u, v) = (g.vertex(i, a), g.vertex(j, a));
            g.net.add_edge(u, v, w).expect("valid edge");
        }
    }
    g
}

fn random_grouped(rng: &mut ChaCha8Rng, n: usize, k: u8) -> GroupedNetwork {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.6) {
                edges.push((i, j, rng.gen_range(1..=3)));
            }
        }
    }
    let pull: Vec<Vec<i128>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..=3)).collect()).collect();
    let push: Vec<Vec<i128>> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..=3)).collect()).collect();
    let mut g = potts_style_network(n, k, &edges, &pull, &push);
    let extra = rng.gen_range(0..=2);
    for _ in 0..extra {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let (a, b) = (rng.gen_range(1..=k), rng.gen_range(1..=k));
        let (u, v) = (g.vertex(i, a), g.vertex(j, b));
        g.net.add_arc(u, v, rng.gen_range(1..=2)).expect("valid arc");
    }
    g
}

/// Hand-built networks plus seeded random ones; every member satisfies NR2 and represents
/// a k-submodular function.
pub fn fixture_corpus() -> Vec<Fixture> {
    let mut out = Vec::new();
    let mut push = |name: &str, network: GroupedNetwork| {
        let f = network.represented_table();
        assert!(verify_representation(&network, &f).is_ok() && f.is_k_submodular(), "fixture {name} is not a valid representation");
        out.push(Fixture { name: name.to_string(), network })
    };
    push("single-variable-three-way-tie", potts_style_network(1, 2, &[], &[vec![1, 1]], &[vec![1, 1]]));
    push("unique-zero", potts_style_network(2, 2, &[(0, 1, 1)], &[], &[vec![1, 2], vec![2, 1]]));
    push("unique-label", potts_style_network(2, 3, &[(0, 1, 1)], &[vec![3, 0, 0], vec![0, 3, 0]], &[vec![1, 2, 2], vec![2, 1, 2]]));
    push(
        "path-two-labels",
        potts_style_network(3, 2, &[(0, 1, 1), (1, 2, 1)], &[vec![1, 1], vec![0, 0], vec![1, 1]], &[vec![1, 1], vec![0, 0], vec![1, 1]]),
    );
    push(
        "triangle-free-middle",
        potts_style_network(3, 3, &[(0, 1, 2), (1, 2, 2), (0, 2, 1)], &[vec![2, 2, 0], vec![1, 1, 1], vec![0, 2, 2]], &[vec![2, 2, 2], vec![1, 1, 1], vec![2, 2, 2]]),
    );
    push(
        "chain-of-ties",
        potts_style_network(3, 2, &[(0, 1, 1), (1, 2, 1)], &[vec![1, 0], vec![0, 0], vec![0, 1]], &[vec![1, 0], vec![0, 0], vec![0, 1]]),
    );
    push(
        "star-center",
        potts_style_network(4, 2, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)], &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b70_6970);
    let mut made = 0;
    while made < 6 {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(2..=3);
        let g = random_grouped(&mut rng, n, k);
        let f = g.represented_table();
        if verify_representation(&g, &f).is_ok() && f.is_k_submodular() {
            made += 1;
            out.push(Fixture { name: format!("random-{made}"), network: g });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::consistent_ideals;
    use crate::kcore::{brute_minimizer_set, TableOracle};
    use crate::netrep::{apply_exclusion_rules, exclusion_rules_direct, pip_from_network};
    use crate::oracle_builder::build_pip_via_oracle;
    use crate::pip::{ideal_join, is_elementary};

    #[test]
    fn corpus_matches_oracle_route() {
        let corpus = fixture_corpus();
        assert!(corpus.len() >= 10);
        for fx in &corpus {
            let g = &fx.network;
            let f = g.represented_table();
            verify_representation(g, &f).unwrap();
            let np = pip_from_network(g);
            assert_eq!(is_elementary(&np.pip), Ok(()), "{}", fx.name);
            let mut mins: Vec<_> = consistent_ideals(&np.pip).map(|i| np.minimizer(g, &i).unwrap()).collect();
            mins.sort_by_key(|x| x.index());
            assert_eq!(mins, brute_minimizer_set(&f), "{}", fx.name);
            let by_net = np.pip.with_ideal_payloads(|i| np.minimizer(g, i).unwrap());
            let rep = build_pip_via_oracle(&TableOracle::new(&f));
            let by_oracle = rep.pip.with_ideal_payloads(|i| ideal_join(&rep.pip, i, &rep.minimum_minimizer));
            assert!(by_net.same_canonical(&by_oracle), "{}", fx.name);
            let res = crate::flownet::residual(&g.net, &crate::flownet::max_flow(&g.net).arc_flow).unwrap();
            assert_eq!(apply_exclusion_rules(g, &res, &np.pq), exclusion_rules_direct(g, &np.pq), "{}", fx.name);
        }
    }
}
