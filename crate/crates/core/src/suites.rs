//! Seeded instance generators shared by the self-test harness, examples and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::flownet::FlowNetwork;
use crate::kcore::{all_points, Rat, TableFunction, Value};
use crate::labeling::diagonal_grid;
use crate::potts::{random_instance, PottsInstance, Relaxation};

/// A random k-submodular table: a Potts sum plus unary terms that may be infinite at
/// nonzero labels, or for `n = 2` occasionally a rejection-sampled arbitrary table.
pub fn random_table(rng: &mut impl Rng, n: usize, k: u8) -> TableFunction {
    if n == 2 && rng.gen_bool(0.25) {
        if let Some(t) = rejection_sampled_pair(rng, k) {
            return t;
        }
    }
    let potts = random_instance(rng, n, k);
    let extra: Vec<Vec<Value>> = (0..n)
        .map(|_| {
            let base = rng.gen_range(0..3i128);
            std::iter::once(Value::int(base))
                .chain((0..k).map(|_| if rng.gen_bool(0.15) { Value::Inf } else { Value::int(base + rng.gen_range(0..3)) }))
                .collect()
        })
        .collect();
    let t = TableFunction::from_fn(n, k, |x| {
        let unary = (0..n).fold(Value::zero(), |acc, i| acc + extra[i][x.get(i) as usize]);
        Value::Finite(potts.eval(x)) + unary
    })
    .expect("well-formed table");
    debug_assert!(t.is_k_submodular());
    t
}

fn rejection_sampled_pair(rng: &mut impl Rng, k: u8) -> Option<TableFunction> {
    let size = (k as usize + 1).pow(2);
    for _ in 0..20_000 {
        let values: Vec<Value> = (0..size).map(|_| Value::int(rng.gen_range(0..3))).collect();
        let t = TableFunction::new(2, k, values).ok()?;
        if t.is_k_submodular() {
            return Some(t);
        }
    }
    None
}

/// A random network on `nv ≥ 2` vertices with source `0` and sink `nv − 1`.
pub fn random_flow_network(rng: &mut impl Rng, nv: usize) -> FlowNetwork {
    let mut net = FlowNetwork::new(nv, 0, nv - 1).expect("distinct terminals");
    for u in 0..nv {
        for v in 0..nv {
            if u != v && rng.gen_bool(0.3) {
                net.add_arc(u, v, rng.gen_range(1..=3)).expect("valid arc");
            }
        }
    }
    net
}

/// Every minimum `s`–`t` cut of `net` as a sorted source side, by exhaustive search.
pub fn brute_min_cuts(net: &FlowNetwork) -> Vec<Vec<usize>> {
    let nv = net.vertex_count();
    let inner: Vec<usize> = (0..nv).filter(|&v| v != net.s && v != net.t).collect();
    let mut best = i128::MAX;
    let mut out = Vec::new();
    for mask in 0u32..1 << inner.len() {
        let mut side = vec![false; nv];
        side[net.s] = true;
        for (b, &v) in inner.iter().enumerate() {
            side[v] = mask >> b & 1 == 1;
        }
        let c = net.cut_capacity(&side);
        if c < best {
            best = c;
            out.clear();
        }
        if c == best {
            out.push((0..nv).filter(|&v| side[v]).collect());
        }
    }
    out.sort();
    out
}

/// A Potts instance from raw label costs on a path or a small 8-connected grid.
pub fn grid_instance(rng: &mut impl Rng, n: usize, k: u8, mode: Relaxation) -> PottsInstance {
    let w = if rng.gen_bool(0.5) { n } else { rng.gen_range(1..=n) };
    let edges: Vec<(usize, usize, Rat)> = diagonal_grid(w, n.div_ceil(w))
        .into_iter()
        .filter(|&(u, v)| u < n && v < n)
        .map(|(u, v)| (u, v, Rat::from_integer(rng.gen_range(1..=3))))
        .collect();
    let raw = (0..n).map(|_| (0..k).map(|_| Rat::from_integer(rng.gen_range(0..6))).collect()).collect();
    PottsInstance::from_raw(n, k, edges, raw, mode).expect("connected grid")
}

/// A star with strong spokes whose leaves prefer distinct labels: many terminals carry
/// flow at once.
pub fn star_instance(rng: &mut impl Rng, leaves: usize, k: u8) -> PottsInstance {
    let n = leaves + 1;
    let edges = (1..n).map(|v| (0, v, Rat::from_integer(rng.gen_range(1..=4)))).collect();
    let mut labels: Vec<u8> = (1..=k).collect();
    labels.shuffle(rng);
    let raw = (0..n)
        .map(|v| {
            (1..=k)
                .map(|a| {
                    let own = v > 0 && labels[(v - 1) % k as usize] == a;
                    Rat::from_integer(if own { 0 } else { rng.gen_range(2..6) })
                })
                .collect()
        })
        .collect();
    PottsInstance::from_raw(n, k, edges, raw, Relaxation::Average).expect("connected star")
}

/// Suite of grid and path instances with `n ≤ 6`, `k ≤ 4`.
pub fn potts_suite(rng: &mut impl Rng, count: usize) -> Vec<PottsInstance> {
    (0..count)
        .map(|i| {
            let n = rng.gen_range(1..=6);
            let k = rng.gen_range(2..=4u8);
            let mode = if i % 4 == 3 { Relaxation::Kovtun } else { Relaxation::Average };
            grid_instance(rng, n, k, mode)
        })
        .collect()
}

/// Every labeling in `[k]^n` of least Potts energy.
pub fn optimal_labelings(inst: &PottsInstance) -> Vec<Vec<u8>> {
    let mut best: Option<Rat> = None;
    let mut out = Vec::new();
    for x in all_points(inst.n, inst.k).filter(|x| x.support().len() == inst.n) {
        let e = inst.energy(x.labels()).expect("raw costs present");
        match best {
            Some(b) if e > b => {}
            Some(b) if e == b => out.push(x.labels().to_vec()),
            _ => {
                best = Some(e);
                out = vec![x.labels().to_vec()];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn tables_are_k_submodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let k = rng.gen_range(1..=3);
            assert!(random_table(&mut rng, n, k).is_k_submodular());
        }
    }

    #[test]
    fn brute_cuts_of_a_series_pair() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, 1).unwrap();
        net.add_arc(1, 2, 1).unwrap();
        assert_eq!(brute_min_cuts(&net), vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn generated_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(potts_suite(&mut rng, 50).len(), 50);
        for k in 2..=8 {
            let s = star_instance(&mut rng, 2 * k as usize, k);
            assert_eq!(s.n, 2 * k as usize + 1);
        }
    }
}
