use std::collections::BTreeMap;

use rayon::prelude::*;

use super::locking::{locking_multiflow, multiflow_capacity_violation, sigma_from_multiflow};
use super::network::{alpha_mincut, min_semi_multicut, AlphaCut, PottsNetwork, SemiMulticut};
use super::PottsInstance;
use crate::error::{Error, Result};
use crate::kcore::{KVector, Rat};
use crate::pip::{Element, Payload, Pip};

/// How the posets `Σ_α` are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Route {
    /// One maximum flow per label.
    #[default]
    Direct,
    /// A single locking multiflow.
    Locking,
}

fn vertices(cut: &AlphaCut, e: usize) -> &[usize] {
    match &cut.poset.poset.element(e).payload {
        Payload::Vertices(v) => v,
        _ => unreachable!("cut posets carry vertex sets"),
    }
}

/// Glues the layers `Σ_α × {α}`: order within each layer, and `(X, α)` minimally
/// inconsistent with `(Y, β)` exactly when `α ≠ β` and `X = Y`.
///
/// Elements sharing a vertex set form one part. Fails when two layers hold
/// overlapping but distinct sets, or a shared pair of sets is not order-reversed.
pub fn glue_pip(cuts: &[AlphaCut]) -> Result<Pip> {
    let mut elements = Vec::new();
    let mut origin = Vec::new();
    let mut layer_of: Vec<Vec<Option<usize>>> = Vec::with_capacity(cuts.len());
    for (l, c) in cuts.iter().enumerate() {
        let mut map = Vec::new();
        for e in 0..c.poset.poset.len() {
            let idx = elements.len();
            for &v in vertices(c, e) {
                if v >= map.len() {
                    map.resize(v + 1, None);
                }
                map[v] = Some(idx);
            }
            elements.push(Element::new(Payload::Layered { label: c.label, vertices: vertices(c, e).to_vec() }));
            origin.push((l, e));
        }
        layer_of.push(map);
    }
    let set = |idx: usize| vertices(&cuts[origin[idx].0], origin[idx].1);

    let mut mic = Vec::new();
    for idx in 0..elements.len() {
        let (l, _) = origin[idx];
        for (l2, map) in layer_of.iter().enumerate().skip(l + 1) {
            let hit = set(idx).iter().find_map(|&v| map.get(v).copied().flatten());
            if let Some(j) = hit {
                if set(j) != set(idx) {
                    return Err(Error::internal(format!(
                        "cut posets for labels {} and {} share a vertex without sharing the set",
                        cuts[l].label, cuts[l2].label
                    )));
                }
                mic.push((idx, j));
            }
        }
    }
    let leq = |a: usize, b: usize| {
        let ((la, ea), (lb, eb)) = (origin[a], origin[b]);
        la == lb && cuts[la].poset.poset.leq(ea, eb)
    };
    for &(a, b) in &mic {
        for &(c, d) in &mic {
            if origin[a].0 == origin[c].0 && origin[b].0 == origin[d].0 && leq(a, c) != leq(d, b) {
                return Err(Error::internal("shared cut elements are not order-reversed across labels"));
            }
        }
    }

    let mut part_of_set: BTreeMap<&[usize], usize> = BTreeMap::new();
    let parts: Vec<usize> = (0..elements.len())
        .map(|idx| {
            let next = part_of_set.len();
            *part_of_set.entry(set(idx)).or_insert(next)
        })
        .collect();
    let mut pip = Pip::from_order(elements, leq, &mic);
    pip.set_parts(&parts);
    Ok(pip)
}

/// `x(𝒳^I)`: vertices reached from `s_α` plus the vertex sets of `(X, α) ∈ I` get label `α`.
pub fn layered_minimizer(n: usize, k: u8, cuts: &[AlphaCut], pip: &Pip, ideal: &[usize]) -> Result<KVector> {
    let mut labels = vec![0u8; n];
    let mut assign = |v: usize, a: u8| -> Result<()> {
        if labels[v] != 0 && labels[v] != a {
            return Err(Error::internal(format!("vertex {v} lands in the cuts of labels {} and {a}", labels[v])));
        }
        labels[v] = a;
        Ok(())
    };
    for c in cuts {
        for &v in &c.base {
            assign(v, c.label)?;
        }
    }
    for &e in ideal {
        match &pip.element(e).payload {
            Payload::Layered { label, vertices } => {
                for &v in vertices {
                    assign(v, *label)?;
                }
            }
            _ => return Err(Error::validation("expected a layered PIP")),
        }
    }
    KVector::new(k, labels)
}

/// The layered PIP of a Potts instance together with a minimum minimizer.
#[derive(Clone, Debug)]
pub struct PottsPip {
    pub network: PottsNetwork,
    pub cuts: Vec<AlphaCut>,
    pub pip: Pip,
    pub semi_multicut: SemiMulticut,
}

impl PottsPip {
    pub fn minimum_minimizer(&self) -> &KVector {
        &self.semi_multicut.x
    }

    pub fn min_value(&self) -> Rat {
        self.semi_multicut.value
    }

    /// The minimizer encoded by a consistent ideal.
    pub fn minimizer(&self, ideal: &[usize]) -> Result<KVector> {
        layered_minimizer(self.network.n, self.network.k, &self.cuts, &self.pip, ideal)
    }
}

pub fn build_pip_potts(inst: &PottsInstance, route: Route, parallel: bool) -> Result<PottsPip> {
    let network = PottsNetwork::build(inst)?;
    let labels: Vec<u8> = (1..=inst.k).collect();
    let cuts: Vec<AlphaCut> = match route {
        Route::Direct if parallel => labels.par_iter().map(|&a| alpha_mincut(&network, a)).collect::<Result<_>>()?,
        Route::Direct => labels.iter().map(|&a| alpha_mincut(&network, a)).collect::<Result<_>>()?,
        Route::Locking => {
            let mf = locking_multiflow(&network)?;
            if let Some(e) = multiflow_capacity_violation(&network, &mf) {
                return Err(Error::internal(format!("locking multiflow overloads edge {e}")));
            }
            labels.iter().map(|&a| sigma_from_multiflow(&network, &mf, a)).collect::<Result<_>>()?
        }
    };
    let semi_multicut = min_semi_multicut(&network, &cuts)?;
    let pip = glue_pip(&cuts)?;
    Ok(PottsPip { network, cuts, pip, semi_multicut })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::enumerate::consistent_ideals;
    use crate::kcore::{all_points, brute_minimizer_set, Value};
    use crate::pip::is_elementary;
    use crate::potts::{random_instance, semi_multicut_capacity, semi_multicut_of};

    fn r(v: i128) -> Rat {
        Rat::from_integer(v)
    }

    fn check_against_brute(inst: &PottsInstance) {
        let table = inst.to_table();
        let brute: BTreeSet<KVector> = brute_minimizer_set(&table).into_iter().collect();
        let direct = build_pip_potts(inst, Route::Direct, false).unwrap();
        assert_eq!(Value::Finite(direct.min_value()), table.min_value());
        assert!(direct.pip.validate().is_ok());
        assert!(is_elementary(&direct.pip).is_ok());
        let got: Vec<KVector> = consistent_ideals(&direct.pip).map(|i| direct.minimizer(&i).unwrap()).collect();
        let set: BTreeSet<KVector> = got.iter().cloned().collect();
        assert_eq!(set.len(), got.len(), "ideals map injectively");
        assert_eq!(set, brute);
        let locking = build_pip_potts(inst, Route::Locking, false).unwrap();
        assert!(locking.pip.same_canonical(&direct.pip));
        assert_eq!(locking.minimum_minimizer(), direct.minimum_minimizer());
    }

    #[test]
    fn unique_minimizer_gives_empty_pip() {
        let inst = PottsInstance::new(2, 2, vec![(0, 1, r(1))], vec![vec![r(0), r(-1), r(2)]; 2]).unwrap();
        let pp = build_pip_potts(&inst, Route::Direct, false).unwrap();
        assert!(pp.pip.is_empty());
        assert_eq!(pp.minimum_minimizer().labels(), &[1, 1]);
    }

    #[test]
    fn two_label_tie_at_one_vertex() {
        let inst = PottsInstance::new(1, 2, vec![], vec![vec![r(0), r(0), r(0)]]).unwrap();
        let pp = build_pip_potts(&inst, Route::Direct, false).unwrap();
        assert_eq!(pp.pip.len(), 2);
        assert_eq!(pp.pip.min_inconsistent().len(), 1);
        check_against_brute(&inst);
    }

    #[test]
    fn constant_instance_is_fully_degenerate() {
        let inst = PottsInstance::new(2, 3, vec![(0, 1, r(1))], vec![vec![r(2); 4]; 2]).unwrap();
        check_against_brute(&inst);
    }

    #[test]
    fn random_instances_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x706f_7474);
        for _ in 0..150 {
            let n = rng.gen_range(1..=4);
            let k = rng.gen_range(2..=3);
            check_against_brute(&random_instance(&mut rng, n, k));
        }
    }

    #[test]
    fn semi_multicut_identity_is_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let n = rng.gen_range(1..=3);
            let k = rng.gen_range(2..=4);
            let inst = random_instance(&mut rng, n, k);
            let netw = PottsNetwork::build(&inst).unwrap();
            for x in all_points(n, k) {
                let cap = semi_multicut_capacity(&netw, &semi_multicut_of(&netw, &x));
                assert_eq!(cap + netw.offset, inst.eval(&x));
            }
        }
    }

    #[test]
    fn larger_random_instances_agree_across_routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..30 {
            let n = rng.gen_range(5..=20);
            let k = rng.gen_range(2..=8);
            let inst = random_instance(&mut rng, n, k);
            let direct = build_pip_potts(&inst, Route::Direct, false).unwrap();
            let locking = build_pip_potts(&inst, Route::Locking, false).unwrap();
            assert!(locking.pip.same_canonical(&direct.pip), "n={n} k={k}");
            assert!(is_elementary(&direct.pip).is_ok());
        }
    }
}
