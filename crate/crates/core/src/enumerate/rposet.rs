use std::collections::BTreeMap;

use super::{count_poset_ideals, poset_ideals, FactoredCount};
use crate::error::{Error, Result};
use crate::kcore::KVector;
use crate::pip::{Element, Payload, Pip};
use crate::potts::PottsPip;

/// Shared cut elements of a layered PIP, one block per label pair `α < β`.
///
/// Element `r` of `poset` stands for `(X, α)` (index `lower[r]` in the layered PIP)
/// and `(X, β)` (index `upper[r]`); its order is the order of layer `α`.
#[derive(Clone, Debug)]
pub struct RPoset {
    pub poset: Pip,
    pub tags: Vec<(u8, u8)>,
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
    /// Layered elements whose vertex set belongs to a single layer.
    pub fixed: Vec<usize>,
    /// Vertex sets shared by three or more layers: a maximal ideal takes exactly one
    /// element of each group. Such a set is isolated in the order.
    pub choices: Vec<Vec<usize>>,
}

fn layered(p: &Pip, e: usize) -> Result<(u8, &[usize])> {
    match &p.element(e).payload {
        Payload::Layered { label, vertices } => Ok((*label, vertices)),
        _ => Err(Error::validation("the R-poset needs a layered PIP")),
    }
}

pub fn build_r_poset(p: &Pip) -> Result<RPoset> {
    let mut by_set: BTreeMap<&[usize], Vec<(u8, usize)>> = BTreeMap::new();
    for e in 0..p.len() {
        let (label, vs) = layered(p, e)?;
        by_set.entry(vs).or_default().push((label, e));
    }
    let mut fixed = Vec::new();
    let mut pairs: Vec<((u8, u8), usize, usize)> = Vec::new();
    let mut choices = Vec::new();
    for members in by_set.into_values() {
        match members.as_slice() {
            [(_, e)] => fixed.push(*e),
            [(a, ea), (b, eb)] => {
                let ((a, ea), (b, eb)) = if a < b { ((*a, *ea), (*b, *eb)) } else { ((*b, *eb), (*a, *ea)) };
                if a == b {
                    return Err(Error::internal(format!("layer {a} repeats a vertex set")));
                }
                pairs.push(((a, b), ea, eb));
            }
            more => {
                let group: Vec<usize> = more.iter().map(|m| m.1).collect();
                if group.iter().any(|&e| p.down(e).count_ones(..) > 1 || p.up(e).count_ones(..) > 1) {
                    return Err(Error::internal(format!("a vertex set shared by {} layers is comparable to others", group.len())));
                }
                choices.push(group);
            }
        }
    }
    pairs.sort_unstable();
    fixed.sort_unstable();
    let tags: Vec<(u8, u8)> = pairs.iter().map(|x| x.0).collect();
    let lower: Vec<usize> = pairs.iter().map(|x| x.1).collect();
    let upper: Vec<usize> = pairs.iter().map(|x| x.2).collect();
    let elements = lower.iter().map(|&e| p.element(e).clone()).map(|e| Element::new(e.payload)).collect();
    let poset = Pip::from_order(elements, |a, b| tags[a] == tags[b] && p.leq(lower[a], lower[b]), &[]);
    Ok(RPoset { poset, tags, lower, upper, fixed, choices })
}

impl RPoset {
    /// `J̄`: all fixed elements, `(X, α)` for `X ∈ J`, `(X, β)` for `X ∉ J` and element
    /// `picks[g]` of each choice group, sorted.
    pub fn lift(&self, ideal: &[usize], picks: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.poset.len()];
        ideal.iter().for_each(|&r| inside[r] = true);
        let mut out = self.fixed.clone();
        out.extend(self.choices.iter().zip(picks).map(|(g, &i)| g[i]));
        for r in 0..self.poset.len() {
            out.push(if inside[r] { self.lower[r] } else { self.upper[r] });
        }
        out.sort_unstable();
        out
    }

    pub fn blocks(&self) -> BTreeMap<(u8, u8), Vec<usize>> {
        let mut out: BTreeMap<(u8, u8), Vec<usize>> = BTreeMap::new();
        for (r, &t) in self.tags.iter().enumerate() {
            out.entry(t).or_default().push(r);
        }
        out
    }

    /// Every maximal consistent ideal of the layered PIP, once each.
    pub fn maximal_ideals(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        poset_ideals(&self.poset).flat_map(move |j| {
            picks(&self.choices).into_iter().map(move |p| self.lift(&j, &p))
        })
    }
}

fn picks(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    groups.iter().fold(vec![Vec::new()], |acc, g| {
        acc.iter().flat_map(|p| (0..g.len()).map(move |i| p.iter().copied().chain([i]).collect())).collect()
    })
}

/// Every maximal minimizer of a Potts instance, one per ideal of the R-poset and choice.
pub fn maximal_minimizers_via_r<'a>(pp: &'a PottsPip, r: &'a RPoset) -> impl Iterator<Item = Result<KVector>> + 'a {
    r.maximal_ideals().map(move |i| pp.minimizer(&i))
}

/// The number of maximal minimizers, factored over connected components of `R` and choice groups.
pub fn count_maximal_minimizers(r: &RPoset) -> FactoredCount {
    let mut c = count_poset_ideals(&r.poset);
    for g in &r.choices {
        c.multiply(g.len().into());
    }
    c
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::enumerate::maximal_consistent_ideals;
    use crate::kcore::{brute_minimizer_set, maximal_elements, Rat};
    use crate::potts::{build_pip_potts, random_instance, PottsInstance, Route};

    #[test]
    fn unique_minimizer_has_empty_r() {
        let r = |v| Rat::from_integer(v);
        let inst = PottsInstance::new(1, 2, vec![], vec![vec![r(0), r(-1), r(1)]]).unwrap();
        let pp = build_pip_potts(&inst, Route::Direct, false).unwrap();
        let rp = build_r_poset(&pp.pip).unwrap();
        assert!(rp.poset.is_empty());
        assert_eq!(maximal_minimizers_via_r(&pp, &rp).count(), 1);
        assert_eq!(count_maximal_minimizers(&rp).total, BigUint::from(1u8));
    }

    #[test]
    fn shared_two_chain_gives_three_maximal_minimizers() {
        // two vertices tied between labels 1 and 2; the strong edge makes {0} ⊂ {0,1}-style chains
        let r = |v| Rat::from_integer(v);
        let inst = PottsInstance::new(
            2,
            2,
            vec![(0, 1, r(1))],
            vec![vec![r(0), r(-1), r(1)], vec![r(0), r(1), r(-1)]],
        )
        .unwrap();
        let pp = build_pip_potts(&inst, Route::Direct, false).unwrap();
        let rp = build_r_poset(&pp.pip).unwrap();
        let brute = maximal_elements(&brute_minimizer_set(&inst.to_table()));
        let got: BTreeSet<KVector> = maximal_minimizers_via_r(&pp, &rp).map(|x| x.unwrap()).collect();
        assert_eq!(got, brute.into_iter().collect());
    }

    #[test]
    fn label_tied_everywhere_becomes_a_choice_group() {
        let r = |v| Rat::from_integer(v);
        let inst = PottsInstance::new(2, 3, vec![(0, 1, r(1))], vec![vec![r(0); 4]; 2]).unwrap();
        let pp = build_pip_potts(&inst, Route::Direct, false).unwrap();
        let rp = build_r_poset(&pp.pip).unwrap();
        assert_eq!(rp.choices.len(), 1);
        assert_eq!(count_maximal_minimizers(&rp).total, BigUint::from(3u8));
        let got: BTreeSet<KVector> = maximal_minimizers_via_r(&pp, &rp).map(|x| x.unwrap()).collect();
        assert_eq!(got, maximal_elements(&brute_minimizer_set(&inst.to_table())).into_iter().collect());
    }

    #[test]
    fn random_instances_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5251);
        for _ in 0..150 {
            let n = rng.gen_range(1..=5);
            let k = rng.gen_range(2..=4);
            let inst = random_instance(&mut rng, n, k);
            let pp = build_pip_potts(&inst, Route::Direct, false).unwrap();
            let rp = build_r_poset(&pp.pip).unwrap();
            let brute: BTreeSet<KVector> = maximal_elements(&brute_minimizer_set(&inst.to_table())).into_iter().collect();
            let via: Vec<KVector> = maximal_minimizers_via_r(&pp, &rp).map(|x| x.unwrap()).collect();
            assert_eq!(via.len(), brute.len());
            assert_eq!(via.iter().cloned().collect::<BTreeSet<_>>(), brute);
            assert_eq!(count_maximal_minimizers(&rp).total, BigUint::from(brute.len()));
            let lifted: BTreeSet<Vec<usize>> = rp.maximal_ideals().collect();
            let maximal: BTreeSet<Vec<usize>> = maximal_consistent_ideals(&pp.pip).collect();
            assert_eq!(lifted, maximal);
        }
    }
}
