//! Building the PIP of the minimizer set from a minimizing oracle alone.

use rayon::prelude::*;

use crate::kcore::{KVector, MinimizingOracle, Value};
use crate::pip::{differentials_from_irreducibles, Element, Payload, Pip};

#[derive(Clone, Debug)]
pub struct OracleBuildReport {
    pub pip: Pip,
    pub minimum_minimizer: KVector,
    pub min_value: Value,
    pub oracle_calls: usize,
    pub irreducibles: Vec<KVector>,
}

/// Upper bound on oracle calls made by [`build_pip_via_oracle`].
pub fn call_bound(n: usize, k: u8) -> usize {
    n + 1 + k as usize * n * n
}

fn minimum_minimizer_from(f: &dyn MinimizingOracle, fixing: &[Option<u8>], start: (KVector, Value)) -> KVector {
    let (mut x, min) = start;
    let mut fx = fixing.to_vec();
    for i in x.support() {
        if fixing[i].is_some() {
            continue;
        }
        fx[i] = Some(0);
        if f.minimize(&fx).1 == min {
            x = x.with(i, 0);
        }
        fx[i] = None;
    }
    x
}

/// The `⪯`-least minimizer of `f` under `fixing`; pinned coordinates keep their labels.
pub fn get_minimum_minimizer(f: &dyn MinimizingOracle, fixing: &[Option<u8>]) -> KVector {
    let start = f.minimize(fixing);
    minimum_minimizer_from(f, fixing, start)
}

/// All join-irreducible minimizers, sorted by index, plus the minimum minimizer and value.
pub fn get_join_irreducible_minimizers(f: &dyn MinimizingOracle, parallel: bool) -> (Vec<KVector>, KVector, Value) {
    let start = f.minimize(&vec![None; f.n()]);
    let min = start.1;
    let x = minimum_minimizer_from(f, &vec![None; f.n()], start);
    let base: Vec<Option<u8>> = x.labels().iter().map(|&a| if a == 0 { None } else { Some(a) }).collect();
    let tasks: Vec<(usize, u8)> =
        (0..f.n()).filter(|&i| x.get(i) == 0).flat_map(|i| (1..=f.k()).map(move |a| (i, a))).collect();
    let probe = |&(i, a): &(usize, u8)| {
        let mut fx = base.clone();
        fx[i] = Some(a);
        let res = f.minimize(&fx);
        (res.1 == min).then(|| minimum_minimizer_from(f, &fx, res))
    };
    let mut j: Vec<KVector> = if parallel {
        tasks.par_iter().filter_map(probe).collect()
    } else {
        tasks.iter().filter_map(probe).collect()
    };
    j.sort_by_key(|y| y.index());
    j.dedup();
    (j, x, min)
}

/// Order by `⪯`, minimal pairs as cliques over differential-support classes, parts
/// numbered by class.
pub fn pip_from_irreducible_classes(irreducibles: &[KVector], min: &KVector) -> Pip {
    let diffs = differentials_from_irreducibles(irreducibles, min);
    let mut classes: Vec<Vec<usize>> = diffs.iter().map(KVector::support).collect();
    classes.sort();
    classes.dedup();
    let parts: Vec<usize> = diffs.iter().map(|d| classes.binary_search(&d.support()).expect("present")).collect();
    let mut mic = Vec::new();
    for a in 0..irreducibles.len() {
        for b in a + 1..irreducibles.len() {
            if parts[a] == parts[b] {
                mic.push((a, b));
            }
        }
    }
    let elements = irreducibles.iter().map(|x| Element::new(Payload::Vector(x.clone()))).collect();
    let mut pip = Pip::from_order(elements, |a, b| irreducibles[a].leq(&irreducibles[b]), &mic);
    pip.set_parts(&parts);
    pip
}

/// Runs both algorithms and assembles the elementary PIP of `M(f)`.
pub fn build_pip_via_oracle(f: &dyn MinimizingOracle) -> OracleBuildReport {
    build_pip_via_oracle_with(f, false)
}

pub fn build_pip_via_oracle_with(f: &dyn MinimizingOracle, parallel: bool) -> OracleBuildReport {
    let before = f.calls();
    let (irreducibles, minimum_minimizer, min_value) = get_join_irreducible_minimizers(f, parallel);
    let pip = pip_from_irreducible_classes(&irreducibles, &minimum_minimizer);
    OracleBuildReport { pip, minimum_minimizer, min_value, oracle_calls: f.calls() - before, irreducibles }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcore::{TableFunction, TableOracle, TieBreak};

    #[test]
    fn constant_function_gives_unit_vectors() {
        let f = TableFunction::from_fn(3, 2, |_| Value::int(5)).unwrap();
        let o = TableOracle::with_tie_break(&f, TieBreak::Last);
        let r = build_pip_via_oracle(&o);
        assert!(r.minimum_minimizer.is_zero());
        assert_eq!(r.pip.len(), 6);
        assert!(r.irreducibles.iter().all(|x| x.support().len() == 1));
        assert_eq!(r.pip.min_inconsistent().len(), 3);
        assert!(r.oracle_calls <= call_bound(3, 2));
    }

    #[test]
    fn unique_minimizer_is_found() {
        let target = KVector::from_digits(3, "203").unwrap();
        let f = TableFunction::from_fn(3, 3, |x| Value::int(if *x == target { 0 } else { 1 })).unwrap();
        let o = TableOracle::new(&f);
        assert_eq!(get_minimum_minimizer(&o, &[None, None, None]), target);
        assert!(build_pip_via_oracle(&o).pip.is_empty());
    }
}
