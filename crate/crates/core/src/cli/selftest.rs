use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::enumerate::{build_r_poset, consistent_ideals, count_maximal_minimizers, maximal_minimizers_via_r, poset_ideals};
use crate::flownet::pq_poset;
use crate::kcore::{brute_minimizer_set, maximal_elements, KVector, TableOracle};
use crate::netrep::{fixture_corpus, pip_from_network};
use crate::oracle_builder::{build_pip_via_oracle, call_bound};
use crate::pip::{is_elementary, pip_from_closed_set};
use crate::potts::{build_pip_potts, Route};
use crate::suites::{brute_min_cuts, optimal_labelings, potts_suite, random_flow_network, random_table};

type Check = std::result::Result<(), String>;

/// Pass and failure counts per check family, with the first failure messages.
#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    pub seed: u64,
    pub results: BTreeMap<&'static str, (usize, Vec<String>)>,
}

impl SelftestReport {
    pub fn failures(&self) -> usize {
        self.results.values().map(|r| r.1.len()).sum()
    }

    fn record(&mut self, name: &'static str, outcomes: Vec<Check>) {
        let entry = self.results.entry(name).or_default();
        for o in outcomes {
            match o {
                Ok(()) => entry.0 += 1,
                Err(e) => entry.1.push(e),
            }
        }
    }

    pub fn to_json(&self) -> Json {
        let checks: BTreeMap<&str, Json> = self
            .results
            .iter()
            .map(|(name, (ok, bad))| (*name, json!({ "passed": ok, "failed": bad.len(), "errors": bad.iter().take(3).collect::<Vec<_>>() })))
            .collect();
        json!({ "seed": self.seed, "checks": checks, "ok": self.failures() == 0 })
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_all<T: Send>(items: Vec<T>, parallel: bool, f: impl Fn(T) -> Check + Sync + Send) -> Vec<Check> {
    if parallel {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

fn table_check(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, k) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
    let f = random_table(&mut rng, n, k);
    let m = brute_minimizer_set(&f);
    let closed = pip_from_closed_set(&m).map_err(|e| format!("seed {seed}: {e}"))?;
    is_elementary(&closed).map_err(|e| format!("seed {seed}: not elementary: {e:?}"))?;
    let oracle = TableOracle::new(&f);
    let r = build_pip_via_oracle(&oracle);
    ensure(r.pip.same_canonical(&closed), || format!("seed {seed}: oracle PIP differs from closed-set PIP"))?;
    ensure(r.oracle_calls <= call_bound(n, k), || format!("seed {seed}: {} oracle calls", r.oracle_calls))?;
    ensure(r.irreducibles.len() <= k as usize * n, || format!("seed {seed}: too many irreducibles"))
}

fn cut_check(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(2..=10);
    let net = random_flow_network(&mut rng, nv);
    let pq = pq_poset(&net);
    let got: BTreeSet<Vec<usize>> = poset_ideals(&pq.poset).map(|i| pq.tau(&i)).collect();
    let want: BTreeSet<Vec<usize>> = brute_min_cuts(&net).into_iter().collect();
    ensure(got == want, || format!("seed {seed}: minimum cuts differ"))
}

fn potts_check(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = potts_suite(&mut rng, 1).remove(0);
    let direct = build_pip_potts(&inst, Route::Direct, false).map_err(|e| format!("seed {seed}: {e}"))?;
    let locking = build_pip_potts(&inst, Route::Locking, false).map_err(|e| format!("seed {seed}: {e}"))?;
    ensure(locking.pip.same_canonical(&direct.pip), || format!("seed {seed}: routes disagree"))?;
    let brute: BTreeSet<KVector> = brute_minimizer_set(&inst.to_table()).into_iter().collect();
    let got = consistent_ideals(&direct.pip).map(|i| direct.minimizer(&i)).collect::<Result<BTreeSet<_>, _>>();
    ensure(got.as_ref().ok() == Some(&brute), || format!("seed {seed}: minimizer sets differ"))?;
    let r = build_r_poset(&direct.pip).map_err(|e| format!("seed {seed}: {e}"))?;
    let maxes: BTreeSet<KVector> = maximal_elements(&brute.iter().cloned().collect::<Vec<_>>()).into_iter().collect();
    let via = maximal_minimizers_via_r(&direct, &r).collect::<Result<BTreeSet<_>, _>>().map_err(|e| e.to_string())?;
    ensure(via == maxes, || format!("seed {seed}: maximal minimizers differ"))?;
    ensure(count_maximal_minimizers(&r).total == maxes.len().into(), || format!("seed {seed}: count differs"))?;
    let opt = optimal_labelings(&inst);
    ensure(
        brute.iter().all(|x| opt.iter().any(|y| x.support().iter().all(|&i| x.get(i) == y[i]))),
        || format!("seed {seed}: persistency fails"),
    )
}

/// Runs every randomized cross-check `count` times from `seed`.
pub fn run_selftest(seed: u64, count: usize, parallel: bool) -> SelftestReport {
    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_mul(0x9e37_79b9).wrapping_add(i)).collect();
    let mut report = SelftestReport { seed, ..Default::default() };
    report.record("tables", run_all(seeds.clone(), parallel, table_check));
    report.record("min_cuts", run_all(seeds.clone(), parallel, cut_check));
    report.record("potts", run_all(seeds, parallel, potts_check));
    let fixtures = fixture_corpus();
    report.record(
        "network_fixtures",
        run_all(fixtures, parallel, |fx| {
            let f = fx.network.represented_table();
            let np = pip_from_network(&fx.network);
            let via_oracle = build_pip_via_oracle(&TableOracle::new(&f));
            let relabeled = np.pip.with_ideal_payloads(|i| np.minimizer(&fx.network, i).expect("legal cut"));
            ensure(relabeled.same_canonical(&via_oracle.pip), || format!("fixture {}: routes disagree", fx.name))
        }),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selftest_passes() {
        let r = run_selftest(7, 6, false);
        assert_eq!(r.failures(), 0, "{}", r.to_json());
        assert_eq!(r.results.len(), 4);
    }
}
