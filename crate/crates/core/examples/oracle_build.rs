//! Runs the oracle-driven builder on a random table and reports the call count.
use kpip::kcore::TableOracle;
use kpip::oracle_builder::{build_pip_via_oracle, call_bound};
use kpip::pip::pip_to_json;
use kpip::suites::random_table;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let (f, r) = (0..)
        .map(|seed| {
            let f = random_table(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
            let r = build_pip_via_oracle(&TableOracle::new(&f));
            (f, r)
        })
        .find(|(_, r)| r.pip.len() >= 4)
        .expect("some seed has ties");
    assert!(f.is_k_submodular());
    println!("min value {}", r.min_value.to_canonical());
    println!("minimum minimizer {}", r.minimum_minimizer);
    println!("{} oracle calls (bound {})", r.oracle_calls, call_bound(4, 3));
    println!("{}", serde_json::to_string_pretty(&pip_to_json(&r.pip)).unwrap());
}
