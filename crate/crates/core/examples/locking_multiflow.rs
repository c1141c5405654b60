//! Computes a locking multiflow on a Potts network and reads each label's flow value.
use kpip::potts::{alpha_mincut, locking_multiflow, multiflow_capacity_violation, multiflow_value, PottsNetwork};
use kpip::suites::grid_instance;
use kpip::potts::Relaxation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kpip::Result<()> {
    let inst = grid_instance(&mut ChaCha8Rng::seed_from_u64(9), 6, 3, Relaxation::Average);
    let netw = PottsNetwork::build(&inst)?;
    let mf = locking_multiflow(&netw)?;
    assert!(multiflow_capacity_violation(&netw, &mf).is_none());
    println!("{} weighted paths", mf.paths.len());
    for a in 1..=inst.k {
        let cut = alpha_mincut(&netw, a)?;
        println!("label {a}: |f| = {}, min cut = {}", multiflow_value(&mf, a), cut.capacity);
    }
    Ok(())
}
