//! Prints a Graphviz rendering of a Potts PIP.
use kpip::pip::pip_to_dot;
use kpip::potts::{build_pip_potts, Route};
use kpip::suites::grid_instance;
use kpip::potts::Relaxation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kpip::Result<()> {
    let pp = (0..)
        .map(|seed| grid_instance(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3, Relaxation::Average))
        .map(|inst| build_pip_potts(&inst, Route::Direct, false))
        .find(|pp| pp.as_ref().map_or(true, |p| p.pip.len() >= 4 && !p.pip.min_inconsistent().is_empty()))
        .expect("some seed has inconsistent pairs")?;
    print!("{}", pip_to_dot(&pp.pip));
    Ok(())
}
