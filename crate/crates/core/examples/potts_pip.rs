//! Builds the PIP of a Potts energy's k-submodular relaxation on a small grid with ties.
use kpip::potts::{build_pip_potts, Relaxation, Route};
use kpip::suites::grid_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kpip::Result<()> {
    let (inst, pp) = (0..)
        .map(|seed| {
            let inst = grid_instance(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3, Relaxation::Average);
            let pp = build_pip_potts(&inst, Route::Direct, false).expect("valid instance");
            (inst, pp)
        })
        .find(|(_, pp)| pp.pip.len() >= 4)
        .expect("some seed has ties");
    println!("{} vertices, {} labels, {} edges", inst.n, inst.k, inst.edges.len());
    println!("min value {}", pp.min_value());
    println!("minimum minimizer {}", pp.minimum_minimizer());
    for e in 0..pp.pip.len() {
        println!("element {e}: {:?}", pp.pip.element(e).payload);
    }
    println!("covers: {:?}", pp.pip.covers());
    println!("minimal inconsistent pairs: {:?}", pp.pip.min_inconsistent());
    Ok(())
}
