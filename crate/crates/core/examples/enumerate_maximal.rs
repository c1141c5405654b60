//! Lists the maximal minimizers of a tied Potts instance and counts them in factored form.
use kpip::enumerate::{build_r_poset, count_maximal_minimizers, maximal_minimizers_via_r};
use kpip::potts::{build_pip_potts, Route};
use kpip::suites::star_instance;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kpip::Result<()> {
    let (pp, r) = (0..)
        .map(|seed| {
            let inst = star_instance(&mut ChaCha8Rng::seed_from_u64(seed), 4, 4);
            let pp = build_pip_potts(&inst, Route::Direct, false).expect("valid instance");
            let r = build_r_poset(&pp.pip).expect("layered PIP");
            (pp, r)
        })
        .find(|(_, r)| count_maximal_minimizers(r).total > 2u8.into())
        .expect("some seed has several maximal minimizers");
    for x in maximal_minimizers_via_r(&pp, &r).take(20) {
        println!("{}", x?);
    }
    println!("count {}", count_maximal_minimizers(&r));
    Ok(())
}
