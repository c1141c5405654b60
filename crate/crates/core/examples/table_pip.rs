//! Builds the PIP of a small k-submodular table from its minimizer set and lists the ideals.
use kpip::enumerate::consistent_ideals;
use kpip::kcore::{brute_minimizer_set, KVector, TableFunction, Value};
use kpip::pip::{ideal_join, pip_from_closed_set, Payload};

fn main() -> kpip::Result<()> {
    // f(x) = 0 on a closed set of S_2^2, +inf elsewhere
    let set: Vec<KVector> = ["00", "10", "20", "01", "11", "21"].iter().map(|d| KVector::from_digits(2, d).unwrap()).collect();
    let f = TableFunction::from_fn(2, 2, |x| if set.contains(x) { Value::int(0) } else { Value::Inf })?;
    assert!(f.is_k_submodular());
    let m = brute_minimizer_set(&f);
    let p = pip_from_closed_set(&m)?;
    for e in 0..p.len() {
        if let Payload::Vector(x) = &p.element(e).payload {
            println!("element {e}: irreducible {x}");
        }
    }
    println!("minimal inconsistent pairs: {:?}", p.min_inconsistent());
    let min = KVector::zeros(2, 2);
    for ideal in consistent_ideals(&p) {
        println!("{ideal:?} -> {}", ideal_join(&p, &ideal, &min));
    }
    Ok(())
}
