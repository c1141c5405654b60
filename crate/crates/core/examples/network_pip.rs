//! Builds PIPs from the grouped network fixtures and checks them against brute force.
use kpip::kcore::brute_minimizer_set;
use kpip::netrep::{fixture_corpus, pip_from_network};
use kpip::pip::check_ideal_isomorphism;

fn main() {
    for fx in fixture_corpus() {
        let g = &fx.network;
        let np = pip_from_network(g);
        let m = brute_minimizer_set(&g.represented_table());
        let ok = check_ideal_isomorphism(&np.pip, &m, |i| np.minimizer(g, i).expect("legal cut")).is_ok();
        println!("{:<24} {} elements, {} minimizers, isomorphic: {ok}", fx.name, np.pip.len(), m.len());
    }
}
