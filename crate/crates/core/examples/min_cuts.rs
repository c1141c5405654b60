//! Enumerates every minimum s-t cut of a small network through its Picard–Queyranne poset.
use kpip::enumerate::poset_ideals;
use kpip::flownet::{max_flow, pq_poset, FlowNetwork};

fn main() -> kpip::Result<()> {
    let mut net = FlowNetwork::new(6, 0, 5)?;
    for (u, v, c) in [(0, 1, 1), (1, 2, 1), (2, 5, 1), (0, 3, 2), (3, 4, 2), (4, 5, 2), (1, 3, 1)] {
        net.add_arc(u, v, c)?;
    }
    println!("max flow {}", max_flow(&net).value);
    let pq = pq_poset(&net);
    for ideal in poset_ideals(&pq.poset) {
        let cut = pq.tau(&ideal);
        println!("source side {cut:?}");
    }
    Ok(())
}
