//! Loop-free graphs: the partition function factorizes and bond pairs
//! decouple.

use glasschain::TreeGraph;

fn main() -> glasschain::Result<()> {
    let chain = TreeGraph::open_chain(&[1.0, -2.0, 0.5])?;
    let r = glasschain::free_boundary_observables(&chain);
    println!("open chain: ln Z/2^N = {:.6}, w = {:?}", r.z.log_mag(), r.omega);

    // Star with a tail: 1 is the hub.
    let parents = [None, Some(1), Some(1), Some(1), Some(4)];
    let tree = TreeGraph::from_parents(&parents, &[0.4, -1.1, 2.0, 0.9])?;
    let r = glasschain::free_boundary_observables(&tree);
    for p in &r.pairs {
        println!("bonds {} {}: w_hk = {:+.6}, truncated = {}", p.h, p.k, p.omega_pair, p.truncated);
    }
    Ok(())
}
