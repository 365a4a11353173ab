//! Zero-mean but asymmetric disorder on a plain ring.

use glasschain::explorer::{describe, search_asymmetric_violation};
use glasschain::BondLaw;

fn main() -> glasschain::Result<()> {
    let law = BondLaw::zero_mean_two_point(0.25, 2.0)?;
    println!("law {:?}, mean {:e}", law.outcomes().unwrap(), law.mean());

    let grid = [(0.25, 2.0), (2.0, 0.25), (1.0, 1.0)];
    for n in 3..=5 {
        let scan = search_asymmetric_violation(n, &grid)?;
        println!("N = {n}: {} records, max average {:e}", scan.records.len(), scan.max_value);
        if let Some(r) = scan.records.first() {
            println!("  {}", describe(r));
        }
    }
    Ok(())
}
