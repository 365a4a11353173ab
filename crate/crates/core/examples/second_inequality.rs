//! Sign of the averaged truncated correlation.

use glasschain::inequalities::{check_second_inequality, Boundary, CheckOptions};
use glasschain::{BondLaw, DisorderModel};

fn main() -> glasschain::Result<()> {
    let opts = CheckOptions::default();
    let sym = DisorderModel::uniform(3, BondLaw::symmetric(1.0)?)?;
    let ferro = DisorderModel::uniform(3, BondLaw::bernoulli(1.0, 1.0)?)?;
    let one_sym = DisorderModel::new(vec![
        BondLaw::bernoulli(1.0, 0.5)?,
        BondLaw::bernoulli(1.0, 0.95)?,
        BondLaw::bernoulli(2.0, 0.95)?,
        BondLaw::bernoulli(0.7, 0.95)?,
    ])?;
    for (name, m) in [("symmetric", &sym), ("ferromagnet", &ferro), ("one symmetric bond", &one_sym)] {
        let v = check_second_inequality(m, 2, 3, &opts)?;
        println!("{name:>20}: {:+.6e} {} (expected {:?})", v.value, v.verdict, v.expected);
    }
    let free = CheckOptions {
        boundary: Boundary::Free,
        ..opts
    };
    let v = check_second_inequality(&sym, 1, 2, &free)?;
    println!("{:>20}: {:+.1e} {}", "free chain", v.value, v.verdict);
    Ok(())
}
