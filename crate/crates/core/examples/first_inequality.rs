//! `<J_h w_h>` is positive for each disorder class.

use glasschain::inequalities::{check_first_inequality, Boundary, CheckOptions};
use glasschain::{BondLaw, DisorderModel};

fn main() -> glasschain::Result<()> {
    let models = [
        ("biased +-J", DisorderModel::new(vec![BondLaw::bernoulli(1.0, 0.6)?, BondLaw::bernoulli(2.0, 0.5)?, BondLaw::bernoulli(0.5, 0.9)?])?),
        ("shifted", DisorderModel::uniform(4, BondLaw::shifted_symmetric(0.3, 1.5)?)?),
        ("gaussian", DisorderModel::uniform(4, BondLaw::gaussian(0.2, 1.0)?)?),
    ];
    for (name, m) in &models {
        let v = check_first_inequality(m, 2, &CheckOptions::default())?;
        println!("{name:>10}: {:+.6e} ({}), {}", v.value, v.verdict, v.context);
    }
    let open = CheckOptions {
        boundary: Boundary::Free,
        ..CheckOptions::default()
    };
    let v = check_first_inequality(&models[0].1, 2, &open)?;
    println!("free chain: {:+.6e} ({})", v.value, v.verdict);
    Ok(())
}
