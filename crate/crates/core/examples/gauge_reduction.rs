//! Averages of gauge-invariant quantities from reduced disorder.

use glasschain::disorder::{exact_average, gauge_reduce_ii, gauge_reduce_iii};
use glasschain::{truncated_correlation, BondLaw, CouplingVector, DisorderModel};

fn main() -> glasschain::Result<()> {
    let f = |c: &CouplingVector| Ok(c.get(1)? * c.get(3)? * truncated_correlation(c, 1, 3)?);

    let m = DisorderModel::new(vec![
        BondLaw::bernoulli(1.0, 0.9)?,
        BondLaw::bernoulli(0.5, 0.7)?,
        BondLaw::bernoulli(2.0, 0.6)?,
        BondLaw::bernoulli(1.2, 0.8)?,
    ])?;
    let r = gauge_reduce_iii(&m)?;
    println!("alpha = {:.4}, P = {:.4}, Q = {:.4}", r.alpha(), r.p(), r.q());
    println!("  two realizations: {:+.12}", r.average(f)?);
    println!("  all 16:           {:+.12}", exact_average(&m, f)?);

    let m = DisorderModel::new(vec![
        BondLaw::shifted_symmetric(0.0, 1.0)?,
        BondLaw::shifted_symmetric(0.5, 2.0)?,
        BondLaw::shifted_symmetric(1.0, 0.5)?,
    ])?;
    let r = gauge_reduce_ii(&m, 1)?;
    println!("positive values {:?}", r.positive_values());
    println!("  reduced: {:+.12}", r.average(f)?);
    println!("  full:    {:+.12}", exact_average(&m, f)?);
    Ok(())
}
