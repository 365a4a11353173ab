//! Exact and sampled quenched averages.

use glasschain::disorder::{exact_average, monte_carlo_average, quenched_average, Sampling};
use glasschain::{bond_correlation, BondLaw, DisorderModel};

fn main() -> glasschain::Result<()> {
    let f = |c: &glasschain::CouplingVector| Ok(c.get(1)? * bond_correlation(c, 1)?);

    let pm = DisorderModel::uniform(3, BondLaw::symmetric(1.0)?)?;
    println!("+-1 chain, N = 3: <J_1 w_1> = {:.12}", exact_average(&pm, f)?);

    // The same model pushed through the sampler.
    let mc = monte_carlo_average(&pm, f, Sampling::new(100_000, 1))?;
    println!("  sampled: {:.6} +- {:.1e}", mc.mean, mc.std_error);

    let gauss = DisorderModel::uniform(6, BondLaw::gaussian(0.5, 1.0)?)?;
    let est = quenched_average(&gauss, f, Sampling::new(200_000, 7))?;
    println!("Gaussian(0.5, 1), N = 6: <J_1 w_1> = {:.5} +- {:.1e}", est.value(), est.std_error());
    Ok(())
}
