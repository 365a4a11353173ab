//! The bias `alpha*` at which the averaged truncated correlation turns
//! positive.

use glasschain::format::write_curve_csv;
use glasschain::inequalities::{critical_alpha, critical_alpha_by_bisection, critical_alpha_curve, monotonicity_check};

fn main() -> glasschain::Result<()> {
    let mags = [1.0, 1.0, 1.0];
    let a = critical_alpha(&mags)?;
    let b = critical_alpha_by_bisection(&mags, 1, 2, 1e-10)?;
    println!("alpha* = {a:.9} (bisection on enumerated average: {b:.9})");

    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let rep = monotonicity_check(&mags, &grid)?;
    println!("monotone in alpha: {}, sign change in {:?}", rep.monotone(), rep.sign_change());

    let js: Vec<f64> = (1..=8).map(|i| 0.25 * i as f64).collect();
    let curve = critical_alpha_curve(&mags, 1, &js)?;
    write_curve_csv(std::io::stdout().lock(), &curve)?;
    Ok(())
}
