//! Strong couplings on long chains: the partition function overflows `f64`
//! but correlations stay finite and bounded.

use glasschain::{ClosedForm, CouplingVector, LogSigned};

fn main() -> glasschain::Result<()> {
    let mut js = vec![30.0; 500];
    let cf = ClosedForm::new(&CouplingVector::new(js.clone())?);
    let z = cf.partition();
    println!("N = 500, J = 30: ln(Z/2^N) = {:.6}, Z as f64 = {}", z.log_mag(), z.to_f64());
    println!("  w_1 = {}, truncated(1, 250) = {:e}", cf.omega(1)?, cf.truncated(1, 250)?);

    // One antiferromagnetic bond frustrates the loop.
    js[249] = -30.0;
    let cf = ClosedForm::new(&CouplingVector::new(js)?);
    println!("frustrated: w_1 = {}, w_250 = {}", cf.omega(1)?, cf.omega(250)?);
    println!("  truncated(1, 250) = {}", cf.truncated(1, 250)?);

    let a = LogSigned::cosh(800.0);
    let b = LogSigned::sinh(800.0);
    println!("cosh 800 - sinh 800 = {}", a.sub(b).to_f64());
    Ok(())
}
