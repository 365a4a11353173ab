//! Closed-form observables of a periodic chain, checked against spin
//! enumeration.

use glasschain::{brute_force_observables, closed_form_observables, CouplingVector};

fn main() -> glasschain::Result<()> {
    for js in [vec![1.0, 1.0, 1.0], vec![1.0, 1.0, -1.0], vec![0.3, -2.0, 1.5, 0.7, -0.1]] {
        let c = CouplingVector::new(js.clone())?;
        let cf = closed_form_observables(&c);
        let bf = brute_force_observables(&c)?;
        println!("J = {js:?}");
        println!("  Z/2^N        {:.12}  (enumerated {:.12})", cf.z.to_f64(), bf.z.to_f64());
        for h in 1..=c.len() {
            println!("  w_{h}          {:+.12}  ({:+.12})", cf.omega(h).unwrap(), bf.omega(h).unwrap());
        }
        let (p, q) = (cf.pair(1, 2).unwrap(), bf.pair(1, 2).unwrap());
        println!("  w_12 - w1 w2 {:+.12}  ({:+.12})", p.truncated, q.truncated);
    }
    Ok(())
}
