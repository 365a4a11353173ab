//! A single chord across a `+-J` ring can make the averaged truncated
//! correlation positive.

use glasschain::explorer::{search_chain_control, search_chord_violation, describe};

fn main() -> glasschain::Result<()> {
    let scan = search_chord_violation(5, (1, 3), &[0.5, 1.0, 2.0])?;
    println!("{}: {} points, {} records", scan.search, scan.points, scan.records.len());
    if let Some(r) = scan.records.iter().max_by(|a, b| a.value.total_cmp(&b.value)) {
        println!("largest: {}", describe(r));
        println!("replayed: {:e}", r.replay()?);
        println!("{}", r.to_json_line());
    }
    let control = search_chain_control(5, &[0.5, 1.0, 2.0])?;
    print!("{}", control.to_json_lines());
    Ok(())
}
