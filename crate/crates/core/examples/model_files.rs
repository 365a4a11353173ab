//! Reading and writing model files, then checking the loaded model.

use glasschain::config::{dump_model, parse_model};
use glasschain::inequalities::{check_second_inequality, CheckOptions};

const TEXT: &str = r#"
N = 4
seed = 11

[bond.all]
kind = "bernoulli"
J = 1.0
p = 0.5

[bond.2]
kind = "bernoulli"
J = 0.75
p = 0.5
"#;

fn main() -> glasschain::Result<()> {
    let file = parse_model(TEXT)?;
    let canonical = dump_model(&file.model, file.seed);
    print!("{canonical}");
    assert_eq!(parse_model(&canonical)?, file);

    let v = check_second_inequality(&file.model, 1, 3, &CheckOptions::default())?;
    println!("\n<J_1 J_3 (w_13 - w_1 w_3)> = {:+.9} ({})", v.value, v.verdict);

    match parse_model("N = 2\n[bond.all]\nkind = \"bernoulli\"\nJ = 1\nprob = 0.5\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
