//! Model files.
//!
//! A model file is TOML with a bond count, an optional seed and one section
//! per bond; `[bond.all]` supplies the law of every bond without its own
//! section:
//!
//! ```toml
//! N = 3
//! seed = 7
//!
//! [bond.all]
//! kind = "bernoulli"
//! J = 1.0
//! p = 0.5
//!
//! [bond.3]
//! kind = "bernoulli"
//! J = 2.0
//! p = 0.9
//! ```
//!
//! | kind                | keys             |
//! |---------------------|------------------|
//! | `bernoulli`         | `J`, `p`         |
//! | `shifted_symmetric` | `mu`, `J`        |
//! | `two_point`         | `high`, `low`, `p` |
//! | `gaussian`          | `mu`, `sigma`    |
//! | `uniform`           | `min`, `max`     |
//! | `tabulated`         | `x`, `density`   |
//!
//! Unknown or missing keys are errors naming the field.

use std::fmt::Write as _;
use std::path::Path;

use toml::{Table, Value};

use crate::disorder::{BondLaw, ContinuousLaw, DisorderModel};
use crate::error::{Error, Result};

/// Parsed model file.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub model: DisorderModel,
    pub seed: Option<u64>,
}

fn err(field: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("`{field}`: {reason}"))
}

fn number(field: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        other => Err(err(field, format!("expected a number, found {}", other.type_str()))),
    }
}

fn numbers(field: &str, v: &Value) -> Result<Vec<f64>> {
    match v {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| number(&format!("{field}[{i}]"), x))
            .collect(),
        other => Err(err(field, format!("expected an array, found {}", other.type_str()))),
    }
}

fn parse_law(section: &str, table: &Table) -> Result<BondLaw> {
    let kind_field = format!("{section}.kind");
    let kind = match table.get("kind") {
        Some(Value::String(s)) => s.as_str(),
        Some(other) => return Err(err(&kind_field, format!("expected a string, found {}", other.type_str()))),
        None => return Err(err(&kind_field, "missing")),
    };
    let keys: &[&str] = match kind {
        "bernoulli" => &["J", "p"],
        "shifted_symmetric" => &["mu", "J"],
        "two_point" => &["high", "low", "p"],
        "gaussian" => &["mu", "sigma"],
        "uniform" => &["min", "max"],
        "tabulated" => &["x", "density"],
        other => return Err(err(&kind_field, format!("unknown kind \"{other}\""))),
    };
    for key in table.keys() {
        if key != "kind" && !keys.contains(&key.as_str()) {
            return Err(err(
                &format!("{section}.{key}"),
                format!("unknown key for kind \"{kind}\" (expected {})", keys.join(", ")),
            ));
        }
    }
    let get = |key: &str| {
        table
            .get(key)
            .ok_or_else(|| err(&format!("{section}.{key}"), "missing"))
    };
    let num = |key: &str| get(key).and_then(|v| number(&format!("{section}.{key}"), v));
    let law = match kind {
        "bernoulli" => BondLaw::bernoulli(num("J")?, num("p")?),
        "shifted_symmetric" => BondLaw::shifted_symmetric(num("mu")?, num("J")?),
        "two_point" => BondLaw::two_point(num("high")?, num("low")?, num("p")?),
        "gaussian" => BondLaw::gaussian(num("mu")?, num("sigma")?),
        "uniform" => BondLaw::uniform(num("min")?, num("max")?),
        _ => BondLaw::tabulated(
            numbers(&format!("{section}.x"), get("x")?)?,
            numbers(&format!("{section}.density"), get("density")?)?,
        ),
    };
    law.map_err(|e| err(section, e))
}

/// Parses model-file text.
pub fn parse_model(text: &str) -> Result<ModelFile> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
    for key in doc.keys() {
        if !matches!(key.as_str(), "N" | "seed" | "bond") {
            return Err(err(key, "unknown key (expected N, seed, bond)"));
        }
    }
    let n = match doc.get("N") {
        Some(Value::Integer(n)) if *n >= 2 => *n as usize,
        Some(Value::Integer(n)) => return Err(err("N", format!("{n} bonds; need at least 2"))),
        Some(other) => return Err(err("N", format!("expected an integer, found {}", other.type_str()))),
        None => return Err(err("N", "missing")),
    };
    let seed = match doc.get("seed") {
        Some(Value::Integer(s)) if *s >= 0 => Some(*s as u64),
        Some(Value::Integer(s)) => return Err(err("seed", format!("{s} is negative"))),
        Some(other) => return Err(err("seed", format!("expected an integer, found {}", other.type_str()))),
        None => None,
    };
    let bonds = match doc.get("bond") {
        Some(Value::Table(t)) => t,
        Some(other) => return Err(err("bond", format!("expected sections, found {}", other.type_str()))),
        None => return Err(err("bond", "missing")),
    };
    let mut all = None;
    let mut laws: Vec<Option<BondLaw>> = vec![None; n];
    for (key, value) in bonds {
        let section = format!("bond.{key}");
        let Value::Table(table) = value else {
            return Err(err(&section, "expected a section"));
        };
        let law = parse_law(&section, table)?;
        if key == "all" {
            all = Some(law);
            continue;
        }
        match key.parse::<usize>() {
            Ok(i) if (1..=n).contains(&i) => laws[i - 1] = Some(law),
            _ => return Err(err(&section, format!("bond index must be 1..={n} or \"all\""))),
        }
    }
    let laws = laws
        .into_iter()
        .enumerate()
        .map(|(i, law)| {
            law.or_else(|| all.clone())
                .ok_or_else(|| err(&format!("bond.{}", i + 1), "missing and no [bond.all]"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelFile {
        model: DisorderModel::new(laws)?,
        seed,
    })
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

/// Shortest representation that reparses to the same `f64`, always a
/// TOML float.
fn float(x: f64) -> String {
    let s = format!("{x:?}");
    if s.contains(['.', 'e', 'i', 'N']) {
        s
    } else {
        s + ".0"
    }
}

fn float_array(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| float(x)).collect();
    format!("[{}]", items.join(", "))
}

/// Canonical text of a model: every bond written out explicitly.
pub fn dump_model(model: &DisorderModel, seed: Option<u64>) -> String {
    let mut out = String::new();
    writeln!(out, "N = {}", model.len()).unwrap();
    if let Some(seed) = seed {
        writeln!(out, "seed = {seed}").unwrap();
    }
    for (i, law) in model.laws().iter().enumerate() {
        writeln!(out, "\n[bond.{}]", i + 1).unwrap();
        writeln!(out, "kind = \"{}\"", law.kind()).unwrap();
        let fields: Vec<(&str, String)> = match law {
            BondLaw::Bernoulli { magnitude, p_plus } => vec![("J", float(*magnitude)), ("p", float(*p_plus))],
            BondLaw::ShiftedSymmetric { mean, half_width } => vec![("mu", float(*mean)), ("J", float(*half_width))],
            BondLaw::TwoPoint { high, low, p_high } => {
                vec![("high", float(*high)), ("low", float(*low)), ("p", float(*p_high))]
            }
            BondLaw::Continuous(ContinuousLaw::Gaussian { mean, sd }) => vec![("mu", float(*mean)), ("sigma", float(*sd))],
            BondLaw::Continuous(ContinuousLaw::Uniform { min, max }) => vec![("min", float(*min)), ("max", float(*max))],
            BondLaw::Continuous(ContinuousLaw::Tabulated(t)) => {
                vec![("x", float_array(t.knots())), ("density", float_array(t.density_values()))]
            }
        };
        for (key, value) in fields {
            writeln!(out, "{key} = {value}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
N = 3
seed = 7

[bond.all]
kind = "bernoulli"
J = 1
p = 0.5

[bond.3]
kind = "bernoulli"
J = 2.0
p = 0.9
"#;

    #[test]
    fn all_section_fills_missing_bonds() {
        let f = parse_model(SAMPLE).unwrap();
        assert_eq!(f.seed, Some(7));
        assert_eq!(f.model.laws()[0], BondLaw::symmetric(1.0).unwrap());
        assert_eq!(f.model.laws()[2], BondLaw::bernoulli(2.0, 0.9).unwrap());
    }

    #[test]
    fn dump_round_trips() {
        let laws = vec![
            BondLaw::bernoulli(0.1 + 0.2, 1.0 / 3.0).unwrap(),
            BondLaw::shifted_symmetric(0.0, 1e-7).unwrap(),
            BondLaw::two_point(2.5, -1e20, 0.25).unwrap(),
            BondLaw::gaussian(0.3, 1.7).unwrap(),
            BondLaw::uniform(-1.0, 2.0).unwrap(),
            BondLaw::tabulated(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap(),
        ];
        let model = DisorderModel::new(laws).unwrap();
        let text = dump_model(&model, Some(3));
        let back = parse_model(&text).unwrap();
        assert_eq!(back.model, model);
        assert_eq!(back.seed, Some(3));
        assert_eq!(dump_model(&back.model, back.seed), text);
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            ("N = 3\n[bond.all]\nkind = \"bernoulli\"\nJ = 1\np = 0.5\nq = 0.5\n", "bond.all.q"),
            ("N = 3\n[bond.all]\nkind = \"bernoulli\"\nJ = 1\n", "bond.all.p"),
            ("N = 3\n[bond.1]\nkind = \"bernoulli\"\nJ = 1\np = 0.5\n", "bond.2"),
            ("N = 2\n[bond.4]\nkind = \"bernoulli\"\nJ = 1\np = 0.5\n", "bond.4"),
            ("N = 2\nbeta = 1\n", "beta"),
            ("N = \"x\"\n", "N"),
            ("N = 2\n[bond.all]\nkind = \"cauchy\"\n", "bond.all.kind"),
            ("N = 2\n[bond.all]\nkind = \"bernoulli\"\nJ = 1\np = 1.5\n", "bond.all"),
            ("N = 2\nseed = -1\n[bond.all]\nkind = \"bernoulli\"\nJ = 1\np = 0.5\n", "seed"),
        ];
        for (text, field) in cases {
            let msg = parse_model(text).unwrap_err().to_string();
            assert!(msg.contains(&format!("`{field}`")), "{msg} should name {field}");
        }
    }

    #[test]
    fn syntax_errors_are_config_errors() {
        assert!(matches!(parse_model("N = = 3"), Err(Error::Config(_))));
    }
}
