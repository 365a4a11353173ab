//! Locale-free number formatting and the CSV writers.

use std::io::{self, Write};

use crate::inequalities::{CurvePoint, ScanRow};

/// Significant digits of printed numbers.
pub const DIGITS: usize = 15;

/// `printf("%.15g")`: shortest of fixed and exponent notation, trailing
/// zeros removed, `.` as decimal separator.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    // Rounding to DIGITS significant digits fixes the exponent.
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CURVE_HEADER: &str = "j_l,alpha_star";
pub const SCAN_HEADER: &str = "alpha,average,g,verdict";

pub fn write_curve_csv<W: Write>(mut w: W, points: &[CurvePoint]) -> io::Result<()> {
    writeln!(w, "{CURVE_HEADER}")?;
    for p in points {
        writeln!(w, "{},{}", fmt_g(p.j_l), fmt_g(p.alpha_star))?;
    }
    Ok(())
}

pub fn write_scan_csv<W: Write>(mut w: W, rows: &[ScanRow]) -> io::Result<()> {
    writeln!(w, "{SCAN_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", fmt_g(r.alpha), fmt_g(r.average), fmt_g(r.g), r.verdict)?;
    }
    Ok(())
}
