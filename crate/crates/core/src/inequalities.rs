//! Sign checks of the quenched bond correlation and truncated two-bond
//! correlation, the sign function `g` and its critical curve.
//!
//! For a Bernoulli model with magnitudes `J^(i)`, `C_i = cosh J^(i)`,
//! `S_i = sinh J^(i)` and bias product `α = ∏(p_i − q_i)`, the averaged
//! truncated correlation has the sign of
//!
//! ```text
//! g(α) = α (∏C_i² + ∏S_i²) − 2 ∏C_i S_i
//! ```
//!
//! which vanishes at `α* = 2∏C_iS_i / (∏C_i² + ∏S_i²)`.

use std::fmt;

use serde::Serialize;

use crate::chain::{brute_force_observables, check_index, check_pair, ClosedForm, CouplingVector};
use crate::disorder::{exact_average_many, monte_carlo_average, Antithetic, DisorderModel, Sampling};
use crate::error::{invalid, Error, Result};
use crate::logsigned::{ln_abs_sinh, ln_cosh, LogSigned};
use crate::tree::{free_boundary_observables, TreeGraph};

/// Default relative tolerance of exact sign verdicts.
pub const DEFAULT_REL_TOLERANCE: f64 = 1e-12;

/// Standard errors a sampled value must clear to count as nonzero.
pub const DEFAULT_SIGMAS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Zero => "zero",
        }
    }

    /// `zero` iff `|value| <= tolerance`.
    pub fn classify(value: f64, tolerance: f64) -> Sign {
        if value.abs() <= tolerance {
            Sign::Zero
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a sign check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignVerdict {
    pub value: f64,
    pub tolerance: f64,
    pub verdict: Sign,
    /// Sign guaranteed by the model's hypotheses, when one is.
    pub expected: Option<Sign>,
    /// Standard error of a sampled value; zero when exact.
    pub std_error: f64,
    pub context: String,
}

impl SignVerdict {
    fn new(value: f64, tolerance: f64, expected: Option<Sign>, std_error: f64, context: String) -> Self {
        SignVerdict {
            value,
            tolerance,
            verdict: Sign::classify(value, tolerance),
            expected,
            std_error,
            context,
        }
    }

    /// Verdict strictly opposite to the expected sign.
    pub fn is_violation(&self) -> bool {
        match (self.expected, self.verdict) {
            (Some(Sign::Positive), Sign::Negative) | (Some(Sign::Negative), Sign::Positive) => true,
            (Some(Sign::Zero), Sign::Positive | Sign::Negative) => true,
            _ => false,
        }
    }
}

/// Boundary condition of the chain the model lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
    /// Open chain with one bond per law (`N + 1` sites).
    Free,
}

/// Tolerances and sampling settings for the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Exact verdicts use `rel_tolerance × ⟨|f|⟩`.
    pub rel_tolerance: f64,
    /// Sampled verdicts use `sigmas × stderr`.
    pub sigmas: f64,
    pub sampling: Sampling,
    pub boundary: Boundary,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            rel_tolerance: DEFAULT_REL_TOLERANCE,
            sigmas: DEFAULT_SIGMAS,
            sampling: Sampling::new(100_000, 0),
            boundary: Boundary::Periodic,
        }
    }
}

fn bond_term(c: &CouplingVector, h: usize, boundary: Boundary) -> Result<f64> {
    let j = c.get(h)?;
    let omega = match boundary {
        Boundary::Periodic => ClosedForm::new(c).omega(h)?,
        Boundary::Free => free_boundary_observables(&TreeGraph::open_chain(c.as_slice())?)
            .omega(h)
            .expect("index checked"),
    };
    Ok(j * omega)
}

fn pair_term(c: &CouplingVector, h: usize, k: usize, boundary: Boundary) -> Result<f64> {
    let jj = c.get(h)? * c.get(k)?;
    let trunc = match boundary {
        Boundary::Periodic => ClosedForm::new(c).truncated(h, k)?,
        Boundary::Free => {
            check_pair(h, k, c.len())?;
            free_boundary_observables(&TreeGraph::open_chain(c.as_slice())?)
                .pair(h, k)
                .expect("pair checked")
                .truncated
        }
    };
    Ok(jj * trunc)
}

/// Averages `f`, exactly or by sampling, and classifies the sign.
fn verdict_of<F>(m: &DisorderModel, f: F, opts: &CheckOptions, expected: Option<Sign>, context: String) -> Result<SignVerdict>
where
    F: Fn(&CouplingVector) -> Result<f64> + Sync,
{
    if m.is_discrete() {
        let avg = exact_average_many(m, 2, |c, out| {
            let v = f(c)?;
            out[0] = v;
            out[1] = v.abs();
            Ok(())
        })?;
        Ok(SignVerdict::new(avg[0], opts.rel_tolerance * avg[1], expected, 0.0, context))
    } else {
        let mc = monte_carlo_average(m, f, opts.sampling)?;
        Ok(SignVerdict::new(
            mc.mean,
            opts.sigmas * mc.std_error,
            expected,
            mc.std_error,
            format!("{context}; {} samples", mc.samples),
        ))
    }
}

fn with_bond(mut sampling: Sampling, h: usize) -> Sampling {
    if sampling.antithetic != Antithetic::Off {
        sampling.antithetic = Antithetic::Bond(h);
    }
    sampling
}

/// Sign of `⟨J_h ω_h⟩`, expected positive for systems I, II and III.
pub fn check_first_inequality(m: &DisorderModel, h: usize, opts: &CheckOptions) -> Result<SignVerdict> {
    check_index(h, m.len())?;
    let classes = m.classify();
    if !classes.any() {
        return Err(Error::Unclassified);
    }
    let opts = CheckOptions {
        sampling: with_bond(opts.sampling, h),
        ..*opts
    };
    let context = format!(
        "<J_{h} w_{h}>, N = {}, system {}, {:?} boundary",
        m.len(),
        classes.labels().join("/"),
        opts.boundary
    );
    verdict_of(m, |c| bond_term(c, h, opts.boundary), &opts, Some(Sign::Positive), context)
}

/// Which hypotheses for a negative averaged truncated correlation hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SecondHypotheses {
    /// System I or III with vanishing sign-bias product.
    pub stated: bool,
    /// At least one bond law is symmetric under `J → −J`.
    pub symmetric_bond: bool,
}

pub fn second_inequality_hypotheses(m: &DisorderModel) -> SecondHypotheses {
    let classes = m.classify();
    let bias: f64 = m.laws().iter().map(|l| l.sign_bias()).product();
    SecondHypotheses {
        stated: (classes.system_i || classes.system_iii) && bias == 0.0,
        symmetric_bond: !m.symmetric_bonds().is_empty(),
    }
}

/// Sign of `⟨J_h J_k (ω_hk − ω_h ω_k)⟩`.
///
/// Expected negative when some bond law is symmetric, positive when no
/// coupling can be negative, zero on a free chain; otherwise no sign is
/// claimed.
pub fn check_second_inequality(m: &DisorderModel, h: usize, k: usize, opts: &CheckOptions) -> Result<SignVerdict> {
    check_pair(h, k, m.len())?;
    let hyp = second_inequality_hypotheses(m);
    let expected = match opts.boundary {
        Boundary::Free => Some(Sign::Zero),
        Boundary::Periodic if hyp.stated || hyp.symmetric_bond => Some(Sign::Negative),
        Boundary::Periodic if m.is_ferromagnetic() => Some(Sign::Positive),
        Boundary::Periodic => None,
    };
    let opts = CheckOptions {
        sampling: with_bond(opts.sampling, h),
        ..*opts
    };
    let context = format!(
        "<J_{h} J_{k} (w_{h}{k} - w_{h} w_{k})>, N = {}, {:?} boundary, stated hypothesis: {}, symmetric bond: {}",
        m.len(),
        opts.boundary,
        hyp.stated,
        hyp.symmetric_bond
    );
    verdict_of(m, |c| pair_term(c, h, k, opts.boundary), &opts, expected, context)
}

fn check_magnitudes(magnitudes: &[f64]) -> Result<()> {
    if magnitudes.len() < 2 {
        return Err(Error::ChainTooShort {
            min: 2,
            got: magnitudes.len(),
        });
    }
    for (i, &j) in magnitudes.iter().enumerate() {
        if !(j.is_finite() && j > 0.0) {
            return Err(invalid("magnitudes", format!("J^({}) = {j} must be positive and finite", i + 1)));
        }
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid("alpha", format!("{alpha} outside [0, 1]")))
    }
}

/// `(∏C², ∏S², ∏CS)` as log-domain values.
fn hyperbolic_products(magnitudes: &[f64]) -> (LogSigned, LogSigned, LogSigned) {
    let log_c: f64 = magnitudes.iter().map(|&j| ln_cosh(j)).sum();
    let log_s: f64 = magnitudes.iter().map(|&j| ln_abs_sinh(j)).sum();
    (
        LogSigned::new(1, 2.0 * log_c),
        LogSigned::new(1, 2.0 * log_s),
        LogSigned::new(1, log_c + log_s),
    )
}

/// `g(α) = α(∏C² + ∏S²) − 2∏CS` in log-domain form.
pub fn g_function_log(alpha: f64, magnitudes: &[f64]) -> Result<LogSigned> {
    check_alpha(alpha)?;
    check_magnitudes(magnitudes)?;
    let (c2, s2, cs) = hyperbolic_products(magnitudes);
    let two_cs = cs * LogSigned::from_f64(2.0);
    Ok((LogSigned::from_f64(alpha) * c2.add(s2)).sub(two_cs))
}

/// `g(α) = α(∏C² + ∏S²) − 2∏CS`.
pub fn g_function(alpha: f64, magnitudes: &[f64]) -> Result<f64> {
    g_function_log(alpha, magnitudes).map(LogSigned::to_f64)
}

/// `∏C² + ∏S²`, the slope of `g` in `α`.
pub fn g_slope(magnitudes: &[f64]) -> Result<f64> {
    check_magnitudes(magnitudes)?;
    let (c2, s2, _) = hyperbolic_products(magnitudes);
    Ok(c2.add(s2).to_f64())
}

/// `α* = 2∏CS / (∏C² + ∏S²)`, the root of `g`.
pub fn critical_alpha(magnitudes: &[f64]) -> Result<f64> {
    check_magnitudes(magnitudes)?;
    let (c2, s2, cs) = hyperbolic_products(magnitudes);
    Ok((cs * LogSigned::from_f64(2.0)).ratio(c2.add(s2)))
}

/// One point of the critical curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub j_l: f64,
    pub alpha_star: f64,
}

/// `α*` as a function of `J^(l)`, all other magnitudes held fixed.
pub fn critical_alpha_curve(magnitudes: &[f64], l: usize, j_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    check_magnitudes(magnitudes)?;
    check_index(l, magnitudes.len())?;
    if j_grid.is_empty() {
        return Err(invalid("j_grid", "empty"));
    }
    if let Some(bad) = j_grid.iter().find(|j| !(j.is_finite() && **j > 0.0)) {
        return Err(invalid("j_grid", format!("value {bad} is not positive and finite")));
    }
    let mut mags = magnitudes.to_vec();
    j_grid
        .iter()
        .map(|&j| {
            mags[l - 1] = j;
            Ok(CurvePoint {
                j_l: j,
                alpha_star: critical_alpha(&mags)?,
            })
        })
        .collect()
}

/// `⟨J_h J_k (ω_hk − ω_h ω_k)⟩` and `⟨|…|⟩` on the uniform-`α` Bernoulli
/// model, by exact enumeration. The brute-force flag swaps the closed forms
/// for spin enumeration.
pub fn enumerated_truncated_average(
    magnitudes: &[f64],
    alpha: f64,
    h: usize,
    k: usize,
    brute_force: bool,
) -> Result<(f64, f64)> {
    check_magnitudes(magnitudes)?;
    let m = DisorderModel::uniform_alpha(magnitudes, alpha)?;
    check_pair(h, k, m.len())?;
    let avg = exact_average_many(&m, 2, |c, out| {
        let trunc = if brute_force {
            brute_force_observables(c)?
                .pair(h, k)
                .expect("pair checked")
                .truncated
        } else {
            ClosedForm::new(c).truncated(h, k)?
        };
        let v = c.get(h)? * c.get(k)? * trunc;
        out[0] = v;
        out[1] = v.abs();
        Ok(())
    })?;
    Ok((avg[0], avg[1]))
}

/// Root in `α ∈ [0, 1]` of the spin-enumerated averaged truncated
/// correlation, by bisection to width `tol`.
///
/// Uses neither `g` nor the closed-form correlations.
pub fn critical_alpha_by_bisection(magnitudes: &[f64], h: usize, k: usize, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("{tol} must be positive")));
    }
    let f = |alpha: f64| enumerated_truncated_average(magnitudes, alpha, h, k, true).map(|v| v.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(invalid(
            "magnitudes",
            format!("average does not change sign on [0, 1] ({f_lo:e} .. {f_hi:e})"),
        ));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One row of an `α` scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub average: f64,
    pub g: f64,
    pub verdict: Sign,
}

/// Averaged truncated correlation and `g` on an increasing `α` grid.
pub fn alpha_scan(magnitudes: &[f64], h: usize, k: usize, alpha_grid: &[f64], rel_tolerance: f64) -> Result<Vec<ScanRow>> {
    check_magnitudes(magnitudes)?;
    check_pair(h, k, magnitudes.len())?;
    if alpha_grid.is_empty() {
        return Err(invalid("alpha_grid", "empty"));
    }
    for &a in alpha_grid {
        check_alpha(a)?;
    }
    if alpha_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("alpha_grid", "must be strictly increasing"));
    }
    alpha_grid
        .iter()
        .map(|&alpha| {
            let (average, scale) = enumerated_truncated_average(magnitudes, alpha, h, k, false)?;
            Ok(ScanRow {
                alpha,
                average,
                g: g_function(alpha, magnitudes)?,
                verdict: Sign::classify(average, rel_tolerance * scale),
            })
        })
        .collect()
}

/// First place where a scanned series fails to increase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    /// `"g"` or `"average"`.
    pub series: &'static str,
    /// Index of the grid point that does not exceed its predecessor.
    pub index: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub rows: Vec<ScanRow>,
    pub g_increasing: bool,
    pub average_increasing: bool,
    pub first_violation: Option<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn monotone(&self) -> bool {
        self.g_increasing && self.average_increasing
    }

    /// Grid interval `(α_i, α_{i+1})` where the average changes sign.
    pub fn sign_change(&self) -> Option<(f64, f64)> {
        self.rows
            .windows(2)
            .find(|w| w[0].average < 0.0 && w[1].average >= 0.0)
            .map(|w| (w[0].alpha, w[1].alpha))
    }
}

/// Checks that both `g` and the enumerated `⟨J_1 J_2 (ω_12 − ω_1 ω_2)⟩` are
/// strictly increasing along `alpha_grid`.
pub fn monotonicity_check(magnitudes: &[f64], alpha_grid: &[f64]) -> Result<MonotonicityReport> {
    let rows = alpha_scan(magnitudes, 1, 2, alpha_grid, DEFAULT_REL_TOLERANCE)?;
    let first_bad = |get: fn(&ScanRow) -> f64| rows.windows(2).position(|w| !(get(&w[1]) > get(&w[0])));
    let g_bad = first_bad(|r| r.g);
    let avg_bad = first_bad(|r| r.average);
    let first_violation = [("g", g_bad), ("average", avg_bad)]
        .into_iter()
        .filter_map(|(series, i)| i.map(|i| (series, i + 1)))
        .min_by_key(|&(_, i)| i)
        .map(|(series, index)| MonotonicityViolation {
            series,
            index,
            alpha: rows[index].alpha,
        });
    Ok(MonotonicityReport {
        g_increasing: g_bad.is_none(),
        average_increasing: avg_bad.is_none(),
        first_violation,
        rows,
    })
}
