//! Closed-form observables of the periodic chain and the spin-enumeration
//! oracle.
//!
//! With `C_i = cosh J_i`, `S_i = sinh J_i` the normalized partition function
//! is `∏C + ∏S`, and every correlation is a ratio of two such hyperbolic
//! products. Dividing through by `∏C` turns all of them into functions of
//! `t_i = tanh J_i`:
//!
//! ```text
//! R       = ∏_i t_i
//! Z/2^N   = ∏_i C_i · (1 + R)
//! ω_h     = (t_h + ∏_{i≠h} t_i) / (1 + R)
//! ω_hk    = (t_h t_k + ∏_{i≠h,k} t_i) / (1 + R)
//! ω_hk − ω_h ω_k = ∏_{i≠h,k} t_i · sech²J_h · sech²J_k / (1 + R)²
//! ```
//!
//! The last line is the single-product form `∏_{i≠h,k} C_i S_i / Z²`.
//! Products of `t_i` are kept as [`LogSigned`]; `1 + R` and the numerators
//! are formed from `1 - |t|` terms so nothing cancels when every `|J_i|` is
//! large.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logsigned::{ln_cosh, LogSigned};
use crate::reduce::{pairwise_reduce, Accumulate};

/// Largest chain handled by [`brute_force_observables`].
pub const N_MAX_BRUTE_FORCE: usize = 22;

/// One quenched realization: couplings `J_1..J_N` on a ring, bond `i` joining
/// sites `i` and `i+1` and bond `N` joining site `N` back to site 1.
///
/// Couplings are dimensionless (inverse temperature absorbed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CouplingVector {
    couplings: Vec<f64>,
}

impl CouplingVector {
    pub fn new(couplings: Vec<f64>) -> Result<Self> {
        if couplings.len() < 2 {
            return Err(Error::ChainTooShort {
                min: 2,
                got: couplings.len(),
            });
        }
        check_finite(&couplings)?;
        Ok(CouplingVector { couplings })
    }

    /// `N`, the number of bonds (and sites).
    pub fn len(&self) -> usize {
        self.couplings.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.couplings
    }

    /// `J_h` for a 1-based bond index.
    pub fn get(&self, h: usize) -> Result<f64> {
        check_index(h, self.len())?;
        Ok(self.couplings[h - 1])
    }
}

impl TryFrom<Vec<f64>> for CouplingVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        CouplingVector::new(v)
    }
}

impl From<CouplingVector> for Vec<f64> {
    fn from(c: CouplingVector) -> Self {
        c.couplings
    }
}

pub(crate) fn check_finite(couplings: &[f64]) -> Result<()> {
    match couplings.iter().position(|j| !j.is_finite()) {
        Some(i) => Err(Error::NonFiniteCoupling {
            index: i + 1,
            value: couplings[i],
        }),
        None => Ok(()),
    }
}

pub(crate) fn check_index(h: usize, len: usize) -> Result<()> {
    if h == 0 || h > len {
        Err(Error::IndexOutOfRange { index: h, len })
    } else {
        Ok(())
    }
}

pub(crate) fn check_pair(h: usize, k: usize, len: usize) -> Result<()> {
    check_index(h, len)?;
    check_index(k, len)?;
    if h == k {
        return Err(Error::CoincidentPair(h));
    }
    Ok(())
}

/// How an [`ObservableReport`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    BruteForce,
}

/// Two-bond observables for `h < k` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairObservables {
    pub h: usize,
    pub k: usize,
    pub omega_pair: f64,
    pub truncated: f64,
}

/// All observables of one realization.
///
/// `z` is the partition function divided by `2^sites`. `pairs` lists every
/// `h < k` in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableReport {
    pub z: LogSigned,
    pub omega: Vec<f64>,
    pub pairs: Vec<PairObservables>,
    pub method: Method,
}

impl ObservableReport {
    pub fn bonds(&self) -> usize {
        self.omega.len()
    }

    /// `ω_h` for a 1-based bond index.
    pub fn omega(&self, h: usize) -> Option<f64> {
        h.checked_sub(1).and_then(|i| self.omega.get(i)).copied()
    }

    /// Pair entry for `h != k`, in either order.
    pub fn pair(&self, h: usize, k: usize) -> Option<&PairObservables> {
        let n = self.bonds();
        let (h, k) = if h < k { (h, k) } else { (k, h) };
        if h == 0 || h == k || k > n {
            return None;
        }
        self.pairs.get(pair_offset(n, h, k))
    }
}

/// Position of `(h, k)`, `1 <= h < k <= n`, in lexicographic order.
pub(crate) fn pair_offset(n: usize, h: usize, k: usize) -> usize {
    (h - 1) * (2 * n - h) / 2 + (k - h - 1)
}

/// Per-bond quantities shared by every closed form of one realization.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    tanh: Vec<f64>,
    /// `1 - |tanh J_i|`, evaluated without cancellation.
    one_minus: Vec<f64>,
    /// `ln |tanh J_i|`; `-inf` for zero couplings.
    log_tanh: Vec<f64>,
    log_cosh: Vec<f64>,
    /// Prefix sums of `log_tanh` over nonzero couplings.
    prefix_log: Vec<f64>,
    suffix_log: Vec<f64>,
    prefix_zero: Vec<u32>,
    prefix_neg: Vec<u32>,
    /// `1 + ∏ t_i > 0`.
    denom: f64,
}

impl ClosedForm {
    pub fn new(c: &CouplingVector) -> Self {
        let js = c.as_slice();
        let n = js.len();
        let tanh: Vec<f64> = js.iter().map(|j| j.tanh()).collect();
        let one_minus: Vec<f64> = js.iter().map(|&j| one_minus_abs_tanh(j)).collect();
        let log_tanh: Vec<f64> = js.iter().map(|&j| ln_abs_tanh(j)).collect();
        let log_cosh: Vec<f64> = js.iter().map(|&j| ln_cosh(j)).collect();

        let mut prefix_log = vec![0.0; n + 1];
        let mut prefix_zero = vec![0; n + 1];
        let mut prefix_neg = vec![0; n + 1];
        for i in 0..n {
            let finite = if js[i] == 0.0 { 0.0 } else { log_tanh[i] };
            prefix_log[i + 1] = prefix_log[i] + finite;
            prefix_zero[i + 1] = prefix_zero[i] + u32::from(js[i] == 0.0);
            prefix_neg[i + 1] = prefix_neg[i] + u32::from(js[i] < 0.0);
        }
        let mut suffix_log = vec![0.0; n + 1];
        for i in (0..n).rev() {
            let finite = if js[i] == 0.0 { 0.0 } else { log_tanh[i] };
            suffix_log[i] = suffix_log[i + 1] + finite;
        }

        let mut cf = ClosedForm {
            tanh,
            one_minus,
            log_tanh,
            log_cosh,
            prefix_log,
            suffix_log,
            prefix_zero,
            prefix_neg,
            denom: 1.0,
        };
        cf.denom = one_plus(cf.tanh_product(None, None));
        cf
    }

    pub fn len(&self) -> usize {
        self.tanh.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tanh.is_empty()
    }

    /// `∏ tanh J_i` over all bonds except the (0-based) `skip_a`, `skip_b`.
    fn tanh_product(&self, skip_a: Option<usize>, skip_b: Option<usize>) -> LogSigned {
        let n = self.len();
        let mut cuts: Vec<usize> = [skip_a, skip_b].into_iter().flatten().collect();
        cuts.sort_unstable();
        cuts.dedup();

        let mut zeros = self.prefix_zero[n];
        let mut negs = self.prefix_neg[n];
        for &c in &cuts {
            zeros -= self.prefix_zero[c + 1] - self.prefix_zero[c];
            negs -= self.prefix_neg[c + 1] - self.prefix_neg[c];
        }
        if zeros > 0 {
            return LogSigned::ZERO;
        }

        // summed segment by segment so no dominant excluded term is subtracted
        let log = match cuts.as_slice() {
            [] => self.prefix_log[n],
            [a] => self.prefix_log[*a] + self.suffix_log[a + 1],
            [a, b] => {
                let mid: f64 = (a + 1..*b)
                    .filter(|&i| self.tanh[i] != 0.0)
                    .map(|i| self.log_tanh[i])
                    .sum();
                self.prefix_log[*a] + mid + self.suffix_log[b + 1]
            }
            _ => unreachable!(),
        };
        LogSigned::new(if negs % 2 == 0 { 1 } else { -1 }, log)
    }

    /// `∏C_i + ∏S_i`.
    pub fn partition(&self) -> LogSigned {
        let log_c: f64 = self.log_cosh.iter().sum();
        LogSigned::new(1, log_c + self.denom.ln())
    }

    fn omega_at(&self, h: usize) -> f64 {
        let rest = self.tanh_product(Some(h), None);
        let t = self.tanh[h];
        // numerator and denominator carry independent roundings
        (signed_sum(t, self.one_minus[h], rest) / self.denom).clamp(-1.0, 1.0)
    }

    fn pair_at(&self, h: usize, k: usize) -> f64 {
        let rest = self.tanh_product(Some(h), Some(k));
        let t = self.tanh[h] * self.tanh[k];
        let (a, b) = (self.one_minus[h], self.one_minus[k]);
        (signed_sum(t, a + b - a * b, rest) / self.denom).clamp(-1.0, 1.0)
    }

    fn truncated_at(&self, h: usize, k: usize) -> f64 {
        let rest = self.tanh_product(Some(h), Some(k));
        let sech2 = LogSigned::new(1, -2.0 * (self.log_cosh[h] + self.log_cosh[k]));
        let denom2 = LogSigned::new(1, 2.0 * self.denom.ln());
        (rest * sech2 / denom2).to_f64()
    }

    /// `ω_h`, 1-based.
    pub fn omega(&self, h: usize) -> Result<f64> {
        check_index(h, self.len())?;
        Ok(self.omega_at(h - 1))
    }

    /// `ω_hk`, 1-based, `h != k`.
    pub fn omega_pair(&self, h: usize, k: usize) -> Result<f64> {
        check_pair(h, k, self.len())?;
        Ok(self.pair_at(h.min(k) - 1, h.max(k) - 1))
    }

    /// `ω_hk − ω_h ω_k` in single-product form, 1-based, `h != k`.
    pub fn truncated(&self, h: usize, k: usize) -> Result<f64> {
        check_pair(h, k, self.len())?;
        Ok(self.truncated_at(h.min(k) - 1, h.max(k) - 1))
    }

    pub fn report(&self) -> ObservableReport {
        let n = self.len();
        let omega = (0..n).map(|h| self.omega_at(h)).collect();
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for h in 0..n {
            for k in h + 1..n {
                pairs.push(PairObservables {
                    h: h + 1,
                    k: k + 1,
                    omega_pair: self.pair_at(h, k),
                    truncated: self.truncated_at(h, k),
                });
            }
        }
        ObservableReport {
            z: self.partition(),
            omega,
            pairs,
            method: Method::ClosedForm,
        }
    }
}

/// `t + r` where `|t| = 1 - one_minus_t`, computed as a difference of the
/// small complements when the signs disagree.
fn signed_sum(t: f64, one_minus_t: f64, r: LogSigned) -> f64 {
    if r.is_zero() {
        return t;
    }
    let rv = r.to_f64();
    if t == 0.0 || (t > 0.0) == (r.sign() > 0) {
        return t + rv;
    }
    let one_minus_r = -r.log_mag().exp_m1();
    t.signum() * (one_minus_r - one_minus_t)
}

/// `1 + r` for `|r| < 1`.
fn one_plus(r: LogSigned) -> f64 {
    match r.sign() {
        0 => 1.0,
        1 => 1.0 + r.log_mag().exp(),
        _ => -r.log_mag().exp_m1(),
    }
}

fn one_minus_abs_tanh(j: f64) -> f64 {
    let a = j.abs();
    if a < 0.5 {
        1.0 - a.tanh()
    } else {
        2.0 / ((2.0 * a).exp() + 1.0)
    }
}

fn ln_abs_tanh(j: f64) -> f64 {
    let a = j.abs();
    if a == 0.0 {
        f64::NEG_INFINITY
    } else if a < 0.5 {
        a.tanh().ln()
    } else {
        let e = (-2.0 * a).exp();
        (-e).ln_1p() - e.ln_1p()
    }
}

/// `∏cosh J_i + ∏sinh J_i`, the partition function over `2^N`.
pub fn partition_value(c: &CouplingVector) -> LogSigned {
    ClosedForm::new(c).partition()
}

/// `ω_h = ⟨σ_h σ_{h+1}⟩` for 1-based `h`.
pub fn bond_correlation(c: &CouplingVector, h: usize) -> Result<f64> {
    ClosedForm::new(c).omega(h)
}

/// `ω_hk = ⟨σ_h σ_{h+1} σ_k σ_{k+1}⟩` for `h != k`.
pub fn pair_correlation(c: &CouplingVector, h: usize, k: usize) -> Result<f64> {
    ClosedForm::new(c).omega_pair(h, k)
}

/// `ω_hk − ω_h ω_k` for `h != k`.
pub fn truncated_correlation(c: &CouplingVector, h: usize, k: usize) -> Result<f64> {
    ClosedForm::new(c).truncated(h, k)
}

/// Every closed-form observable of `c`.
pub fn closed_form_observables(c: &CouplingVector) -> ObservableReport {
    ClosedForm::new(c).report()
}

/// Weighted bond moments accumulated over spin configurations.
///
/// Layout: `[Σw, Σw·b_1 .. Σw·b_n, Σw·b_h·b_k for h<k]`.
pub(crate) struct Moments(pub Vec<f64>);

impl Accumulate for Moments {
    fn merge(self, right: Self) -> Self {
        Moments(self.0.merge(right.0))
    }
}

impl Moments {
    pub(crate) fn zeros(bonds: usize) -> Self {
        Moments(vec![0.0; 1 + bonds + bonds * bonds.saturating_sub(1) / 2])
    }

    pub(crate) fn add(&mut self, weight: f64, b: &[f64]) {
        let n = b.len();
        let m = &mut self.0;
        m[0] += weight;
        for h in 0..n {
            m[1 + h] += weight * b[h];
        }
        let mut idx = 1 + n;
        for h in 0..n {
            let wb = weight * b[h];
            for k in h + 1..n {
                m[idx] += wb * b[k];
                idx += 1;
            }
        }
    }

    /// Turns the moments into a report. `log_shift` is the log of the factor
    /// divided out of every weight, `log_norm` the log of the number of
    /// configurations summed.
    pub(crate) fn into_report(self, bonds: usize, log_shift: f64, log_norm: f64) -> ObservableReport {
        let m = self.0;
        let total = m[0];
        let omega: Vec<f64> = (0..bonds).map(|h| m[1 + h] / total).collect();
        let mut pairs = Vec::with_capacity(bonds * bonds.saturating_sub(1) / 2);
        let mut idx = 1 + bonds;
        for h in 0..bonds {
            for k in h + 1..bonds {
                let omega_pair = m[idx] / total;
                pairs.push(PairObservables {
                    h: h + 1,
                    k: k + 1,
                    omega_pair,
                    truncated: omega_pair - omega[h] * omega[k],
                });
                idx += 1;
            }
        }
        ObservableReport {
            z: LogSigned::new(1, total.ln() + log_shift - log_norm),
            omega,
            pairs,
            method: Method::BruteForce,
        }
    }
}

/// Observables by direct summation of `exp(Σ J_i σ_i σ_{i+1})` over all
/// `2^N` spin configurations.
///
/// Site 1 is pinned to `+1`; global spin flip leaves every bond product
/// unchanged so this halves the work without changing any ratio.
pub fn brute_force_observables(c: &CouplingVector) -> Result<ObservableReport> {
    let n = c.len();
    if n > N_MAX_BRUTE_FORCE {
        return Err(Error::TooLarge {
            what: "sites",
            max: N_MAX_BRUTE_FORCE,
            got: n,
        });
    }
    let js = c.as_slice();
    let shift: f64 = js.iter().map(|j| j.abs()).sum();
    let configs = 1u64 << (n - 1);

    let leaf = |range: Range<u64>| {
        let mut acc = Moments::zeros(n);
        let mut spins = vec![1.0f64; n];
        let mut bonds = vec![0.0f64; n];
        for m in range {
            for (i, s) in spins.iter_mut().enumerate().skip(1) {
                *s = if (m >> (i - 1)) & 1 == 1 { -1.0 } else { 1.0 };
            }
            let mut energy = 0.0;
            for i in 0..n {
                bonds[i] = spins[i] * spins[(i + 1) % n];
                energy += js[i] * bonds[i];
            }
            acc.add((energy - shift).exp(), &bonds);
        }
        acc
    };
    let moments = pairwise_reduce(0..configs, &leaf);
    Ok(moments.into_report(n, shift, (n as f64 - 1.0) * std::f64::consts::LN_2))
}
