//! Gauge reductions of the disorder.
//!
//! Relabelling `τ_j = s_j σ_j` with `s_j = ∏_{i<j} sgn J_i` maps a
//! realization `J` onto couplings `|J_1|, …, |J_{N−1}|, J_N ∏_i sgn J_i`
//! without changing `J_h ω_h` or `J_h J_k (ω_hk − ω_h ω_k)`. Averages of such
//! gauge-invariant observables therefore only see the law of the single
//! frustration sign `∏ sgn J_i`.

use super::average::exact_average_tables;
use super::law::BondLaw;
use super::model::DisorderModel;
use crate::chain::{check_index, CouplingVector};
use crate::error::{Error, Result};

/// Bernoulli model collapsed onto two realizations: bonds `1..N−1` fixed at
/// `+J^(i)` and bond `N` at `±J^(N)` with probabilities `P`, `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeReducedModel {
    magnitudes: Vec<f64>,
    alpha: f64,
}

impl GaugeReducedModel {
    /// `J^(1)..J^(N)`.
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// `∏(p_i − q_i)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `P = (1 + α)/2`, probability that bond `N` is `+J^(N)`.
    pub fn p(&self) -> f64 {
        0.5 * (1.0 + self.alpha)
    }

    /// `Q = (1 − α)/2`.
    pub fn q(&self) -> f64 {
        0.5 * (1.0 - self.alpha)
    }

    /// The frustrated-free and frustrated realizations with their weights.
    pub fn realizations(&self) -> [(CouplingVector, f64); 2] {
        let plus = self.magnitudes.clone();
        let mut minus = self.magnitudes.clone();
        *minus.last_mut().unwrap() *= -1.0;
        [
            (CouplingVector::new(plus).expect("validated magnitudes"), self.p()),
            (CouplingVector::new(minus).expect("validated magnitudes"), self.q()),
        ]
    }

    /// `P f(K₊) + Q f(K₋)` for a gauge-invariant `f`.
    pub fn average<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&CouplingVector) -> Result<f64>,
    {
        let [(plus, p), (minus, q)] = self.realizations();
        let mut total = 0.0;
        if p > 0.0 {
            total += p * f(&plus)?;
        }
        if q > 0.0 {
            total += q * f(&minus)?;
        }
        Ok(total)
    }
}

/// Reduces an all-Bernoulli model to [`GaugeReducedModel`].
pub fn gauge_reduce_iii(m: &DisorderModel) -> Result<GaugeReducedModel> {
    let alpha = m.alpha()?;
    let magnitudes = m
        .laws()
        .iter()
        .map(|law| match law {
            BondLaw::Bernoulli { magnitude, .. } => *magnitude,
            _ => unreachable!("alpha() accepted the model"),
        })
        .collect();
    Ok(GaugeReducedModel { magnitudes, alpha })
}

/// Shifted-symmetric model with a zero-mean bond `h`, reduced to positive
/// couplings everywhere except `h`.
///
/// Bond `h` is `±a_h` with probability 1/2 each; every other bond `i` takes
/// `a_i = μ_i + J^(i)` or `|μ_i − J^(i)|` with probability 1/2 each. For wide
/// bonds (`J^(i) > μ_i`) the second value is `b_i = J^(i) − μ_i`; narrow
/// bonds never change sign and keep both of their non-negative values.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedGaugeModel {
    signed_bond: usize,
    signed_magnitude: f64,
    positive_values: Vec<(f64, f64)>,
}

impl ShiftedGaugeModel {
    /// 1-based index of the bond that keeps a random sign.
    pub fn signed_bond(&self) -> usize {
        self.signed_bond
    }

    /// `a_h`.
    pub fn signed_magnitude(&self) -> f64 {
        self.signed_magnitude
    }

    /// `(a_i, |μ_i − J^(i)|)` per bond; the entry of the signed bond is
    /// `(a_h, a_h)`.
    pub fn positive_values(&self) -> &[(f64, f64)] {
        &self.positive_values
    }

    fn tables(&self) -> Vec<[(f64, f64); 2]> {
        self.positive_values
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                if i + 1 == self.signed_bond {
                    [(-self.signed_magnitude, 0.5), (self.signed_magnitude, 0.5)]
                } else {
                    [(b, 0.5), (a, 0.5)]
                }
            })
            .collect()
    }

    /// Exact average of a gauge-invariant `f` over the `2^N` reduced
    /// realizations.
    pub fn average<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&CouplingVector) -> Result<f64> + Sync,
    {
        let out = exact_average_tables(&self.tables(), 1, |c, out| {
            out[0] = f(c)?;
            Ok(())
        })?;
        Ok(out[0])
    }
}

/// Lemma-style reduction of a discrete shifted-symmetric model around the
/// zero-mean bond `h`.
pub fn gauge_reduce_ii(m: &DisorderModel, h: usize) -> Result<ShiftedGaugeModel> {
    check_index(h, m.len())?;
    let mut positive_values = Vec::with_capacity(m.len());
    for (i, law) in m.laws().iter().enumerate() {
        match *law {
            BondLaw::ShiftedSymmetric { mean, half_width } => {
                positive_values.push((mean + half_width, (mean - half_width).abs()));
            }
            BondLaw::Continuous(_) => return Err(Error::ContinuousLaw(i + 1)),
            ref other => {
                return Err(Error::WrongLawKind {
                    expected: "shifted_symmetric",
                    index: i + 1,
                    found: other.kind(),
                })
            }
        }
    }
    let BondLaw::ShiftedSymmetric { mean, half_width } = m.laws()[h - 1] else {
        unreachable!()
    };
    if mean != 0.0 {
        return Err(Error::NonZeroMean { index: h, mean });
    }
    positive_values[h - 1] = (half_width, half_width);
    Ok(ShiftedGaugeModel {
        signed_bond: h,
        signed_magnitude: half_width,
        positive_values,
    })
}
