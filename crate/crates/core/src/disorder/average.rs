//! Quenched averages: exact enumeration of discrete laws and seeded Monte
//! Carlo for everything else.

use std::ops::Range;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::law::BondLaw;
use super::model::DisorderModel;
use crate::chain::CouplingVector;
use crate::error::{invalid, Error, Result};
use crate::reduce::{pairwise_reduce, Accumulate, MeanVar};

/// Largest model enumerated exactly (`2^N` realizations).
pub const N_MAX_DISORDER: usize = 20;

/// Bits of the `t`-th reflected Gray code; bit `i` picks the high atom of
/// bond `i`.
fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

fn realization(tables: &[[(f64, f64); 2]], code: u64, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    let mut prob = 1.0;
    for (i, table) in tables.iter().enumerate() {
        let (value, p) = table[((code >> i) & 1) as usize];
        buf.push(value);
        prob *= p;
    }
    prob
}

fn check_size(n: usize) -> Result<()> {
    if n > N_MAX_DISORDER {
        return Err(Error::TooLarge {
            what: "bonds for exact disorder enumeration",
            max: N_MAX_DISORDER,
            got: n,
        });
    }
    Ok(())
}

/// All `2^N` realizations of a discrete model, in Gray-code order.
pub struct Realizations {
    tables: Vec<[(f64, f64); 2]>,
    next: u64,
    end: u64,
}

impl Iterator for Realizations {
    type Item = (CouplingVector, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.end {
            return None;
        }
        let mut buf = Vec::with_capacity(self.tables.len());
        let prob = realization(&self.tables, gray(self.next), &mut buf);
        self.next += 1;
        let c = CouplingVector::new(buf).expect("laws hold finite values");
        Some((c, prob))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Realizations {}

/// Materializes the quenched measure of a discrete, single-kind model.
pub fn enumerate_realizations(m: &DisorderModel) -> Result<Realizations> {
    check_size(m.len())?;
    let tables = m.discrete_outcomes()?;
    Ok(Realizations {
        end: 1u64 << tables.len(),
        tables,
        next: 0,
    })
}

/// `Σ prob · f(J)` over two-atom tables, any mix of kinds. Zero-probability
/// realizations are skipped so `f` never sees them.
pub(crate) fn enumerate_reduce<A, F>(tables: &[[(f64, f64); 2]], zero: impl Fn() -> A + Sync, f: &F) -> Result<A>
where
    A: Accumulate,
    F: Fn(&CouplingVector, f64, &mut A) -> Result<()> + Sync,
{
    check_size(tables.len())?;
    let leaf = |range: Range<u64>| -> Result<A> {
        let mut acc = zero();
        let mut buf = Vec::with_capacity(tables.len());
        for t in range {
            let prob = realization(tables, gray(t), &mut buf);
            if prob == 0.0 {
                continue;
            }
            let c = CouplingVector::new(std::mem::take(&mut buf))?;
            f(&c, prob, &mut acc)?;
            buf = Vec::from(c);
        }
        Ok(acc)
    };
    pairwise_reduce(0..1u64 << tables.len(), &leaf)
}

/// Exact `⟨f⟩` over a discrete model.
pub fn exact_average<F>(m: &DisorderModel, f: F) -> Result<f64>
where
    F: Fn(&CouplingVector) -> Result<f64> + Sync,
{
    let tables = m.discrete_outcomes()?;
    enumerate_reduce(&tables, || 0.0, &|c, p, acc: &mut f64| {
        *acc += p * f(c)?;
        Ok(())
    })
}

/// Exact averages of several observables at once; `f` writes `len` values.
pub fn exact_average_many<F>(m: &DisorderModel, len: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(&CouplingVector, &mut [f64]) -> Result<()> + Sync,
{
    let tables = m.discrete_outcomes()?;
    exact_average_tables(&tables, len, f)
}

pub(crate) fn exact_average_tables<F>(tables: &[[(f64, f64); 2]], len: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(&CouplingVector, &mut [f64]) -> Result<()> + Sync,
{
    enumerate_reduce(
        tables,
        || vec![0.0; 2 * len],
        &|c, p, acc: &mut Vec<f64>| {
            let (sum, scratch) = acc.split_at_mut(len);
            f(c, scratch)?;
            for (s, v) in sum.iter_mut().zip(scratch.iter()) {
                *s += p * v;
            }
            Ok(())
        },
    )
    .map(|mut v| {
        v.truncate(len);
        v
    })
}

/// Which bonds get the mirrored uniform in an antithetic pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Antithetic {
    /// Plain sampling, one evaluation per draw.
    Off,
    /// Mirror only this bond (1-based): for a law symmetric about zero the
    /// pair differs only in the sign of `J_h`.
    Bond(usize),
    /// Mirror every bond.
    All,
}

/// Settings for [`monte_carlo_average`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sampling {
    pub n_samples: u64,
    pub seed: u64,
    pub antithetic: Antithetic,
}

impl Sampling {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        Sampling {
            n_samples,
            seed,
            antithetic: Antithetic::Bond(1),
        }
    }

    pub fn with_antithetic(mut self, antithetic: Antithetic) -> Self {
        self.antithetic = antithetic;
        self
    }
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Independent draws (each antithetic pair counts once).
    pub samples: u64,
}

/// Smallest accepted sample count.
pub const MIN_SAMPLES: u64 = 100;

/// Uniform on the open interval (0, 1).
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Monte Carlo `⟨f⟩` by inverse-CDF sampling.
///
/// Draw `i` uses ChaCha stream `i` of the seed, so every draw is a pure
/// function of `(seed, i)` and the result does not depend on how the draws
/// are split across workers. With antithetic pairing each draw averages `f`
/// at `u` and at the mirrored `1 − u` on the selected bonds.
pub fn monte_carlo_average<F>(m: &DisorderModel, f: F, sampling: Sampling) -> Result<McEstimate>
where
    F: Fn(&CouplingVector) -> Result<f64> + Sync,
{
    if sampling.n_samples < MIN_SAMPLES {
        return Err(invalid(
            "n_samples",
            format!("{} is below the minimum of {MIN_SAMPLES}", sampling.n_samples),
        ));
    }
    let n = m.len();
    let mirrored: Vec<bool> = match sampling.antithetic {
        Antithetic::Off => vec![false; n],
        Antithetic::All => vec![true; n],
        Antithetic::Bond(h) => {
            crate::chain::check_index(h, n)?;
            (1..=n).map(|i| i == h).collect()
        }
    };
    let paired = mirrored.iter().any(|&b| b);
    let key = ChaCha8Rng::seed_from_u64(sampling.seed).get_seed();
    let laws: &[BondLaw] = m.laws();

    let leaf = |range: Range<u64>| -> Result<MeanVar> {
        let mut acc = MeanVar::EMPTY;
        let mut us = vec![0.0; n];
        for i in range {
            let mut rng = ChaCha8Rng::from_seed(key);
            rng.set_stream(i);
            for u in us.iter_mut() {
                *u = open_unit(&mut rng);
            }
            let draw = |flip: bool| -> Result<f64> {
                let js = laws
                    .iter()
                    .zip(&us)
                    .zip(&mirrored)
                    .map(|((law, &u), &mir)| law.quantile(if flip && mir { 1.0 - u } else { u }))
                    .collect();
                f(&CouplingVector::new(js)?)
            };
            let y = if paired {
                0.5 * (draw(false)? + draw(true)?)
            } else {
                draw(false)?
            };
            acc.push(y);
        }
        Ok(acc)
    };
    let acc = pairwise_reduce(0..sampling.n_samples, &leaf)?;
    Ok(McEstimate {
        mean: acc.mean,
        std_error: acc.std_error(),
        samples: acc.count,
    })
}

/// Result of [`quenched_average`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Estimate {
    Exact { value: f64 },
    Sampled(McEstimate),
}

impl Estimate {
    pub fn value(&self) -> f64 {
        match self {
            Estimate::Exact { value } => *value,
            Estimate::Sampled(mc) => mc.mean,
        }
    }

    /// Standard error; zero for exact values.
    pub fn std_error(&self) -> f64 {
        match self {
            Estimate::Exact { .. } => 0.0,
            Estimate::Sampled(mc) => mc.std_error,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Estimate::Exact { .. })
    }
}

/// `⟨f⟩` over the disorder: exact for discrete models, sampled with
/// `sampling` when any law is continuous.
pub fn quenched_average<F>(m: &DisorderModel, f: F, sampling: Sampling) -> Result<Estimate>
where
    F: Fn(&CouplingVector) -> Result<f64> + Sync,
{
    if m.is_discrete() {
        exact_average(m, f).map(|value| Estimate::Exact { value })
    } else {
        monte_carlo_average(m, f, sampling).map(Estimate::Sampled)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::with_workers;

    fn sym(n: usize, j: f64) -> DisorderModel {
        DisorderModel::uniform(n, BondLaw::symmetric(j).unwrap()).unwrap()
    }

    #[test]
    fn two_bond_symmetric_has_four_equal_realizations() {
        let all: Vec<_> = enumerate_realizations(&sym(2, 1.0)).unwrap().collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|(_, p)| *p == 0.25));
        let mut seen: Vec<Vec<f64>> = all.iter().map(|(c, _)| c.as_slice().to_vec()).collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        seen.dedup();
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn gray_order_changes_one_bond_at_a_time() {
        let all: Vec<_> = enumerate_realizations(&sym(4, 1.0)).unwrap().collect();
        for w in all.windows(2) {
            let diff = w[0]
                .0
                .as_slice()
                .iter()
                .zip(w[1].0.as_slice())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn product_probabilities() {
        let m = DisorderModel::uniform(3, BondLaw::bernoulli(1.0, 0.6).unwrap()).unwrap();
        let all_plus = enumerate_realizations(&m)
            .unwrap()
            .find(|(c, _)| c.as_slice().iter().all(|&j| j > 0.0))
            .unwrap();
        assert!((all_plus.1 - 0.216).abs() < 1e-15);
        let total: f64 = enumerate_realizations(&m).unwrap().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn size_and_kind_errors() {
        assert!(matches!(enumerate_realizations(&sym(21, 1.0)), Err(Error::TooLarge { .. })));
        let g = DisorderModel::uniform(3, BondLaw::gaussian(0.0, 1.0).unwrap()).unwrap();
        assert!(enumerate_realizations(&g).is_err());
        assert!(exact_average(&g, |_| Ok(1.0)).is_err());
    }

    #[test]
    fn constant_observable() {
        let m = sym(5, 0.7);
        assert!((exact_average(&m, |_| Ok(1.0)).unwrap() - 1.0).abs() < 1e-15);
        let g = DisorderModel::uniform(3, BondLaw::gaussian(0.2, 1.0).unwrap()).unwrap();
        let mc = monte_carlo_average(&g, |_| Ok(2.5), Sampling::new(1000, 3)).unwrap();
        assert_eq!(mc.mean, 2.5);
        assert_eq!(mc.std_error, 0.0);
    }

    #[test]
    fn errors_from_the_observable_propagate() {
        let m = sym(3, 1.0);
        let r = exact_average(&m, |c| crate::chain::bond_correlation(c, 9));
        assert!(matches!(r, Err(Error::IndexOutOfRange { index: 9, .. })));
    }

    #[test]
    fn sample_count_validated() {
        let g = DisorderModel::uniform(3, BondLaw::gaussian(0.0, 1.0).unwrap()).unwrap();
        assert!(monte_carlo_average(&g, |_| Ok(0.0), Sampling::new(99, 1)).is_err());
        let bad = Sampling::new(1000, 1).with_antithetic(Antithetic::Bond(4));
        assert!(monte_carlo_average(&g, |_| Ok(0.0), bad).is_err());
    }

    #[test]
    fn sampling_is_reproducible_across_workers() {
        let g = DisorderModel::uniform(4, BondLaw::gaussian(0.3, 1.0).unwrap()).unwrap();
        let f = |c: &CouplingVector| crate::chain::bond_correlation(c, 2);
        let one = with_workers(Some(1), || monte_carlo_average(&g, f, Sampling::new(5000, 42))).unwrap();
        let many = with_workers(Some(3), || monte_carlo_average(&g, f, Sampling::new(5000, 42))).unwrap();
        assert_eq!(one.mean.to_bits(), many.mean.to_bits());
        assert_eq!(one.std_error.to_bits(), many.std_error.to_bits());
        let other = monte_carlo_average(&g, f, Sampling::new(5000, 43)).unwrap();
        assert_ne!(one.mean, other.mean);
    }

    #[test]
    fn mean_of_the_coupling_itself() {
        let u = DisorderModel::uniform(2, BondLaw::uniform(-1.0, 3.0).unwrap()).unwrap();
        let mc = monte_carlo_average(&u, |c| c.get(1), Sampling::new(20_000, 7)).unwrap();
        // antithetic pairs on a uniform law cancel exactly around the mean
        assert!((mc.mean - 1.0).abs() < 1e-12, "{mc:?}");
    }
}
