//! Single-bond coupling distributions.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erf;

use crate::error::{Error, Result};

/// Law of one coupling `J_i`.
///
/// The discrete kinds have exactly two atoms, listed low then high by
/// [`BondLaw::outcomes`].
#[derive(Debug, Clone, PartialEq)]
pub enum BondLaw {
    /// `±magnitude` with probabilities `p_plus`, `1 - p_plus`.
    Bernoulli { magnitude: f64, p_plus: f64 },
    /// `mean ± half_width`, each with probability 1/2.
    ShiftedSymmetric { mean: f64, half_width: f64 },
    /// `high` with probability `p_high`, otherwise `low`.
    TwoPoint { high: f64, low: f64, p_high: f64 },
    Continuous(ContinuousLaw),
}

/// Continuous densities, sampled by inverse CDF.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousLaw {
    Gaussian { mean: f64, sd: f64 },
    Uniform { min: f64, max: f64 },
    Tabulated(TabulatedLaw),
}

/// Piecewise-linear density on increasing knots, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedLaw {
    knots: Vec<f64>,
    density: Vec<f64>,
    cdf: Vec<f64>,
}

/// Allowed deviation of a density's integral from 1.
pub const NORMALIZATION_TOL: f64 = 1e-6;

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidLaw(format!("{name} = {p} is not a probability")))
    }
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidLaw(format!("{name} = {x} is not finite")))
    }
}

impl BondLaw {
    /// `±magnitude`, `magnitude > 0`.
    pub fn bernoulli(magnitude: f64, p_plus: f64) -> Result<Self> {
        check_finite("J", magnitude)?;
        if magnitude <= 0.0 {
            return Err(Error::InvalidLaw(format!("J = {magnitude} must be positive")));
        }
        check_prob("p", p_plus)?;
        Ok(BondLaw::Bernoulli { magnitude, p_plus })
    }

    /// Symmetric Bernoulli `±magnitude`.
    pub fn symmetric(magnitude: f64) -> Result<Self> {
        Self::bernoulli(magnitude, 0.5)
    }

    /// `mean ± half_width` with equal weight; `mean, half_width >= 0`.
    pub fn shifted_symmetric(mean: f64, half_width: f64) -> Result<Self> {
        check_finite("mu", mean)?;
        check_finite("J", half_width)?;
        if mean < 0.0 {
            return Err(Error::InvalidLaw(format!("mu = {mean} must be non-negative")));
        }
        if half_width < 0.0 {
            return Err(Error::InvalidLaw(format!("J = {half_width} must be non-negative")));
        }
        Ok(BondLaw::ShiftedSymmetric { mean, half_width })
    }

    pub fn two_point(high: f64, low: f64, p_high: f64) -> Result<Self> {
        check_finite("high", high)?;
        check_finite("low", low)?;
        check_prob("p", p_high)?;
        if low > high {
            return Err(Error::InvalidLaw(format!("low = {low} exceeds high = {high}")));
        }
        Ok(BondLaw::TwoPoint { high, low, p_high })
    }

    /// `+a` or `-b` with the weights that make the mean vanish,
    /// `p·a = (1-p)·b`, i.e. `p = b / (a + b)`.
    pub fn zero_mean_two_point(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidLaw(format!("zero-mean two-point law needs a, b > 0 (got {a}, {b})")));
        }
        let law = Self::two_point(a, -b, b / (a + b))?;
        let mean = law.mean();
        if mean.abs() > 1e-14 {
            return Err(Error::InvalidLaw(format!("mean {mean:e} of (+{a}, -{b}) is not zero")));
        }
        Ok(law)
    }

    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        check_finite("mu", mean)?;
        check_finite("sigma", sd)?;
        if sd <= 0.0 {
            return Err(Error::InvalidLaw(format!("sigma = {sd} must be positive")));
        }
        let law = ContinuousLaw::Gaussian { mean, sd };
        law.check_normalization()?;
        Ok(BondLaw::Continuous(law))
    }

    pub fn uniform(min: f64, max: f64) -> Result<Self> {
        check_finite("min", min)?;
        check_finite("max", max)?;
        if min >= max {
            return Err(Error::InvalidLaw(format!("uniform support [{min}, {max}] is empty")));
        }
        let law = ContinuousLaw::Uniform { min, max };
        law.check_normalization()?;
        Ok(BondLaw::Continuous(law))
    }

    pub fn tabulated(knots: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        let law = ContinuousLaw::Tabulated(TabulatedLaw::new(knots, density)?);
        law.check_normalization()?;
        Ok(BondLaw::Continuous(law))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BondLaw::Bernoulli { .. } => "bernoulli",
            BondLaw::ShiftedSymmetric { .. } => "shifted_symmetric",
            BondLaw::TwoPoint { .. } => "two_point",
            BondLaw::Continuous(ContinuousLaw::Gaussian { .. }) => "gaussian",
            BondLaw::Continuous(ContinuousLaw::Uniform { .. }) => "uniform",
            BondLaw::Continuous(ContinuousLaw::Tabulated(_)) => "tabulated",
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self, BondLaw::Continuous(_))
    }

    /// `[(low value, prob), (high value, prob)]` for discrete laws.
    pub fn outcomes(&self) -> Option<[(f64, f64); 2]> {
        match *self {
            BondLaw::Bernoulli { magnitude, p_plus } => {
                Some([(-magnitude, 1.0 - p_plus), (magnitude, p_plus)])
            }
            BondLaw::ShiftedSymmetric { mean, half_width } => {
                Some([(mean - half_width, 0.5), (mean + half_width, 0.5)])
            }
            BondLaw::TwoPoint { high, low, p_high } => Some([(low, 1.0 - p_high), (high, p_high)]),
            BondLaw::Continuous(_) => None,
        }
    }

    /// Inverse CDF at `u ∈ (0, 1)`. Discrete laws return the low atom for
    /// `u` below its probability.
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            BondLaw::Continuous(c) => c.quantile(u),
            discrete => {
                let [(lo, p_lo), (hi, _)] = discrete.outcomes().expect("discrete law");
                if u < p_lo {
                    lo
                } else {
                    hi
                }
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            BondLaw::Continuous(ContinuousLaw::Gaussian { mean, .. }) => *mean,
            BondLaw::Continuous(ContinuousLaw::Uniform { min, max }) => 0.5 * (min + max),
            BondLaw::Continuous(ContinuousLaw::Tabulated(t)) => t.mean(),
            discrete => {
                let [(lo, p_lo), (hi, p_hi)] = discrete.outcomes().expect("discrete law");
                p_lo * lo + p_hi * hi
            }
        }
    }

    /// `P(J > 0) − P(J < 0)`, i.e. the average of `sgn J`.
    pub fn sign_bias(&self) -> f64 {
        match self {
            BondLaw::Continuous(ContinuousLaw::Gaussian { mean, sd }) => {
                erf(mean / (sd * std::f64::consts::SQRT_2))
            }
            BondLaw::Continuous(ContinuousLaw::Uniform { min, max }) => {
                let pos = (max.max(0.0) - min.max(0.0)) / (max - min);
                let neg = (max.min(0.0) - min.min(0.0)) / (max - min);
                pos - neg
            }
            BondLaw::Continuous(ContinuousLaw::Tabulated(t)) => 1.0 - 2.0 * t.cdf(0.0),
            discrete => discrete
                .outcomes()
                .expect("discrete law")
                .iter()
                .map(|&(v, p)| p * sign(v))
                .sum(),
        }
    }

    /// True when the law is invariant under `J → −J`.
    pub fn is_symmetric(&self) -> bool {
        self.symmetry_center() == Some(0.0)
    }

    /// Centre of reflection symmetry, when the law has one.
    pub fn symmetry_center(&self) -> Option<f64> {
        match self {
            BondLaw::Bernoulli { p_plus, .. } => (*p_plus == 0.5).then_some(0.0),
            BondLaw::ShiftedSymmetric { mean, .. } => Some(*mean),
            BondLaw::TwoPoint { high, low, p_high } => {
                (*p_high == 0.5 || high == low).then_some(0.5 * (high + low))
            }
            BondLaw::Continuous(ContinuousLaw::Gaussian { mean, .. }) => Some(*mean),
            BondLaw::Continuous(ContinuousLaw::Uniform { min, max }) => Some(0.5 * (min + max)),
            BondLaw::Continuous(ContinuousLaw::Tabulated(t)) => t.symmetry_center(),
        }
    }

    /// `p(|J|) >= p(−|J|)` for every magnitude: no negative value is more
    /// likely than its mirror image.
    pub fn favours_positive(&self) -> bool {
        match self {
            BondLaw::Continuous(ContinuousLaw::Gaussian { mean, .. }) => *mean >= 0.0,
            BondLaw::Continuous(ContinuousLaw::Uniform { min, max }) => *min >= 0.0 || *max >= -min,
            BondLaw::Continuous(ContinuousLaw::Tabulated(t)) => t.favours_positive(),
            discrete => {
                let atoms = discrete.outcomes().expect("discrete law");
                atoms.iter().all(|&(v, p)| {
                    if v >= 0.0 || p == 0.0 {
                        return true;
                    }
                    let mirror: f64 = atoms.iter().filter(|a| a.0 == -v).map(|a| a.1).sum();
                    let here: f64 = atoms.iter().filter(|a| a.0 == v).map(|a| a.1).sum();
                    mirror >= here
                })
            }
        }
    }

    /// Whether `J = 0` has positive probability.
    pub fn has_zero_atom(&self) -> bool {
        self.outcomes()
            .map(|o| o.iter().any(|&(v, p)| v == 0.0 && p > 0.0))
            .unwrap_or(false)
    }

    /// Smallest value in the support (`-inf` for Gaussian).
    pub fn support_min(&self) -> f64 {
        match self {
            BondLaw::Continuous(ContinuousLaw::Gaussian { .. }) => f64::NEG_INFINITY,
            BondLaw::Continuous(ContinuousLaw::Uniform { min, .. }) => *min,
            BondLaw::Continuous(ContinuousLaw::Tabulated(t)) => t.support_min(),
            discrete => {
                let [(lo, p_lo), (hi, _)] = discrete.outcomes().expect("discrete law");
                if p_lo > 0.0 {
                    lo
                } else {
                    hi
                }
            }
        }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl ContinuousLaw {
    pub fn density(&self, x: f64) -> f64 {
        match self {
            ContinuousLaw::Gaussian { mean, sd } => {
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
            }
            ContinuousLaw::Uniform { min, max } => {
                if (*min..=*max).contains(&x) {
                    1.0 / (max - min)
                } else {
                    0.0
                }
            }
            ContinuousLaw::Tabulated(t) => t.density(x),
        }
    }

    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            ContinuousLaw::Gaussian { mean, sd } => Normal::new(*mean, *sd)
                .expect("validated at construction")
                .inverse_cdf(u),
            ContinuousLaw::Uniform { min, max } => min + u * (max - min),
            ContinuousLaw::Tabulated(t) => t.quantile(u),
        }
    }

    /// Integral of the density over its support.
    pub fn normalization(&self) -> f64 {
        match self {
            ContinuousLaw::Gaussian { mean, sd } => {
                simpson(|x| self.density(x), mean - 12.0 * sd, mean + 12.0 * sd, 4096)
            }
            ContinuousLaw::Uniform { min, max } => simpson(|x| self.density(x), *min, *max, 2),
            ContinuousLaw::Tabulated(t) => t.cdf.last().copied().unwrap_or(0.0),
        }
    }

    fn check_normalization(&self) -> Result<()> {
        let total = self.normalization();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidLaw(format!("density integrates to {total}, not 1")));
        }
        Ok(())
    }
}

/// Composite Simpson rule with `intervals` (even) sub-intervals.
pub(crate) fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

impl TabulatedLaw {
    pub fn new(knots: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != density.len() {
            return Err(Error::InvalidLaw(
                "tabulated law needs at least two knots and one density value per knot".into(),
            ));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) || knots.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidLaw("tabulated knots must be finite and strictly increasing".into()));
        }
        if density.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(Error::InvalidLaw("tabulated density must be finite and non-negative".into()));
        }
        let mut cdf = vec![0.0; knots.len()];
        for i in 1..knots.len() {
            cdf[i] = cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * (knots[i] - knots[i - 1]);
        }
        Ok(TabulatedLaw { knots, density, cdf })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn density_values(&self) -> &[f64] {
        &self.density
    }

    fn support_min(&self) -> f64 {
        self.knots[0]
    }

    fn segment(&self, x: f64) -> Option<usize> {
        if x < self.knots[0] || x > *self.knots.last().unwrap() {
            return None;
        }
        let i = self.knots.partition_point(|&k| k <= x);
        Some(i.clamp(1, self.knots.len() - 1) - 1)
    }

    pub fn density(&self, x: f64) -> f64 {
        match self.segment(x) {
            None => 0.0,
            Some(i) => {
                let (x0, x1) = (self.knots[i], self.knots[i + 1]);
                let w = (x - x0) / (x1 - x0);
                self.density[i] * (1.0 - w) + self.density[i + 1] * w
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.knots[0] {
            return 0.0;
        }
        match self.segment(x) {
            None => *self.cdf.last().unwrap(),
            Some(i) => {
                let x0 = self.knots[i];
                let d0 = self.density[i];
                let dx = x - x0;
                self.cdf[i] + 0.5 * (d0 + self.density(x)) * dx
            }
        }
    }

    /// Exact inverse of the piecewise-quadratic CDF.
    pub fn quantile(&self, u: f64) -> f64 {
        let total = *self.cdf.last().unwrap();
        let target = u * total;
        let i = self.cdf.partition_point(|&c| c < target).clamp(1, self.knots.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let (x0, x1) = (self.knots[i - 1], self.knots[i]);
        if c1 <= c0 {
            return x0;
        }
        // c0 + d0 s + (d1 - d0) s² / 2L = target, stable root
        let (d0, d1) = (self.density[i - 1], self.density[i]);
        let len = x1 - x0;
        let rest = target - c0;
        let quad = (d1 - d0) / (2.0 * len);
        let disc = (d0 * d0 + 4.0 * quad * rest).max(0.0);
        let s = 2.0 * rest / (d0 + disc.sqrt());
        x0 + s.clamp(0.0, len)
    }

    fn mean(&self) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.knots.len() {
            let (x0, x1) = (self.knots[i - 1], self.knots[i]);
            acc += simpson(|x| x * self.density(x), x0, x1, 2);
        }
        acc
    }

    fn symmetry_center(&self) -> Option<f64> {
        let c = 0.5 * (self.knots[0] + self.knots.last().unwrap());
        let symmetric = self
            .knots
            .iter()
            .all(|&x| (self.density(x) - self.density(2.0 * c - x)).abs() <= 1e-12);
        symmetric.then_some(c)
    }

    fn favours_positive(&self) -> bool {
        self.knots
            .iter()
            .map(|x| x.abs())
            .all(|y| self.density(y) + 1e-12 >= self.density(-y))
    }
}
