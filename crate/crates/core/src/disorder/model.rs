use serde::Serialize;

use super::law::BondLaw;
use crate::chain::check_index;
use crate::error::{Error, Result};

/// Independent laws for the `N` bonds of a periodic chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderModel {
    laws: Vec<BondLaw>,
}

/// The three disorder classes a model may belong to; a model can be in
/// several at once (a symmetric Bernoulli model is in all three).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SystemClasses {
    /// Every bond satisfies `p(|J|) >= p(−|J|)`.
    pub system_i: bool,
    /// Every bond is symmetric about a non-negative mean.
    pub system_ii: bool,
    /// Every bond is `±J^(i)` Bernoulli and `∏(p_i − q_i) >= 0`.
    pub system_iii: bool,
}

impl SystemClasses {
    pub fn any(self) -> bool {
        self.system_i || self.system_ii || self.system_iii
    }

    pub fn labels(self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.system_i {
            out.push("I");
        }
        if self.system_ii {
            out.push("II");
        }
        if self.system_iii {
            out.push("III");
        }
        out
    }
}

impl DisorderModel {
    pub fn new(laws: Vec<BondLaw>) -> Result<Self> {
        if laws.len() < 2 {
            return Err(Error::ChainTooShort {
                min: 2,
                got: laws.len(),
            });
        }
        Ok(DisorderModel { laws })
    }

    /// Same law on every bond.
    pub fn uniform(n: usize, law: BondLaw) -> Result<Self> {
        Self::new(vec![law; n])
    }

    /// System III with the given magnitudes and every bond biased by
    /// `α^{1/N}`, so that `∏(p_i − q_i) = α`.
    pub fn uniform_alpha(magnitudes: &[f64], alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(crate::error::invalid("alpha", format!("{alpha} outside [0, 1]")));
        }
        let bias = alpha.powf(1.0 / magnitudes.len() as f64);
        let laws = magnitudes
            .iter()
            .map(|&j| BondLaw::bernoulli(j, 0.5 * (1.0 + bias)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(laws)
    }

    pub fn len(&self) -> usize {
        self.laws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.laws.is_empty()
    }

    pub fn laws(&self) -> &[BondLaw] {
        &self.laws
    }

    /// Law of bond `h` (1-based).
    pub fn law(&self, h: usize) -> Result<&BondLaw> {
        check_index(h, self.len())?;
        Ok(&self.laws[h - 1])
    }

    pub fn is_discrete(&self) -> bool {
        self.laws.iter().all(BondLaw::is_discrete)
    }

    /// Checks the single-kind requirement of exact enumeration and returns
    /// the two-atom tables.
    pub fn discrete_outcomes(&self) -> Result<Vec<[(f64, f64); 2]>> {
        let first = self.laws[0].kind();
        self.laws
            .iter()
            .enumerate()
            .map(|(i, law)| {
                let outcomes = law.outcomes().ok_or(Error::ContinuousLaw(i + 1))?;
                if law.kind() != first {
                    return Err(Error::MixedKinds {
                        first,
                        index: i + 1,
                        found: law.kind(),
                    });
                }
                Ok(outcomes)
            })
            .collect()
    }

    /// `∏_i (p_i − q_i)` for an all-Bernoulli model. Negative values are
    /// returned as is.
    pub fn alpha(&self) -> Result<f64> {
        self.laws
            .iter()
            .enumerate()
            .map(|(i, law)| match law {
                BondLaw::Bernoulli { p_plus, .. } => Ok(p_plus - (1.0 - p_plus)),
                other => Err(Error::WrongLawKind {
                    expected: "bernoulli",
                    index: i + 1,
                    found: other.kind(),
                }),
            })
            .product()
    }

    pub fn classify(&self) -> SystemClasses {
        let system_i = self.laws.iter().all(BondLaw::favours_positive);
        let system_ii = self
            .laws
            .iter()
            .all(|law| law.symmetry_center().is_some_and(|c| c >= 0.0));
        let system_iii = self.alpha().is_ok_and(|a| a >= 0.0);
        SystemClasses {
            system_i,
            system_ii,
            system_iii,
        }
    }

    /// 1-based indices of bonds whose law is invariant under `J → −J`.
    pub fn symmetric_bonds(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&h| self.laws[h - 1].is_symmetric()).collect()
    }

    /// True when no bond can take a negative value.
    pub fn is_ferromagnetic(&self) -> bool {
        self.laws.iter().all(|law| law.support_min() >= 0.0)
    }
}

/// `∏(p_i − q_i)` of a Bernoulli model.
pub fn alpha_parameter(m: &DisorderModel) -> Result<f64> {
    m.alpha()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bern(j: f64, p: f64) -> BondLaw {
        BondLaw::bernoulli(j, p).unwrap()
    }

    #[test]
    fn alpha_values() {
        let sym = DisorderModel::uniform(3, bern(1.0, 0.5)).unwrap();
        assert_eq!(alpha_parameter(&sym).unwrap(), 0.0);
        let ferro = DisorderModel::uniform(4, bern(1.0, 1.0)).unwrap();
        assert_eq!(alpha_parameter(&ferro).unwrap(), 1.0);
        let m = DisorderModel::new(vec![bern(1.0, 0.75), bern(2.0, 0.75), bern(1.0, 0.9)]).unwrap();
        assert!((alpha_parameter(&m).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn alpha_rejects_other_kinds() {
        let m = DisorderModel::new(vec![bern(1.0, 0.5), BondLaw::shifted_symmetric(1.0, 2.0).unwrap()]).unwrap();
        assert!(matches!(alpha_parameter(&m), Err(Error::WrongLawKind { index: 2, .. })));
    }

    #[test]
    fn classification_tags_all_matching_systems() {
        let sym = DisorderModel::uniform(3, bern(1.0, 0.5)).unwrap().classify();
        assert!(sym.system_i && sym.system_ii && sym.system_iii);

        let biased = DisorderModel::uniform(3, bern(1.0, 0.7)).unwrap().classify();
        assert!(biased.system_i && !biased.system_ii && biased.system_iii);

        let wide = DisorderModel::uniform(3, BondLaw::shifted_symmetric(1.0, 2.0).unwrap())
            .unwrap()
            .classify();
        assert_eq!(wide.labels(), vec!["II"]);

        let negative = DisorderModel::new(vec![bern(1.0, 0.3), bern(1.0, 0.8)]).unwrap().classify();
        assert!(!negative.any());
    }

    #[test]
    fn uniform_alpha_hits_target() {
        let m = DisorderModel::uniform_alpha(&[1.0, 2.0, 0.5], 0.37).unwrap();
        assert!((m.alpha().unwrap() - 0.37).abs() < 1e-15);
        assert!(DisorderModel::uniform_alpha(&[1.0, 2.0], 1.2).is_err());
    }

    #[test]
    fn mixed_kinds_rejected_for_enumeration() {
        let m = DisorderModel::new(vec![bern(1.0, 0.5), BondLaw::two_point(1.0, -1.0, 0.5).unwrap()]).unwrap();
        assert!(matches!(m.discrete_outcomes(), Err(Error::MixedKinds { index: 2, .. })));
        let c = DisorderModel::new(vec![bern(1.0, 0.5), BondLaw::gaussian(0.0, 1.0).unwrap()]).unwrap();
        assert!(matches!(c.discrete_outcomes(), Err(Error::ContinuousLaw(2))));
    }
}
