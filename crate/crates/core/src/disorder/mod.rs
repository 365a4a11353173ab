//! Quenched disorder: bond laws, models, exact and sampled averages, and the
//! gauge reductions.

mod average;
mod gauge;
mod law;
mod model;

pub use average::{
    enumerate_realizations, exact_average, exact_average_many, monte_carlo_average, quenched_average,
    Antithetic, Estimate, McEstimate, Realizations, Sampling, MIN_SAMPLES, N_MAX_DISORDER,
};
pub(crate) use average::exact_average_tables;
pub use gauge::{gauge_reduce_ii, gauge_reduce_iii, GaugeReducedModel, ShiftedGaugeModel};
pub use law::{BondLaw, ContinuousLaw, TabulatedLaw, NORMALIZATION_TOL};
pub use model::{alpha_parameter, DisorderModel, SystemClasses};
