//! Exact thermodynamics of the one-dimensional nearest-neighbour
//! Edwards–Anderson spin glass.
//!
//! * [`chain`]: closed-form partition function, bond and two-bond
//!   correlations of a periodic chain, plus a spin-enumeration oracle.
//! * [`tree`]: free boundary conditions and loop-free graphs.
//! * [`disorder`]: bond laws, exact and Monte Carlo quenched averages, gauge
//!   reductions.
//! * [`inequalities`]: sign checks of `⟨J_h ω_h⟩` and
//!   `⟨J_h J_k (ω_hk − ω_h ω_k)⟩`, the sign function `g` and its critical
//!   curve.
//! * [`explorer`]: brute force on small arbitrary bond graphs and
//!   counterexample scans.
//! * [`config`] and [`cli`]: model files and the command-line front end.
//!
//! Bond indices are 1-based throughout the public API.

pub mod chain;
pub mod cli;
pub mod config;
pub mod disorder;
pub mod error;
pub mod explorer;
pub mod format;
pub mod inequalities;
pub mod logsigned;
pub mod reduce;
pub mod tree;

pub use chain::{
    bond_correlation, brute_force_observables, closed_form_observables, pair_correlation, partition_value,
    truncated_correlation, ClosedForm, CouplingVector, Method, ObservableReport, PairObservables,
};
pub use disorder::{BondLaw, DisorderModel};
pub use error::{Error, Result};
pub use logsigned::LogSigned;
pub use tree::{free_boundary_observables, TreeGraph};
