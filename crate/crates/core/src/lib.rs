//! Outage analysis of an energy-harvesting decode-and-forward relay network.
//!
//! The network model: a source talks to a destination through `L`
//! power-splitting relays that harvest their transmit energy from the
//! received signal plus co-channel interference, decode when their first-hop
//! SINR clears a threshold, and forward through opportunistic selection.
//! This crate evaluates the exact closed-form outage probability of that
//! system and cross-validates it against a seeded, reproducible Monte Carlo
//! channel simulator.
//!
//! Modules follow the pipeline: [`numerics`] supplies quadrature and the
//! generalized incomplete Gamma function, [`model`] holds configurations and
//! derived rates, [`analytic`] evaluates the closed form, [`montecarlo`]
//! simulates, and [`experiments`] drives sweeps and cross-validation.

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod model;
pub mod montecarlo;
pub mod numerics;

pub use analytic::{Branch, OutagePoint};
pub use error::{Error, Result};
pub use experiments::{
    DiversityEstimate, McSettings, OptimalTheta, SweepResult, SweepRow, ValidationReport,
};
pub use model::{
    config_from_operating_point, derive_rates, DerivedRates, InterferenceMode, OperatingPoint,
    SystemConfig,
};
pub use montecarlo::{OutageEstimate, TrialOutcome};
pub use numerics::QuadratureSpec;
