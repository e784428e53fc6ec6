//! Fractional-order entropy decision toolkit.
//!
//! A decision-analysis library built around the Ubriaco fractional entropy
//! `Σ p (-log p)^α` and two risk measures blending it with expected
//! utility (EU-FE) and variance (EU-FEV). On top of the measures sit:
//!
//! - [`casebook`]: built-in classical decision problems and portfolio
//!   models with reproductions of their reference tables,
//! - [`market`]: price ingestion, log returns, binning and per-stock risk
//!   factors,
//! - [`selector`]: direct and bootstrapped-neural stock risk ranking,
//! - [`frontier`]: long-only mean-variance efficient frontiers and
//!   subset-vs-universe comparison.
//!
//! Everything is deterministic under a caller-supplied seed; all floating
//! point is `f64`.

pub mod casebook;
pub mod decision;
pub mod entropy;
pub mod error;
pub mod frontier;
pub mod market;
pub mod selector;
pub mod utility;

pub use decision::{
    expected_utility, outcome_variance, ActionSpec, AffineRisk, DecisionProblem, IntervalLabel,
    LambdaInterval, LambdaPartition, Measure, Preference, RiskParams,
};
pub use entropy::{
    binomial_entropy, crossing_threshold, elasticity, entropy_term, info_gain, shannon_entropy,
    ubriaco_entropy, FractionalOrder, LogBase, ProbVector,
};
pub use error::{Error, ErrorClass, Result};
pub use utility::UtilityFunction;
