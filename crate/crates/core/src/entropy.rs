//! Fractional-order (Ubriaco) information gain, elasticity and entropy.
//!
//! The family is parameterized by a fractional order `α ∈ (0, 1]`:
//!
//! ```text
//!     gain(p)    = (-log p)^α
//!     entropy(p) = Σ_x p(x) (-log p(x))^α
//! ```
//!
//! At `α = 1` the entropy reduces to Shannon entropy exactly. Low orders
//! model conservative decision-makers, orders near 1 adventurous ones: the
//! per-outcome entropy term grows with `α` for `p` below the crossing point
//! `p*` (where `-log p = 1`) and shrinks with `α` above it.
//!
//! The logarithm base is an explicit parameter. Natural log is the default;
//! base 10 exists because one published portfolio table is only reproducible
//! in that base (the entropy-table report carries a note about this).

use crate::error::{Error, Result};

/// Logarithm base for the entropy family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Ten,
}

impl LogBase {
    /// `-log_base(p)`, the building block of every gain/entropy expression.
    #[inline]
    pub fn neg_log(self, p: f64) -> f64 {
        match self {
            LogBase::Natural => -p.ln(),
            LogBase::Ten => -p.log10(),
        }
    }
}

impl std::fmt::Display for LogBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LogBase::Natural => write!(f, "natural"),
            LogBase::Ten => write!(f, "ten"),
        }
    }
}

/// Fractional order `α`, restricted to `(0, 1]`.
///
/// `α = 0` is rejected: the term convention at `p = 1` would require `0^0`
/// and published results never evaluate there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    /// Shannon order.
    pub const ONE: FractionalOrder = FractionalOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(FractionalOrder(alpha))
        } else {
            Err(Error::Domain(format!(
                "fractional order must lie in (0, 1], got {alpha}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

/// A validated probability mass function over finitely many outcome states.
///
/// Entries must lie in `[0, 1]` and sum to 1 within `1e-9`. Inputs are never
/// renormalized silently; use [`ProbVector::normalized`] for that.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

/// Absolute tolerance on `|Σp - 1|` accepted by [`ProbVector::new`].
pub const PMF_SUM_TOLERANCE: f64 = 1e-9;

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Validation("pmf must have at least one entry".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::Validation(format!(
                    "pmf entry {i} = {p} is outside [0, 1]"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PMF_SUM_TOLERANCE {
            return Err(Error::Validation(format!(
                "pmf entries sum to {sum}, expected 1 within {PMF_SUM_TOLERANCE:e}"
            )));
        }
        Ok(ProbVector(probs))
    }

    /// Build a pmf by scaling non-negative weights to unit sum.
    pub fn normalized(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Validation("pmf must have at least one entry".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Validation(
                "weights must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Validation("weights sum to zero".into()));
        }
        ProbVector::new(weights.iter().map(|w| w / sum).collect())
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Information gain `(-log p)^α` of observing an outcome of probability `p`.
///
/// Zero at `p = 1`; strictly decreasing on `(0, 1)`.
pub fn info_gain(p: f64, alpha: FractionalOrder, base: LogBase) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "information gain requires p in (0, 1], got {p}"
        )));
    }
    let neg_log = base.neg_log(p);
    if alpha.is_one() {
        Ok(neg_log)
    } else {
        Ok(neg_log.powf(alpha.value()))
    }
}

/// Elasticity `α / (-log p)` of the gain function: the responsiveness of
/// information gain to changes in probability. Increasing and convex in `p`;
/// `p = 1` is a pole.
pub fn elasticity(p: f64, alpha: FractionalOrder, base: LogBase) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "elasticity requires p in (0, 1), got {p}"
        )));
    }
    Ok(alpha.value() / base.neg_log(p))
}

/// One summand `p · (-log p)^α` of the fractional entropy, with the limiting
/// conventions `term(0) = 0` and `term(1) = 0`. Non-negative and concave.
pub fn entropy_term(p: f64, alpha: FractionalOrder, base: LogBase) -> Result<f64> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(Error::Domain(format!(
            "entropy term requires p in [0, 1], got {p}"
        )));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    let neg_log = base.neg_log(p);
    if alpha.is_one() {
        Ok(p * neg_log)
    } else {
        Ok(p * neg_log.powf(alpha.value()))
    }
}

// Summands are accumulated in sorted order so that permutations of the same
// pmf produce bit-identical sums (f64 addition is not associative).
fn sorted_term_sum(pmf: &ProbVector, alpha: FractionalOrder, base: LogBase) -> f64 {
    let mut probs: Vec<f64> = pmf.probs().to_vec();
    probs.sort_unstable_by(f64::total_cmp);
    probs
        .into_iter()
        .map(|p| entropy_term(p, alpha, base).expect("validated pmf entry"))
        .sum()
}

/// Fractional-order entropy `Σ p (-log p)^α` of a pmf.
///
/// Permutation-invariant (bit-exact), non-negative, and equal to
/// [`shannon_entropy`] when `α = 1`.
pub fn ubriaco_entropy(pmf: &ProbVector, alpha: FractionalOrder, base: LogBase) -> f64 {
    sorted_term_sum(pmf, alpha, base)
}

/// Shannon entropy `−Σ p log p` with the convention `0·log 0 = 0`.
pub fn shannon_entropy(pmf: &ProbVector, base: LogBase) -> f64 {
    sorted_term_sum(pmf, FractionalOrder::ONE, base)
}

/// Fractional entropy of the two-state system `{p, 1-p}`.
///
/// Symmetric about `p = 0.5`, where it is maximal for every order.
pub fn binomial_entropy(p: f64, alpha: FractionalOrder, base: LogBase) -> Result<f64> {
    if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
        return Err(Error::Domain(format!(
            "binomial entropy requires p in [0, 1], got {p}"
        )));
    }
    Ok(entropy_term(p, alpha, base)? + entropy_term(1.0 - p, alpha, base)?)
}

/// The probability `p*` where `-log_base p = 1` (1/e for natural log, 0.1
/// for base 10). Below `p*` the entropy term decreases as the order
/// decreases; between `p*` and 1 it increases as the order decreases.
pub fn crossing_threshold(base: LogBase) -> f64 {
    match base {
        LogBase::Natural => (-1.0f64).exp(),
        LogBase::Ten => 0.1,
    }
}
