//! Decision problems under risk and the EU-FE / EU-FEV risk measures.
//!
//! An action is a finite payoff distribution; a problem is a set of actions
//! plus a utility function. Risk blends perceived uncertainty (fractional
//! entropy of the action's state distribution, order `α`) with normalized
//! expected utility through a tradeoff factor `λ ∈ [0, 1]`:
//!
//! ```text
//!     EU-FE:   R(a) = λ·H_α(a) − (1−λ)·NEU(a)
//!     EU-FEV:  R(b) = (λ/2)·[H_α(b) + NV(b)] − (1−λ)·NEU(b)
//! ```
//!
//! where `NEU` is expected utility over the max absolute expected utility in
//! the action space and `NV` the variance over the max variance. The action
//! with the lowest risk is preferred. At `α = 1` the measures reduce to
//! their Shannon-entropy counterparts, and at `λ = 0` to plain expected
//! utility.
//!
//! Both measures are affine in `λ`, so every preference question over a `λ`
//! range is the sign analysis of one affine function; [`AffineRisk`] and
//! [`DecisionProblem::lambda_preference_intervals`] exploit that instead of
//! point sampling.

use serde::{Deserialize, Serialize};

use crate::entropy::{ubriaco_entropy, FractionalOrder, LogBase, ProbVector};
use crate::error::{Error, Result};
use crate::utility::UtilityFunction;

/// Preference ties are declared below this absolute risk difference.
pub const TIE_EPS: f64 = 1e-12;
/// Tolerance used when a `λ` crossing point coincides with 0 or 1.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// One risky action: labeled payoffs with a state distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpec {
    label: String,
    outcomes: Vec<f64>,
    pmf: ProbVector,
}

impl ActionSpec {
    pub fn new(label: impl Into<String>, outcomes: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if outcomes.is_empty() || outcomes.len() != probs.len() {
            return Err(Error::Validation(format!(
                "action needs equally many outcomes and probabilities (≥ 1), got {} and {}",
                outcomes.len(),
                probs.len()
            )));
        }
        if outcomes.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("outcomes must be finite".into()));
        }
        Ok(ActionSpec {
            label: label.into(),
            outcomes,
            pmf: ProbVector::new(probs)?,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn pmf(&self) -> &ProbVector {
        &self.pmf
    }
}

/// `Σ_j p_j u(x_j)` for one action.
pub fn expected_utility(action: &ActionSpec, utility: &UtilityFunction) -> Result<f64> {
    let mut acc = 0.0;
    for (&x, &p) in action.outcomes.iter().zip(action.pmf.probs()) {
        acc += p * utility.eval(x)?;
    }
    Ok(acc)
}

/// Population variance `Σ p x² − (Σ p x)²` of an action's payoff.
pub fn outcome_variance(action: &ActionSpec) -> f64 {
    let mean: f64 = action
        .outcomes
        .iter()
        .zip(action.pmf.probs())
        .map(|(&x, &p)| p * x)
        .sum();
    let second: f64 = action
        .outcomes
        .iter()
        .zip(action.pmf.probs())
        .map(|(&x, &p)| p * x * x)
        .sum();
    (second - mean * mean).max(0.0)
}

/// Which of the paired risk measures to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    EuFe,
    EuFev,
}

impl Measure {
    /// Conventional model name: the `α = 1` reductions are the
    /// Shannon-based EU-E / EU-EV models.
    pub fn label(self, alpha: FractionalOrder) -> &'static str {
        match (self, alpha.value() == 1.0) {
            (Measure::EuFe, true) => "EU-E",
            (Measure::EuFe, false) => "EU-FE",
            (Measure::EuFev, true) => "EU-EV",
            (Measure::EuFev, false) => "EU-FEV",
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Measure::EuFe => write!(f, "eu-fe"),
            Measure::EuFev => write!(f, "eu-fev"),
        }
    }
}

/// Full parameter set for a risk evaluation.
#[derive(Debug, Clone, Copy)]
pub struct RiskParams {
    pub alpha: FractionalOrder,
    pub lambda: f64,
    pub measure: Measure,
    pub base: LogBase,
}

impl RiskParams {
    pub fn new(alpha: FractionalOrder, lambda: f64, measure: Measure, base: LogBase) -> Result<Self> {
        if !(lambda.is_finite() && (0.0..=1.0).contains(&lambda)) {
            return Err(Error::Domain(format!(
                "risk-tradeoff factor must lie in [0, 1], got {lambda}"
            )));
        }
        Ok(RiskParams {
            alpha,
            lambda,
            measure,
            base,
        })
    }
}

/// A risk measure as an affine function of the tradeoff factor:
/// `R(λ) = slope·λ + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineRisk {
    pub slope: f64,
    pub intercept: f64,
}

impl AffineRisk {
    #[inline]
    pub fn value(&self, lambda: f64) -> f64 {
        self.slope * lambda + self.intercept
    }
}

impl std::fmt::Display for AffineRisk {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.intercept < 0.0 {
            write!(f, "{:.4}λ − {:.4}", self.slope, -self.intercept)
        } else {
            write!(f, "{:.4}λ + {:.4}", self.slope, self.intercept)
        }
    }
}

/// Outcome of a pairwise preference query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    First,
    Second,
    Indifferent,
}

/// Label attached to a sub-interval of `[0, 1]` in a preference partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalLabel {
    FirstPreferred,
    SecondPreferred,
    Indifferent,
}

/// A labeled sub-interval of the tradeoff range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub label: IntervalLabel,
}

impl LambdaInterval {
    fn contains(&self, lambda: f64) -> bool {
        let above = if self.lo_closed {
            lambda >= self.lo
        } else {
            lambda > self.lo
        };
        let below = if self.hi_closed {
            lambda <= self.hi
        } else {
            lambda < self.hi
        };
        above && below
    }
}

impl std::fmt::Display for LambdaInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self.label {
            IntervalLabel::FirstPreferred => "first preferred",
            IntervalLabel::SecondPreferred => "second preferred",
            IntervalLabel::Indifferent => "indifferent",
        };
        write!(
            f,
            "{}{:.4}, {:.4}{} {}",
            if self.lo_closed { "[" } else { "(" },
            self.lo,
            self.hi,
            if self.hi_closed { "]" } else { ")" },
            label
        )
    }
}

/// Partition of `λ ∈ [0, 1]` into maximal preference regions.
///
/// Because both risks are affine, there are at most two labeled regions,
/// plus an optional crossing point where the actions tie.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPartition {
    pub intervals: Vec<LambdaInterval>,
    pub crossing: Option<f64>,
}

impl LambdaPartition {
    /// Label of the region containing a given `λ` (crossing points count
    /// as indifferent).
    pub fn label_at(&self, lambda: f64) -> IntervalLabel {
        if let Some(c) = self.crossing {
            if (lambda - c).abs() <= BOUNDARY_TOL {
                return IntervalLabel::Indifferent;
            }
        }
        self.intervals
            .iter()
            .find(|iv| iv.contains(lambda))
            .map(|iv| iv.label)
            .unwrap_or(IntervalLabel::Indifferent)
    }
}

// Serialized form: {"actions": [{label, outcomes, probs}], "utility": {kind, params}}
#[derive(Serialize, Deserialize)]
struct ActionWire {
    label: String,
    outcomes: Vec<f64>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ProblemWire {
    actions: Vec<ActionWire>,
    utility: UtilityFunction,
}

/// A finite action space with its utility function.
///
/// Expected utilities and variances (and the normalizers `max|E[u]|`,
/// `max Var`) are computed once at construction, so the invariant that the
/// utility is defined on every outcome is checked up front and all risk
/// queries afterwards are infallible arithmetic.
#[derive(Debug, Clone)]
pub struct DecisionProblem {
    actions: Vec<ActionSpec>,
    utility: UtilityFunction,
    eus: Vec<f64>,
    vars: Vec<f64>,
    max_abs_eu: f64,
    max_var: f64,
}

impl DecisionProblem {
    pub fn new(actions: Vec<ActionSpec>, utility: UtilityFunction) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::Validation(
                "decision problem needs at least one action".into(),
            ));
        }
        let eus = actions
            .iter()
            .map(|a| expected_utility(a, &utility))
            .collect::<Result<Vec<_>>>()?;
        if eus.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(
                "expected utility is not finite for some action".into(),
            ));
        }
        let vars: Vec<f64> = actions.iter().map(outcome_variance).collect();
        let max_abs_eu = eus.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let max_var = vars.iter().fold(0.0f64, |m, v| m.max(*v));
        Ok(DecisionProblem {
            actions,
            utility,
            eus,
            vars,
            max_abs_eu,
            max_var,
        })
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let wire: ProblemWire = serde_json::from_str(json)?;
        let actions = wire
            .actions
            .into_iter()
            .map(|a| ActionSpec::new(a.label, a.outcomes, a.probs))
            .collect::<Result<Vec<_>>>()?;
        DecisionProblem::new(actions, wire.utility)
    }

    pub fn to_json(&self) -> String {
        let wire = ProblemWire {
            actions: self
                .actions
                .iter()
                .map(|a| ActionWire {
                    label: a.label.clone(),
                    outcomes: a.outcomes.clone(),
                    probs: a.pmf.probs().to_vec(),
                })
                .collect(),
            utility: self.utility.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("wire form is always serializable")
    }

    pub fn actions(&self) -> &[ActionSpec] {
        &self.actions
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.actions.len() {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "action index {i} out of range (have {})",
                self.actions.len()
            )))
        }
    }

    /// Cached `E[u]` of one action.
    pub fn expected_utility(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok(self.eus[i])
    }

    /// Cached payoff variance of one action.
    pub fn outcome_variance(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok(self.vars[i])
    }

    /// Fractional entropy of one action's state distribution.
    pub fn action_entropy(&self, i: usize, alpha: FractionalOrder, base: LogBase) -> Result<f64> {
        self.check_index(i)?;
        Ok(ubriaco_entropy(&self.actions[i].pmf, alpha, base))
    }

    /// Risk of one action as an affine function of `λ`.
    ///
    /// For EU-FE: `slope = H + NEU`, `intercept = −NEU`; when the action
    /// space has `max|E[u]| = 0` the measure degenerates to `λ·H`. For
    /// EU-FEV the entropy is averaged with normalized variance, with the
    /// analogous fallbacks when a normalizer vanishes.
    pub fn risk_affine(
        &self,
        i: usize,
        alpha: FractionalOrder,
        measure: Measure,
        base: LogBase,
    ) -> Result<AffineRisk> {
        self.check_index(i)?;
        let entropy = ubriaco_entropy(&self.actions[i].pmf, alpha, base);
        let neu = if self.max_abs_eu > 0.0 {
            Some(self.eus[i] / self.max_abs_eu)
        } else {
            None
        };
        let affine = match measure {
            Measure::EuFe => match neu {
                Some(neu) => AffineRisk {
                    slope: entropy + neu,
                    intercept: -neu,
                },
                None => AffineRisk {
                    slope: entropy,
                    intercept: 0.0,
                },
            },
            Measure::EuFev => {
                let nv = if self.max_var > 0.0 {
                    self.vars[i] / self.max_var
                } else {
                    0.0
                };
                let half = 0.5 * (entropy + nv);
                match neu {
                    Some(neu) => AffineRisk {
                        slope: half + neu,
                        intercept: -neu,
                    },
                    None => AffineRisk {
                        slope: half,
                        intercept: 0.0,
                    },
                }
            }
        };
        Ok(affine)
    }

    /// Point evaluation of the risk measure.
    pub fn risk_value(&self, i: usize, params: &RiskParams) -> Result<f64> {
        Ok(self
            .risk_affine(i, params.alpha, params.measure, params.base)?
            .value(params.lambda))
    }

    /// Pairwise preference: the action with the lower risk is preferred;
    /// differences within [`TIE_EPS`] count as indifference.
    pub fn prefer(&self, i: usize, j: usize, params: &RiskParams) -> Result<Preference> {
        let ri = self.risk_value(i, params)?;
        let rj = self.risk_value(j, params)?;
        Ok(if (ri - rj).abs() <= TIE_EPS {
            Preference::Indifferent
        } else if ri < rj {
            Preference::First
        } else {
            Preference::Second
        })
    }

    /// All actions ordered by ascending risk (most preferred first);
    /// exact ties keep their original order.
    pub fn rank_actions(&self, params: &RiskParams) -> Result<Vec<usize>> {
        let risks = (0..self.actions.len())
            .map(|i| self.risk_value(i, params))
            .collect::<Result<Vec<_>>>()?;
        let mut order: Vec<usize> = (0..risks.len()).collect();
        order.sort_by(|&a, &b| risks[a].total_cmp(&risks[b]));
        Ok(order)
    }

    /// Partition `λ ∈ [0, 1]` by which of two actions is preferred.
    ///
    /// Both risks are affine, so the partition is exact: at most one
    /// crossing `λ* = (c_j − c_i)/(m_i − m_j)`, with endpoint coincidences
    /// resolved within [`BOUNDARY_TOL`].
    pub fn lambda_preference_intervals(
        &self,
        i: usize,
        j: usize,
        alpha: FractionalOrder,
        measure: Measure,
        base: LogBase,
    ) -> Result<LambdaPartition> {
        let ri = self.risk_affine(i, alpha, measure, base)?;
        let rj = self.risk_affine(j, alpha, measure, base)?;
        // diff(λ) = R_i(λ) − R_j(λ); negative means i preferred
        let dm = ri.slope - rj.slope;
        let dc = ri.intercept - rj.intercept;

        let label_for = |diff: f64| {
            if diff < 0.0 {
                IntervalLabel::FirstPreferred
            } else {
                IntervalLabel::SecondPreferred
            }
        };
        let whole = |label| LambdaPartition {
            intervals: vec![LambdaInterval {
                lo: 0.0,
                hi: 1.0,
                lo_closed: true,
                hi_closed: true,
                label,
            }],
            crossing: None,
        };

        if dm.abs() <= BOUNDARY_TOL {
            // parallel risks: one region decides everything
            if dc.abs() <= BOUNDARY_TOL {
                return Ok(whole(IntervalLabel::Indifferent));
            }
            return Ok(whole(label_for(dc)));
        }

        let cross = -dc / dm;
        if cross < -BOUNDARY_TOL || cross > 1.0 + BOUNDARY_TOL {
            return Ok(whole(label_for(dm * 0.5 + dc)));
        }
        if cross.abs() <= BOUNDARY_TOL {
            // tie exactly at λ = 0
            return Ok(LambdaPartition {
                intervals: vec![
                    LambdaInterval {
                        lo: 0.0,
                        hi: 0.0,
                        lo_closed: true,
                        hi_closed: true,
                        label: IntervalLabel::Indifferent,
                    },
                    LambdaInterval {
                        lo: 0.0,
                        hi: 1.0,
                        lo_closed: false,
                        hi_closed: true,
                        label: label_for(dm + dc),
                    },
                ],
                crossing: Some(cross.max(0.0)),
            });
        }
        if (cross - 1.0).abs() <= BOUNDARY_TOL {
            // tie exactly at λ = 1
            return Ok(LambdaPartition {
                intervals: vec![
                    LambdaInterval {
                        lo: 0.0,
                        hi: 1.0,
                        lo_closed: true,
                        hi_closed: false,
                        label: label_for(dc),
                    },
                    LambdaInterval {
                        lo: 1.0,
                        hi: 1.0,
                        lo_closed: true,
                        hi_closed: true,
                        label: IntervalLabel::Indifferent,
                    },
                ],
                crossing: Some(cross.min(1.0)),
            });
        }
        Ok(LambdaPartition {
            intervals: vec![
                LambdaInterval {
                    lo: 0.0,
                    hi: cross,
                    lo_closed: true,
                    hi_closed: false,
                    label: label_for(dc),
                },
                LambdaInterval {
                    lo: cross,
                    hi: 1.0,
                    lo_closed: false,
                    hi_closed: true,
                    label: label_for(dm + dc),
                },
            ],
            crossing: Some(cross),
        })
    }

    /// Upper `λ` bound below which the scaled action `t·b` carries less
    /// EU-FEV risk than `b`, for a two-action space `{b, t·b}`:
    ///
    /// ```text
    ///     (1 − ρ) / (3/2 − 1/(2t²) − ρ),   ρ = E[u(X)] / E[u(tX)]
    /// ```
    pub fn scaling_lambda_bound(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t > 1.0) {
            return Err(Error::Domain(format!(
                "scale factor must satisfy t > 1, got {t}"
            )));
        }
        if self.actions.len() != 2 {
            return Err(Error::Validation(format!(
                "scaling bound needs a two-action space {{b, t·b}}, got {} actions",
                self.actions.len()
            )));
        }
        let (base, scaled) = (&self.actions[0], &self.actions[1]);
        if base.outcomes.len() != scaled.outcomes.len()
            || base.pmf != scaled.pmf
            || base
                .outcomes
                .iter()
                .zip(&scaled.outcomes)
                .any(|(&x, &tx)| (tx - t * x).abs() > 1e-9 * (1.0 + (t * x).abs()))
        {
            return Err(Error::Validation(
                "second action must be the first with all outcomes scaled by t".into(),
            ));
        }
        if self.eus[1] == 0.0 {
            return Err(Error::Degenerate(
                "scaled action has zero expected utility".into(),
            ));
        }
        let ratio = self.eus[0] / self.eus[1];
        let denom = 1.5 - 1.0 / (2.0 * t * t) - ratio;
        if denom.abs() < 1e-12 {
            return Err(Error::Degenerate(
                "scaling bound denominator vanishes".into(),
            ));
        }
        Ok((1.0 - ratio) / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn alpha(v: f64) -> FractionalOrder {
        FractionalOrder::new(v).unwrap()
    }

    fn levy() -> DecisionProblem {
        DecisionProblem::new(
            vec![
                ActionSpec::new("y1", vec![1.0, 100.0], vec![0.8, 0.2]).unwrap(),
                ActionSpec::new("y2", vec![10.0, 1000.0], vec![0.99, 0.01]).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap()
    }

    fn allais(utility: UtilityFunction) -> DecisionProblem {
        DecisionProblem::new(
            vec![
                ActionSpec::new("y1", vec![1.0], vec![1.0]).unwrap(),
                ActionSpec::new("y2", vec![1.0, 5.0, 0.0], vec![0.89, 0.1, 0.01]).unwrap(),
                ActionSpec::new("y3", vec![1.0, 0.0], vec![0.11, 0.89]).unwrap(),
                ActionSpec::new("y4", vec![5.0, 0.0], vec![0.1, 0.9]).unwrap(),
            ],
            utility,
        )
        .unwrap()
    }

    fn nawrocki_harding() -> DecisionProblem {
        DecisionProblem::new(
            vec![
                ActionSpec::new(
                    "y1",
                    vec![1.0, 2.0, 3.0, 4.0, 5.0],
                    vec![0.1, 0.2, 0.4, 0.2, 0.1],
                )
                .unwrap(),
                ActionSpec::new(
                    "y2",
                    vec![1.0, 2.0, 3.0, 4.0, 5.0],
                    vec![0.2, 0.1, 0.4, 0.1, 0.2],
                )
                .unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap()
    }

    #[test]
    fn expected_utility_examples() {
        let p = levy();
        assert_abs_diff_eq!(p.expected_utility(0).unwrap(), 20.8, epsilon = 1e-12);
        let degenerate = ActionSpec::new("d", vec![1.0], vec![1.0]).unwrap();
        assert_abs_diff_eq!(
            expected_utility(&degenerate, &UtilityFunction::identity()).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let a = allais(UtilityFunction::identity());
        assert_abs_diff_eq!(a.expected_utility(3).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn expected_utility_names_bad_outcome() {
        let act = ActionSpec::new("a", vec![0.0, 2.0], vec![0.5, 0.5]).unwrap();
        let err = expected_utility(&act, &UtilityFunction::Logarithm).unwrap_err();
        assert!(matches!(err, Error::UtilityEval { outcome, .. } if outcome == 0.0));
    }

    #[test]
    fn variance_examples() {
        let p = levy();
        assert_abs_diff_eq!(p.outcome_variance(1).unwrap(), 9703.0, epsilon = 1.0);
        let degenerate = ActionSpec::new("d", vec![3.0], vec![1.0]).unwrap();
        assert_eq!(outcome_variance(&degenerate), 0.0);
        let nh = nawrocki_harding();
        assert_abs_diff_eq!(nh.outcome_variance(0).unwrap(), 1.2, epsilon = 0.01);
        assert_abs_diff_eq!(nh.outcome_variance(1).unwrap(), 1.8, epsilon = 0.01);
    }

    #[test]
    fn risk_affine_matches_published_coefficients() {
        let p = levy();
        let a = alpha(0.4);
        let r1 = p.risk_affine(0, a, Measure::EuFe, LogBase::Natural).unwrap();
        assert_abs_diff_eq!(r1.slope, 1.68, epsilon = 0.01);
        assert_abs_diff_eq!(r1.intercept, -1.0, epsilon = 0.01);
        let r2 = p.risk_affine(1, a, Measure::EuFe, LogBase::Natural).unwrap();
        assert_abs_diff_eq!(r2.slope, 1.14, epsilon = 0.01);
        assert_abs_diff_eq!(r2.intercept, -0.96, epsilon = 0.01);

        let al = allais(UtilityFunction::identity());
        let r = al.risk_affine(0, a, Measure::EuFev, LogBase::Natural).unwrap();
        assert_abs_diff_eq!(r.slope, 0.72, epsilon = 0.01);
        assert_abs_diff_eq!(r.intercept, -0.72, epsilon = 0.01);
    }

    #[test]
    fn risk_value_examples() {
        let p = levy();
        let at = |lambda| RiskParams::new(alpha(0.4), lambda, Measure::EuFe, LogBase::Natural).unwrap();
        assert_abs_diff_eq!(p.risk_value(0, &at(0.0)).unwrap(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.risk_value(0, &at(1.0)).unwrap(), 0.68, epsilon = 0.01);

        let al = allais(UtilityFunction::identity());
        let params = RiskParams::new(alpha(0.7), 0.5, Measure::EuFe, LogBase::Natural).unwrap();
        assert_abs_diff_eq!(al.risk_value(0, &params).unwrap(), -0.36, epsilon = 0.01);
    }

    #[test]
    fn risk_value_is_affine_in_lambda() {
        let p = levy();
        let a = alpha(0.4);
        let affine = p.risk_affine(1, a, Measure::EuFev, LogBase::Natural).unwrap();
        for k in 0..=20 {
            let lambda = k as f64 / 20.0;
            let params = RiskParams::new(a, lambda, Measure::EuFev, LogBase::Natural).unwrap();
            assert_abs_diff_eq!(
                p.risk_value(1, &params).unwrap(),
                affine.value(lambda),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn prefer_examples() {
        let nh = nawrocki_harding();
        let params = RiskParams::new(alpha(0.4), 0.0, Measure::EuFe, LogBase::Natural).unwrap();
        assert_eq!(nh.prefer(0, 1, &params).unwrap(), Preference::Indifferent);

        let p = levy();
        let params = RiskParams::new(alpha(0.4), 0.5, Measure::EuFev, LogBase::Natural).unwrap();
        assert_eq!(p.prefer(0, 1, &params).unwrap(), Preference::First);

        let twin = DecisionProblem::new(
            vec![
                ActionSpec::new("a", vec![1.0, 2.0], vec![0.5, 0.5]).unwrap(),
                ActionSpec::new("b", vec![1.0, 2.0], vec![0.5, 0.5]).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap();
        let params = RiskParams::new(alpha(0.6), 0.3, Measure::EuFev, LogBase::Natural).unwrap();
        assert_eq!(twin.prefer(0, 1, &params).unwrap(), Preference::Indifferent);
    }

    #[test]
    fn rank_actions_examples() {
        // second Allais experiment: y4 ranks before y3 at λ = 0.2
        let sub = DecisionProblem::new(
            vec![
                ActionSpec::new("y3", vec![1.0, 0.0], vec![0.11, 0.89]).unwrap(),
                ActionSpec::new("y4", vec![5.0, 0.0], vec![0.1, 0.9]).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap();
        let params = RiskParams::new(alpha(0.4), 0.2, Measure::EuFe, LogBase::Natural).unwrap();
        assert_eq!(sub.rank_actions(&params).unwrap(), vec![1, 0]);

        let single = DecisionProblem::new(
            vec![ActionSpec::new("only", vec![2.0], vec![1.0]).unwrap()],
            UtilityFunction::identity(),
        )
        .unwrap();
        assert_eq!(single.rank_actions(&params).unwrap(), vec![0]);

        // degenerate actions with risks proportional to {0.3, 0.1, 0.2}
        let three = DecisionProblem::new(
            vec![
                ActionSpec::new("a", vec![-0.3], vec![1.0]).unwrap(),
                ActionSpec::new("b", vec![-0.1], vec![1.0]).unwrap(),
                ActionSpec::new("c", vec![-0.2], vec![1.0]).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap();
        let params = RiskParams::new(alpha(0.4), 0.0, Measure::EuFe, LogBase::Natural).unwrap();
        assert_eq!(three.rank_actions(&params).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn rank_at_lambda_zero_is_descending_expected_utility() {
        let al = allais(UtilityFunction::SquareRoot);
        let params = RiskParams::new(alpha(0.4), 0.0, Measure::EuFe, LogBase::Natural).unwrap();
        let order = al.rank_actions(&params).unwrap();
        let eus: Vec<f64> = (0..4).map(|i| al.expected_utility(i).unwrap()).collect();
        for w in order.windows(2) {
            assert!(eus[w[0]] >= eus[w[1]]);
        }
    }

    #[test]
    fn interval_solver_matches_published_thresholds() {
        let p = levy();
        let part = p
            .lambda_preference_intervals(0, 1, alpha(0.4), Measure::EuFe, LogBase::Natural)
            .unwrap();
        let cross = part.crossing.expect("the risks cross");
        assert_abs_diff_eq!(cross, 0.079, epsilon = 0.002);
        assert_eq!(part.intervals.len(), 2);
        assert_eq!(part.intervals[0].label, IntervalLabel::FirstPreferred);
        assert_eq!(part.intervals[1].label, IntervalLabel::SecondPreferred);
        assert!(!part.intervals[0].hi_closed);

        let al = allais(UtilityFunction::identity());
        let part = al
            .lambda_preference_intervals(0, 1, alpha(0.4), Measure::EuFe, LogBase::Natural)
            .unwrap();
        assert_abs_diff_eq!(part.crossing.unwrap(), 0.34, epsilon = 0.02);
        assert_eq!(part.label_at(0.9), IntervalLabel::FirstPreferred);
        assert_eq!(part.label_at(0.1), IntervalLabel::SecondPreferred);
    }

    #[test]
    fn interval_solver_identical_risks() {
        let twin = DecisionProblem::new(
            vec![
                ActionSpec::new("a", vec![1.0, 2.0], vec![0.5, 0.5]).unwrap(),
                ActionSpec::new("b", vec![2.0, 1.0], vec![0.5, 0.5]).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap();
        let part = twin
            .lambda_preference_intervals(0, 1, alpha(0.5), Measure::EuFev, LogBase::Natural)
            .unwrap();
        assert_eq!(part.intervals.len(), 1);
        assert_eq!(part.intervals[0].label, IntervalLabel::Indifferent);
        assert_eq!(part.crossing, None);
    }

    #[test]
    fn interval_solver_endpoint_tie() {
        // equal expected utilities tie the risks exactly at λ = 0
        let nh = nawrocki_harding();
        let part = nh
            .lambda_preference_intervals(0, 1, alpha(0.4), Measure::EuFev, LogBase::Natural)
            .unwrap();
        assert_abs_diff_eq!(part.crossing.unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(part.label_at(0.0), IntervalLabel::Indifferent);
        assert_eq!(part.label_at(0.5), IntervalLabel::FirstPreferred);
    }

    #[test]
    fn scaling_bound_formula() {
        // E[u(X)]/E[u(tX)] = 0.5 at t = 2 with identity utility
        let p = DecisionProblem::new(
            vec![
                ActionSpec::new("b", vec![1.0], vec![1.0]).unwrap(),
                ActionSpec::new("tb", vec![2.0], vec![1.0]).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap();
        let bound = p.scaling_lambda_bound(2.0).unwrap();
        assert_abs_diff_eq!(bound, 0.5714285714285714, epsilon = 1e-12);

        assert!(p.scaling_lambda_bound(1.0).is_err());
        let not_scaled = DecisionProblem::new(
            vec![
                ActionSpec::new("b", vec![1.0], vec![1.0]).unwrap(),
                ActionSpec::new("c", vec![3.0], vec![1.0]).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap();
        assert!(not_scaled.scaling_lambda_bound(2.0).is_err());
    }

    #[test]
    fn scaling_bound_agrees_with_interval_solver() {
        let outcomes = vec![1.0, 3.0, 7.0];
        let probs = vec![0.2, 0.5, 0.3];
        let t = 2.5;
        let scaled: Vec<f64> = outcomes.iter().map(|x| t * x).collect();
        let p = DecisionProblem::new(
            vec![
                ActionSpec::new("b", outcomes, probs.clone()).unwrap(),
                ActionSpec::new("tb", scaled, probs).unwrap(),
            ],
            UtilityFunction::identity(),
        )
        .unwrap();
        let bound = p.scaling_lambda_bound(t).unwrap();
        let part = p
            .lambda_preference_intervals(1, 0, alpha(0.4), Measure::EuFev, LogBase::Natural)
            .unwrap();
        assert_abs_diff_eq!(part.crossing.unwrap(), bound, epsilon = 1e-6);
        // below the bound the scaled action is preferred
        assert_eq!(part.label_at(bound / 2.0), IntervalLabel::FirstPreferred);
    }

    #[test]
    fn json_round_trip_with_exact_field_names() {
        let p = levy();
        let json = p.to_json();
        assert!(json.contains("\"actions\""));
        assert!(json.contains("\"label\""));
        assert!(json.contains("\"outcomes\""));
        assert!(json.contains("\"probs\""));
        assert!(json.contains("\"utility\""));
        assert!(json.contains("\"kind\""));
        let back = DecisionProblem::from_json(&json).unwrap();
        assert_eq!(back.n_actions(), 2);
        assert_abs_diff_eq!(back.expected_utility(0).unwrap(), 20.8, epsilon = 1e-12);
    }

    #[test]
    fn construction_rejects_bad_problems() {
        assert!(DecisionProblem::new(vec![], UtilityFunction::identity()).is_err());
        // log utility undefined at outcome 0
        let act = ActionSpec::new("a", vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!(DecisionProblem::new(vec![act], UtilityFunction::Logarithm).is_err());
        assert!(ActionSpec::new("a", vec![1.0, 2.0], vec![1.0]).is_err());
    }
}
