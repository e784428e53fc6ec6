//! Utility functions describing risk attitudes.
//!
//! The catalogue matches the utility functions used across the decision
//! problems: risk-neutral `bx + c`, risk-averse `log x` and `√x`,
//! risk-seeking `x²`, and the S-shaped prospect-theory utility
//! `log(1+x)` for gains / `-log(1-x)` for losses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityFunction {
    /// `u(x) = b·x + c` with `b > 0`.
    Linear { b: f64, c: f64 },
    /// `u(x) = ln x`, defined for `x > 0`.
    Logarithm,
    /// `u(x) = √x`, defined for `x ≥ 0`.
    SquareRoot,
    /// `u(x) = x²`.
    Square,
    /// `u(x) = ln(1+x)` for `x ≥ 0`, `-ln(1-x)` for `x < 0`.
    SShaped,
}

impl UtilityFunction {
    /// Risk-neutral identity utility.
    pub fn identity() -> Self {
        UtilityFunction::Linear { b: 1.0, c: 0.0 }
    }

    pub fn linear(b: f64, c: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) || !c.is_finite() {
            return Err(Error::Validation(format!(
                "linear utility requires finite coefficients with b > 0, got b={b}, c={c}"
            )));
        }
        Ok(UtilityFunction::Linear { b, c })
    }

    /// Evaluate the utility at a payoff, rejecting outcomes outside the
    /// function's domain with an error naming the offending value.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(self.eval_error(x, "payoff is not finite"));
        }
        match self {
            UtilityFunction::Linear { b, c } => Ok(b * x + c),
            UtilityFunction::Logarithm => {
                if x > 0.0 {
                    Ok(x.ln())
                } else {
                    Err(self.eval_error(x, "logarithm requires a positive payoff"))
                }
            }
            UtilityFunction::SquareRoot => {
                if x >= 0.0 {
                    Ok(x.sqrt())
                } else {
                    Err(self.eval_error(x, "square root requires a non-negative payoff"))
                }
            }
            UtilityFunction::Square => Ok(x * x),
            UtilityFunction::SShaped => {
                if x >= 0.0 {
                    Ok((1.0 + x).ln())
                } else {
                    Ok(-(1.0 - x).ln())
                }
            }
        }
    }

    fn eval_error(&self, outcome: f64, reason: &str) -> Error {
        Error::UtilityEval {
            utility: self.to_string(),
            outcome,
            reason: reason.to_string(),
        }
    }

    /// Stable identifier used in serialized problems and CLI flags.
    pub fn kind(&self) -> &'static str {
        match self {
            UtilityFunction::Linear { .. } => "linear",
            UtilityFunction::Logarithm => "logarithm",
            UtilityFunction::SquareRoot => "square_root",
            UtilityFunction::Square => "square",
            UtilityFunction::SShaped => "s_shaped",
        }
    }
}

impl std::fmt::Display for UtilityFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UtilityFunction::Linear { b, c } if *b == 1.0 && *c == 0.0 => write!(f, "u(x) = x"),
            UtilityFunction::Linear { b, c } => write!(f, "u(x) = {b}x + {c}"),
            UtilityFunction::Logarithm => write!(f, "u(x) = log(x)"),
            UtilityFunction::SquareRoot => write!(f, "u(x) = sqrt(x)"),
            UtilityFunction::Square => write!(f, "u(x) = x^2"),
            UtilityFunction::SShaped => write!(f, "u(x) = s-shaped"),
        }
    }
}

// Wire format: {"kind": "...", "params": [...]} with params only for linear.
#[derive(Serialize, Deserialize)]
struct UtilityWire {
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    params: Vec<f64>,
}

impl Serialize for UtilityFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let params = match self {
            UtilityFunction::Linear { b, c } => vec![*b, *c],
            _ => vec![],
        };
        UtilityWire {
            kind: self.kind().to_string(),
            params,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UtilityFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = UtilityWire::deserialize(d)?;
        let unexpected_params = |kind: &str| {
            serde::de::Error::custom(format!("utility kind `{kind}` takes no params"))
        };
        match wire.kind.as_str() {
            "linear" => {
                let (b, c) = match wire.params.as_slice() {
                    [] => (1.0, 0.0),
                    [b] => (*b, 0.0),
                    [b, c] => (*b, *c),
                    _ => {
                        return Err(serde::de::Error::custom(
                            "linear utility takes at most two params [b, c]",
                        ))
                    }
                };
                UtilityFunction::linear(b, c).map_err(serde::de::Error::custom)
            }
            "logarithm" if wire.params.is_empty() => Ok(UtilityFunction::Logarithm),
            "square_root" if wire.params.is_empty() => Ok(UtilityFunction::SquareRoot),
            "square" if wire.params.is_empty() => Ok(UtilityFunction::Square),
            "s_shaped" if wire.params.is_empty() => Ok(UtilityFunction::SShaped),
            k @ ("logarithm" | "square_root" | "square" | "s_shaped") => {
                Err(unexpected_params(k))
            }
            other => Err(serde::de::Error::custom(format!(
                "unknown utility kind `{other}`"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_requires_positive_slope() {
        assert!(UtilityFunction::linear(0.0, 1.0).is_err());
        assert!(UtilityFunction::linear(-2.0, 0.0).is_err());
        assert!(UtilityFunction::linear(2.0, -1.0).is_ok());
    }

    #[test]
    fn domain_errors_name_the_outcome() {
        let err = UtilityFunction::Logarithm.eval(0.0).unwrap_err();
        assert!(err.to_string().contains("0"));
        assert!(UtilityFunction::SquareRoot.eval(-1.0).is_err());
        assert!(UtilityFunction::Square.eval(-1.0).is_ok());
    }

    #[test]
    fn s_shaped_is_continuous_at_zero() {
        let u = UtilityFunction::SShaped;
        assert_eq!(u.eval(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(u.eval(1e-12).unwrap(), 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(u.eval(-1e-12).unwrap(), 0.0, epsilon = 1e-11);
        assert_abs_diff_eq!(u.eval(0.5).unwrap(), 1.5f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(u.eval(-0.5).unwrap(), -(1.5f64.ln()), epsilon = 1e-15);
    }

    #[test]
    fn json_round_trip_preserves_kind_and_params() {
        let cases = vec![
            UtilityFunction::linear(2.0, -1.0).unwrap(),
            UtilityFunction::Logarithm,
            UtilityFunction::SquareRoot,
            UtilityFunction::Square,
            UtilityFunction::SShaped,
        ];
        for u in cases {
            let json = serde_json::to_string(&u).unwrap();
            let back: UtilityFunction = serde_json::from_str(&json).unwrap();
            assert_eq!(u, back);
        }
        // exact wire field names
        let json = serde_json::to_string(&UtilityFunction::linear(2.0, 1.0).unwrap()).unwrap();
        assert_eq!(json, r#"{"kind":"linear","params":[2.0,1.0]}"#);
        assert!(serde_json::from_str::<UtilityFunction>(r#"{"kind":"cubic"}"#).is_err());
    }
}
