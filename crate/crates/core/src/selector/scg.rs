//! Scaled-conjugate-gradient training with a seeded 70/15/15 split.
//!
//! The trainer minimizes full-batch MSE with Møller's scaled conjugate
//! gradient: conjugate directions with a second-order step size estimated
//! from a one-sided Hessian-vector probe, kept positive definite by a
//! Levenberg-style scale regulator. No line search, no learning rate.
//! A plain gradient-descent fallback is available for debugging.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::selector::mlp::MlpRegressor;

/// Training configuration (split, stopping, optimizer scales, topology).
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub test_fraction: f64,
    pub max_epochs: usize,
    /// Initial probe scale σ of the Hessian-vector estimate.
    pub sigma0: f64,
    /// Initial scale regulator λ of the SCG update.
    pub lambda0: f64,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    pub seed: u64,
    /// Hidden layer widths (tanh units).
    pub hidden_layers: Vec<usize>,
    /// Debug fallback: plain full-batch gradient descent.
    pub plain_gradient_descent: bool,
    pub gd_learning_rate: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            train_fraction: 0.70,
            val_fraction: 0.15,
            test_fraction: 0.15,
            max_epochs: 500,
            sigma0: 1e-4,
            lambda0: 1e-6,
            patience: 25,
            seed: 0,
            hidden_layers: vec![10],
            plain_gradient_descent: false,
            gd_learning_rate: 0.05,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let sum = self.train_fraction + self.val_fraction + self.test_fraction;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "split fractions must sum to 1, got {sum}"
            )));
        }
        if self.train_fraction <= 0.0 || self.val_fraction < 0.0 || self.test_fraction < 0.0 {
            return Err(Error::Validation("split fractions must be non-negative with a positive training share".into()));
        }
        if self.max_epochs == 0 {
            return Err(Error::Validation("max_epochs must be at least 1".into()));
        }
        if !(self.sigma0 > 0.0 && self.lambda0 > 0.0) {
            return Err(Error::Validation("optimizer scales must be positive".into()));
        }
        if self.hidden_layers.iter().any(|&h| h == 0) {
            return Err(Error::Validation("hidden layer widths must be positive".into()));
        }
        Ok(())
    }

    fn layer_sizes(&self, n_inputs: usize) -> Vec<usize> {
        let mut sizes = Vec::with_capacity(self.hidden_layers.len() + 2);
        sizes.push(n_inputs);
        sizes.extend_from_slice(&self.hidden_layers);
        sizes.push(1);
        sizes
    }
}

/// Per-epoch MSE on the three splits.
#[derive(Debug, Clone, Default)]
pub struct TrainingCurves {
    pub train_mse: Vec<f64>,
    pub val_mse: Vec<f64>,
    pub test_mse: Vec<f64>,
}

impl TrainingCurves {
    pub fn final_train_mse(&self) -> f64 {
        self.train_mse.last().copied().unwrap_or(f64::NAN)
    }

    pub fn final_test_mse(&self) -> f64 {
        self.test_mse.last().copied().unwrap_or(f64::NAN)
    }
}

struct Split {
    train_x: Vec<Vec<f64>>,
    train_y: Vec<f64>,
    val_x: Vec<Vec<f64>>,
    val_y: Vec<f64>,
    test_x: Vec<Vec<f64>>,
    test_y: Vec<f64>,
}

fn split_data(
    features: &[Vec<f64>],
    targets: &[f64],
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> Split {
    let n = features.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let n_train = ((cfg.train_fraction * n as f64).round() as usize).clamp(1, n);
    let n_val = ((cfg.val_fraction * n as f64).round() as usize).min(n - n_train);
    let take = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<f64>) {
        (
            idx.iter().map(|&i| features[i].clone()).collect(),
            idx.iter().map(|&i| targets[i]).collect(),
        )
    };
    let (train_x, train_y) = take(&order[..n_train]);
    let (val_x, val_y) = take(&order[n_train..n_train + n_val]);
    let (test_x, test_y) = take(&order[n_train + n_val..]);
    Split {
        train_x,
        train_y,
        val_x,
        val_y,
        test_x,
        test_y,
    }
}

fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Train a fresh network (Glorot init from the config seed) on the data.
///
/// Requires at least 10 samples. The 70/15/15 split is drawn by seeded
/// shuffle; training early-stops when validation MSE has not improved for
/// `patience` epochs and restores the best-validation parameters.
pub fn train_scg(
    features: &[Vec<f64>],
    targets: &[f64],
    cfg: &TrainConfig,
) -> Result<(MlpRegressor, TrainingCurves)> {
    cfg.validate()?;
    check_data(features, targets)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let split = split_data(features, targets, cfg, &mut rng);
    let model = MlpRegressor::random(cfg.layer_sizes(features[0].len()), &mut rng)?;
    optimize(model, split, cfg)
}

/// Train starting from a caller-supplied network (same split policy).
pub fn train_scg_with_init(
    model: MlpRegressor,
    features: &[Vec<f64>],
    targets: &[f64],
    cfg: &TrainConfig,
) -> Result<(MlpRegressor, TrainingCurves)> {
    cfg.validate()?;
    check_data(features, targets)?;
    if model.n_inputs() != features[0].len() {
        return Err(Error::Shape(format!(
            "model expects {} inputs, data has {}",
            model.n_inputs(),
            features[0].len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let split = split_data(features, targets, cfg, &mut rng);
    optimize(model, split, cfg)
}

fn check_data(features: &[Vec<f64>], targets: &[f64]) -> Result<()> {
    if features.len() < 10 {
        return Err(Error::Data(format!(
            "need at least 10 samples for the 70/15/15 split, got {}",
            features.len()
        )));
    }
    if features.len() != targets.len() {
        return Err(Error::Data("features and targets differ in length".into()));
    }
    let width = features[0].len();
    if width == 0 || features.iter().any(|f| f.len() != width) {
        return Err(Error::Data("feature rows must be non-empty and aligned".into()));
    }
    if features.iter().flatten().any(|v| !v.is_finite())
        || targets.iter().any(|v| !v.is_finite())
    {
        return Err(Error::Data("features and targets must be finite".into()));
    }
    Ok(())
}

fn optimize(
    mut model: MlpRegressor,
    split: Split,
    cfg: &TrainConfig,
) -> Result<(MlpRegressor, TrainingCurves)> {
    let mut curves = TrainingCurves::default();
    let has_val = !split.val_x.is_empty();
    let mut best_val = f64::INFINITY;
    let mut best_params = model.params().to_vec();
    let mut stale_epochs = 0usize;

    let record = |model: &MlpRegressor, curves: &mut TrainingCurves, train: f64| -> Result<f64> {
        curves.train_mse.push(train);
        let val = if has_val {
            model.mse(&split.val_x, &split.val_y)?
        } else {
            f64::NAN
        };
        curves.val_mse.push(val);
        let test = if split.test_x.is_empty() {
            f64::NAN
        } else {
            model.mse(&split.test_x, &split.test_y)?
        };
        curves.test_mse.push(test);
        Ok(val)
    };

    if cfg.plain_gradient_descent {
        for _ in 0..cfg.max_epochs {
            let (loss, grad) = model.mse_gradient(&split.train_x, &split.train_y)?;
            let mut params = model.params().to_vec();
            for (p, g) in params.iter_mut().zip(&grad) {
                *p -= cfg.gd_learning_rate * g;
            }
            model.set_params(&params);
            let val = record(&model, &mut curves, loss)?;
            if has_val {
                if val < best_val - 1e-12 {
                    best_val = val;
                    best_params.copy_from_slice(model.params());
                    stale_epochs = 0;
                } else {
                    stale_epochs += 1;
                    if stale_epochs >= cfg.patience {
                        break;
                    }
                }
            }
        }
        if has_val {
            model.set_params(&best_params);
        }
        return Ok((model, curves));
    }

    // Møller's scaled conjugate gradient on the flat parameter vector.
    let n = model.n_params();
    let mut w = model.params().to_vec();
    let (mut loss, grad) = model.mse_gradient(&split.train_x, &split.train_y)?;
    let mut r: Vec<f64> = grad.iter().map(|g| -g).collect();
    let mut p = r.clone();
    let mut lambda = cfg.lambda0;
    let mut lambda_bar = 0.0;
    let mut success = true;
    let mut delta = 0.0;
    let mut probe = model.clone();

    for epoch in 0..cfg.max_epochs {
        let p_norm_sq = norm_sq(&p);
        if p_norm_sq.sqrt() < 1e-14 {
            break; // gradient vanished: converged
        }
        if success {
            // second-order information from a one-sided difference
            let sigma = cfg.sigma0 / p_norm_sq.sqrt();
            let probe_w: Vec<f64> = w.iter().zip(&p).map(|(wi, pi)| wi + sigma * pi).collect();
            probe.set_params(&probe_w);
            let (_, probe_grad) = probe.mse_gradient(&split.train_x, &split.train_y)?;
            probe.set_params(&w);
            let (_, grad_here) = probe.mse_gradient(&split.train_x, &split.train_y)?;
            let s: Vec<f64> = probe_grad
                .iter()
                .zip(&grad_here)
                .map(|(a, b)| (a - b) / sigma)
                .collect();
            delta = dot(&p, &s);
        }
        // scale to keep the curvature estimate positive definite
        delta += (lambda - lambda_bar) * p_norm_sq;
        if delta <= 0.0 {
            lambda_bar = 2.0 * (lambda - delta / p_norm_sq);
            delta = -delta + lambda * p_norm_sq;
            lambda = lambda_bar;
        }
        let mu = dot(&p, &r);
        if !mu.is_finite() || !delta.is_finite() || delta == 0.0 {
            break;
        }
        let alpha = mu / delta;
        let w_new: Vec<f64> = w.iter().zip(&p).map(|(wi, pi)| wi + alpha * pi).collect();
        probe.set_params(&w_new);
        let loss_new = probe.mse(&split.train_x, &split.train_y)?;
        let comparison = 2.0 * delta * (loss - loss_new) / (mu * mu);

        if comparison.is_finite() && comparison >= 0.0 {
            // successful step
            w = w_new;
            loss = loss_new;
            model.set_params(&w);
            let (_, grad_new) = model.mse_gradient(&split.train_x, &split.train_y)?;
            let r_new: Vec<f64> = grad_new.iter().map(|g| -g).collect();
            lambda_bar = 0.0;
            success = true;
            if (epoch + 1) % n == 0 {
                p = r_new.clone(); // restart with steepest descent
            } else {
                let beta = (norm_sq(&r_new) - dot(&r_new, &r)) / mu;
                p = r_new.iter().zip(&p).map(|(rn, pi)| rn + beta * pi).collect();
            }
            r = r_new;
            if comparison >= 0.75 {
                lambda *= 0.25;
            }
        } else {
            probe.set_params(&w);
            lambda_bar = lambda;
            success = false;
        }
        if comparison.is_finite() && comparison < 0.25 {
            lambda += delta * (1.0 - comparison) / p_norm_sq;
        }
        lambda = lambda.clamp(1e-20, 1e20);

        let val = record(&model, &mut curves, loss)?;
        if has_val {
            if val < best_val - 1e-12 {
                best_val = val;
                best_params.copy_from_slice(model.params());
                stale_epochs = 0;
            } else {
                stale_epochs += 1;
                if stale_epochs >= cfg.patience {
                    break;
                }
            }
        }
        if norm_sq(&r).sqrt() < 1e-12 {
            break;
        }
    }
    if curves.train_mse.is_empty() {
        // converged before the first update; still report the state
        let val = if has_val {
            model.mse(&split.val_x, &split.val_y)?
        } else {
            f64::NAN
        };
        curves.train_mse.push(loss);
        curves.val_mse.push(val);
        curves.test_mse.push(if split.test_x.is_empty() {
            f64::NAN
        } else {
            model.mse(&split.test_x, &split.test_y)?
        });
    }
    if has_val {
        model.set_params(&best_params);
    }
    Ok((model, curves))
}
