//! Small feed-forward regressor: tanh hidden layers, one linear output.
//!
//! Parameters live in one flat `Vec<f64>` (per layer: weight matrix
//! row-major, then biases) so the trainer can treat the network as a plain
//! function of a parameter vector.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MlpRegressor {
    layer_sizes: Vec<usize>,
    params: Vec<f64>,
}

fn param_count(layer_sizes: &[usize]) -> usize {
    layer_sizes
        .windows(2)
        .map(|w| w[0] * w[1] + w[1])
        .sum()
}

impl MlpRegressor {
    /// Network with all weights and biases zero.
    pub fn zeroed(layer_sizes: Vec<usize>) -> Result<Self> {
        Self::check_sizes(&layer_sizes)?;
        let n = param_count(&layer_sizes);
        Ok(MlpRegressor {
            params: vec![0.0; n],
            layer_sizes,
        })
    }

    /// Glorot-uniform initialization.
    pub fn random<R: Rng>(layer_sizes: Vec<usize>, rng: &mut R) -> Result<Self> {
        Self::check_sizes(&layer_sizes)?;
        let mut params = Vec::with_capacity(param_count(&layer_sizes));
        for w in layer_sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for _ in 0..fan_in * fan_out {
                params.push(rng.gen_range(-limit..limit));
            }
            for _ in 0..fan_out {
                params.push(0.0);
            }
        }
        Ok(MlpRegressor {
            layer_sizes,
            params,
        })
    }

    pub fn from_params(layer_sizes: Vec<usize>, params: Vec<f64>) -> Result<Self> {
        Self::check_sizes(&layer_sizes)?;
        let expected = param_count(&layer_sizes);
        if params.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} parameters for layers {layer_sizes:?}, got {}",
                params.len()
            )));
        }
        Ok(MlpRegressor {
            layer_sizes,
            params,
        })
    }

    fn check_sizes(layer_sizes: &[usize]) -> Result<()> {
        if layer_sizes.len() < 2 {
            return Err(Error::Shape(
                "network needs at least input and output layers".into(),
            ));
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(Error::Shape("layer sizes must be positive".into()));
        }
        if *layer_sizes.last().unwrap() != 1 {
            return Err(Error::Shape("regressor output layer must have size 1".into()));
        }
        Ok(())
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn n_inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_params(&mut self, params: &[f64]) {
        debug_assert_eq!(params.len(), self.params.len());
        self.params.copy_from_slice(params);
    }

    pub fn params_finite(&self) -> bool {
        self.params.iter().all(|p| p.is_finite())
    }

    /// Forward pass for one feature vector.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_inputs() {
            return Err(Error::Shape(format!(
                "expected {} features, got {}",
                self.n_inputs(),
                x.len()
            )));
        }
        let mut activation = x.to_vec();
        let mut offset = 0;
        let last = self.layer_sizes.len() - 2;
        for (l, w) in self.layer_sizes.windows(2).enumerate() {
            let (n_in, n_out) = (w[0], w[1]);
            let weights = &self.params[offset..offset + n_in * n_out];
            let biases = &self.params[offset + n_in * n_out..offset + n_in * n_out + n_out];
            offset += n_in * n_out + n_out;
            let mut next = vec![0.0; n_out];
            for (o, out) in next.iter_mut().enumerate() {
                let row = &weights[o * n_in..(o + 1) * n_in];
                let mut z = biases[o];
                for (wi, ai) in row.iter().zip(&activation) {
                    z += wi * ai;
                }
                *out = if l == last { z } else { z.tanh() };
            }
            activation = next;
        }
        Ok(activation[0])
    }

    /// Mean squared error over a dataset.
    pub fn mse(&self, xs: &[Vec<f64>], ys: &[f64]) -> Result<f64> {
        if xs.is_empty() {
            return Err(Error::Data("cannot evaluate on an empty dataset".into()));
        }
        let mut acc = 0.0;
        for (x, &y) in xs.iter().zip(ys) {
            let err = self.predict(x)? - y;
            acc += err * err;
        }
        Ok(acc / xs.len() as f64)
    }

    /// MSE and its gradient with respect to every parameter (backprop).
    pub fn mse_gradient(&self, xs: &[Vec<f64>], ys: &[f64]) -> Result<(f64, Vec<f64>)> {
        if xs.is_empty() {
            return Err(Error::Data("cannot evaluate on an empty dataset".into()));
        }
        let n_layers = self.layer_sizes.len() - 1;
        let last = n_layers - 1;
        // per-layer parameter offsets
        let mut offsets = Vec::with_capacity(n_layers);
        let mut offset = 0;
        for w in self.layer_sizes.windows(2) {
            offsets.push(offset);
            offset += w[0] * w[1] + w[1];
        }

        let mut grad = vec![0.0; self.params.len()];
        let mut loss = 0.0;
        let inv_n = 1.0 / xs.len() as f64;

        for (x, &y) in xs.iter().zip(ys) {
            if x.len() != self.n_inputs() {
                return Err(Error::Shape(format!(
                    "expected {} features, got {}",
                    self.n_inputs(),
                    x.len()
                )));
            }
            // forward, keeping every activation
            let mut activations: Vec<Vec<f64>> = Vec::with_capacity(n_layers + 1);
            activations.push(x.clone());
            for (l, w) in self.layer_sizes.windows(2).enumerate() {
                let (n_in, n_out) = (w[0], w[1]);
                let base = offsets[l];
                let weights = &self.params[base..base + n_in * n_out];
                let biases = &self.params[base + n_in * n_out..base + n_in * n_out + n_out];
                let prev = activations.last().unwrap();
                let mut next = vec![0.0; n_out];
                for (o, out) in next.iter_mut().enumerate() {
                    let row = &weights[o * n_in..(o + 1) * n_in];
                    let mut z = biases[o];
                    for (wi, ai) in row.iter().zip(prev) {
                        z += wi * ai;
                    }
                    *out = if l == last { z } else { z.tanh() };
                }
                activations.push(next);
            }
            let prediction = activations[n_layers][0];
            let err = prediction - y;
            loss += err * err * inv_n;

            // backward
            let mut delta = vec![2.0 * err * inv_n];
            for l in (0..n_layers).rev() {
                let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
                let base = offsets[l];
                let prev = &activations[l];
                for o in 0..n_out {
                    let d = delta[o];
                    let wrow = base + o * n_in;
                    for i in 0..n_in {
                        grad[wrow + i] += d * prev[i];
                    }
                    grad[base + n_in * n_out + o] += d;
                }
                if l > 0 {
                    let weights = &self.params[base..base + n_in * n_out];
                    let mut prev_delta = vec![0.0; n_in];
                    for (o, &d) in delta.iter().enumerate() {
                        let row = &weights[o * n_in..(o + 1) * n_in];
                        for (pd, wi) in prev_delta.iter_mut().zip(row) {
                            *pd += wi * d;
                        }
                    }
                    // tanh'(z) = 1 - a²
                    for (pd, a) in prev_delta.iter_mut().zip(&activations[l]) {
                        *pd *= 1.0 - a * a;
                    }
                    delta = prev_delta;
                }
            }
        }
        Ok((loss, grad))
    }
}

/// Central finite-difference gradient of the MSE, for verifying the
/// analytic gradient.
pub fn numerical_gradient(
    model: &MlpRegressor,
    xs: &[Vec<f64>],
    ys: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    let mut probe = model.clone();
    let mut grad = vec![0.0; model.n_params()];
    let mut params = model.params().to_vec();
    for i in 0..params.len() {
        let saved = params[i];
        params[i] = saved + step;
        probe.set_params(&params);
        let plus = probe.mse(xs, ys)?;
        params[i] = saved - step;
        probe.set_params(&params);
        let minus = probe.mse(xs, ys)?;
        params[i] = saved;
        grad[i] = (plus - minus) / (2.0 * step);
    }
    Ok(grad)
}
