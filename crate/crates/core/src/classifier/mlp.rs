use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{ClassifierError, Sample};
use crate::features::{ClassCentroids, FeatureVector};
use crate::SymbolClass;

/// Fully connected layer; `weights` is `outputs × inputs`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Layer {
    fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            biases: vec![0.0; outputs],
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.inputs)
            .zip(&self.biases)
            .map(|(row, b)| row.iter().zip(x).fold(*b, |acc, (w, v)| acc + w * v))
            .collect()
    }
}

/// Standardise → (affine → ReLU)* → affine → softmax.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layer_sizes: Vec<usize>,
    pub layers: Vec<Layer>,
    pub feat_mean: Vec<f64>,
    pub feat_std: Vec<f64>,
    pub centroids: ClassCentroids,
}

/// Gradient of the loss with the same shape as the model's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    fn zeros_like(model: &MlpModel) -> Self {
        Self {
            weights: model
                .layers
                .iter()
                .map(|l| vec![0.0; l.weights.len()])
                .collect(),
            biases: model
                .layers
                .iter()
                .map(|l| vec![0.0; l.biases.len()])
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.weights
            .iter()
            .zip(&self.biases)
            .flat_map(|(w, b)| w.iter().chain(b.iter()))
    }

    /// `max |a − n| / max(1e-8, |a| + |n|)` over all parameters.
    pub fn max_relative_error(&self, other: &Gradients) -> f64 {
        self.iter()
            .zip(other.iter())
            .map(|(a, n)| (a - n).abs() / (a.abs() + n.abs()).max(1e-8))
            .fold(0.0, f64::max)
    }
}

impl MlpModel {
    /// All weights and biases zero, identity standardisation.
    ///
    /// # Panics
    /// If fewer than two layer sizes are given.
    pub fn zeros(layer_sizes: &[usize], centroids: ClassCentroids) -> Self {
        assert!(
            layer_sizes.len() >= 2,
            "need at least input and output sizes"
        );
        Self {
            layer_sizes: layer_sizes.to_vec(),
            layers: layer_sizes
                .windows(2)
                .map(|w| Layer::zeros(w[0], w[1]))
                .collect(),
            feat_mean: vec![0.0; layer_sizes[0]],
            feat_std: vec![1.0; layer_sizes[0]],
            centroids,
        }
    }

    /// He-normal weights (σ = √(2 / fan_in)), zero biases.
    pub fn he_init(layer_sizes: &[usize], centroids: ClassCentroids, rng: &mut impl Rng) -> Self {
        let mut model = Self::zeros(layer_sizes, centroids);
        for layer in &mut model.layers {
            let normal = Normal::new(0.0, (2.0 / layer.inputs as f64).sqrt())
                .expect("finite standard deviation");
            for w in &mut layer.weights {
                *w = normal.sample(rng);
            }
        }
        model
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_sizes.last().expect("validated layer sizes")
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.biases.len())
            .sum()
    }

    fn check_input(&self, input: &[f64]) -> Result<(), ClassifierError> {
        if input.len() != self.input_dim() {
            return Err(ClassifierError::DimensionMismatch {
                expected: self.input_dim(),
                got: input.len(),
            });
        }
        if input.iter().any(|v| !v.is_finite()) {
            return Err(ClassifierError::NonFiniteInput);
        }
        Ok(())
    }

    fn standardize(&self, input: &[f64]) -> Vec<f64> {
        input
            .iter()
            .zip(self.feat_mean.iter().zip(&self.feat_std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }

    /// Pre-activations of every layer, input already standardised.
    fn logits_trace(&self, x: Vec<f64>) -> Vec<Vec<f64>> {
        let mut trace = Vec::with_capacity(self.layers.len() + 1);
        trace.push(x);
        for (i, layer) in self.layers.iter().enumerate() {
            let prev = trace.last().expect("input pushed");
            let act: Vec<f64> = if i == 0 {
                prev.clone()
            } else {
                prev.iter().map(|&z| z.max(0.0)).collect()
            };
            trace.push(layer.apply(&act));
        }
        trace
    }

    /// Class probabilities for one raw (unstandardised) feature row.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>, ClassifierError> {
        self.check_input(input)?;
        let trace = self.logits_trace(self.standardize(input));
        Ok(softmax(trace.last().expect("output layer")))
    }

    pub fn forward_features(&self, fv: &FeatureVector) -> Result<Vec<f64>, ClassifierError> {
        self.forward(fv.as_slice())
    }

    /// Most probable symbol and its probability.
    pub fn predict(&self, input: &[f64]) -> Result<(SymbolClass, f64), ClassifierError> {
        if self.output_dim() != SymbolClass::COUNT {
            return Err(ClassifierError::NotASymbolModel(self.output_dim()));
        }
        let probs = self.forward(input)?;
        let (code, &p) = probs
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, &f64)>, (i, p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((i, p)),
            })
            .expect("six outputs");
        Ok((SymbolClass::from_code(code).expect("six outputs"), p))
    }

    /// Mean cross-entropy over `batch`. Inputs are assumed valid.
    pub fn loss(&self, batch: &[Sample]) -> f64 {
        let total: f64 = self
            .batch_logits(batch)
            .iter()
            .zip(batch)
            .map(|(z, s)| log_sum_exp(z) - z[s.label.code()])
            .sum();
        total / batch.len() as f64
    }

    fn batch_logits(&self, batch: &[Sample]) -> Vec<Vec<f64>> {
        batch
            .iter()
            .map(|s| {
                let mut trace = self.logits_trace(self.standardize(&s.features));
                trace.pop().expect("output layer")
            })
            .collect()
    }

    /// Backpropagated gradient of [`MlpModel::loss`].
    pub fn gradients(&self, batch: &[Sample]) -> Gradients {
        let mut grads = Gradients::zeros_like(self);
        let scale = 1.0 / batch.len() as f64;
        for s in batch {
            let trace = self.logits_trace(self.standardize(&s.features));
            let mut delta = softmax(trace.last().expect("output layer"));
            delta[s.label.code()] -= 1.0;
            delta.iter_mut().for_each(|d| *d *= scale);

            for l in (0..self.layers.len()).rev() {
                let layer = &self.layers[l];
                let pre = &trace[l];
                let act = |i: usize| if l == 0 { pre[i] } else { pre[i].max(0.0) };
                let gw = &mut grads.weights[l];
                for (o, d) in delta.iter().enumerate() {
                    if *d == 0.0 {
                        continue;
                    }
                    let row = &mut gw[o * layer.inputs..(o + 1) * layer.inputs];
                    for (i, g) in row.iter_mut().enumerate() {
                        *g += d * act(i);
                    }
                }
                for (g, d) in grads.biases[l].iter_mut().zip(&delta) {
                    *g += d;
                }
                if l == 0 {
                    break;
                }
                let mut next = vec![0.0; layer.inputs];
                for (o, d) in delta.iter().enumerate() {
                    let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
                    for (n, w) in next.iter_mut().zip(row) {
                        *n += w * d;
                    }
                }
                for (n, z) in next.iter_mut().zip(pre) {
                    if *z <= 0.0 {
                        *n = 0.0;
                    }
                }
                delta = next;
            }
        }
        grads
    }

    /// Central finite differences of [`MlpModel::loss`] for every parameter.
    pub fn numeric_gradients(&self, batch: &[Sample], epsilon: f64) -> Gradients {
        let mut grads = Gradients::zeros_like(self);
        let mut probe = self.clone();
        for l in 0..self.layers.len() {
            for i in 0..self.layers[l].weights.len() {
                grads.weights[l][i] =
                    probe.central_difference(batch, epsilon, |m| &mut m.layers[l].weights[i]);
            }
            for i in 0..self.layers[l].biases.len() {
                grads.biases[l][i] =
                    probe.central_difference(batch, epsilon, |m| &mut m.layers[l].biases[i]);
            }
        }
        grads
    }

    /// `(loss(θ + ε) − loss(θ − ε)) / 2ε` for one parameter, with each
    /// sample's loss difference taken directly from the two logit vectors.
    fn central_difference(
        &mut self,
        batch: &[Sample],
        epsilon: f64,
        param: impl Fn(&mut Self) -> &mut f64,
    ) -> f64 {
        let orig = *param(self);
        *param(self) = orig + epsilon;
        let up = self.batch_logits(batch);
        *param(self) = orig - epsilon;
        let down = self.batch_logits(batch);
        *param(self) = orig;
        let total: f64 = up
            .iter()
            .zip(&down)
            .zip(batch)
            .map(|((u, d), s)| loss_difference(u, d, s.label.code()))
            .sum();
        total / (2.0 * epsilon * batch.len() as f64)
    }
}

/// Largest relative disagreement between backprop and central differences.
///
/// Costs two loss evaluations per parameter, so it is meant for small
/// models (a few hundred parameters).
pub fn grad_check(model: &MlpModel, batch: &[Sample], epsilon: f64) -> f64 {
    model
        .gradients(batch)
        .max_relative_error(&model.numeric_gradients(batch, epsilon))
}

/// Cross-entropy at logits `up` minus cross-entropy at `down`, without
/// subtracting two nearly equal losses:
/// `ln(Σ e^{u_k} / Σ e^{d_k}) = ln1p(Σ e^{d_k − m}·expm1(u_k − d_k) / Σ e^{d_k − m})`.
fn loss_difference(up: &[f64], down: &[f64], label: usize) -> f64 {
    let m = down.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut change, mut base) = (0.0, 0.0);
    for (u, d) in up.iter().zip(down) {
        let w = (d - m).exp();
        change += w * (u - d).exp_m1();
        base += w;
    }
    (change / base).ln_1p() - (up[label] - down[label])
}

fn log_sum_exp(z: &[f64]) -> f64 {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}
