use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::mlp::{Gradients, MlpModel};
use super::{standardization, ClassifierError, Sample};
use crate::features::ClassCentroids;
use crate::SymbolClass;

/// Minimum number of samples [`train`] accepts.
pub const MIN_TRAINING_SAMPLES: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub hidden_layers: Vec<usize>,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub validation_fraction: f64,
    pub seed: u64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            hidden_layers: vec![64],
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            batch_size: 32,
            max_epochs: 100,
            patience: 10,
            validation_fraction: 0.1,
            seed: 42,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<(), ClassifierError> {
        let bad = |msg: &str| Err(ClassifierError::InvalidConfig(msg.to_owned()));
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning rate must be positive");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("Adam betas must lie in [0, 1)");
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return bad("Adam epsilon must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch size must be at least 1");
        }
        if self.max_epochs == 0 {
            return bad("max epochs must be at least 1");
        }
        if self.patience == 0 {
            return bad("patience must be at least 1");
        }
        if !(0.0..0.5).contains(&self.validation_fraction) {
            return bad("validation fraction must lie in [0, 0.5)");
        }
        if self.hidden_layers.contains(&0) {
            return bad("hidden layers must be nonempty");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    /// Equal to `train_loss` when no validation split is held out.
    pub val_loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Parameters from `best_epoch`.
    pub model: MlpModel,
    pub best_epoch: usize,
    pub history: Vec<EpochStats>,
}

impl TrainReport {
    pub fn best_val_loss(&self) -> f64 {
        self.history[self.best_epoch].val_loss
    }
}

struct Adam {
    m: Gradients,
    v: Gradients,
    t: i32,
}

impl Adam {
    fn new(model: &MlpModel) -> Self {
        let zeros = Gradients {
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
        };
        Self {
            m: zeros.clone(),
            v: zeros,
            t: 0,
        }
    }

    fn step(&mut self, model: &mut MlpModel, g: &Gradients, cfg: &TrainingConfig) {
        self.t += 1;
        let c1 = 1.0 - cfg.beta1.powi(self.t);
        let c2 = 1.0 - cfg.beta2.powi(self.t);
        let update = |p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
            for i in 0..p.len() {
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                let m_hat = m[i] / c1;
                let v_hat = v[i] / c2;
                p[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
            }
        };
        for (l, layer) in model.layers.iter_mut().enumerate() {
            update(
                &mut layer.weights,
                &g.weights[l],
                &mut self.m.weights[l],
                &mut self.v.weights[l],
            );
            update(
                &mut layer.biases,
                &g.biases[l],
                &mut self.m.biases[l],
                &mut self.v.biases[l],
            );
        }
    }
}

/// Minibatch Adam on mean cross-entropy with early stopping.
///
/// A seeded shuffle holds out `validation_fraction` of the samples (at
/// least one when the fraction is positive); standardisation statistics
/// come from the remaining training rows only. Training stops after
/// `patience` epochs without a new best validation loss.
pub fn train(
    data: &[Sample],
    centroids: ClassCentroids,
    cfg: &TrainingConfig,
) -> Result<TrainReport, ClassifierError> {
    cfg.validate()?;
    if data.len() < MIN_TRAINING_SAMPLES {
        return Err(ClassifierError::InsufficientData {
            needed: MIN_TRAINING_SAMPLES,
            got: data.len(),
        });
    }
    let dim = data[0].features.len();
    for s in data {
        if s.features.len() != dim {
            return Err(ClassifierError::DimensionMismatch {
                expected: dim,
                got: s.features.len(),
            });
        }
        if s.features.iter().any(|v| !v.is_finite()) {
            return Err(ClassifierError::NonFiniteInput);
        }
    }
    if data.iter().all(|s| s.label == data[0].label) {
        return Err(ClassifierError::SingleClassData);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng);
    let n_val = if cfg.validation_fraction > 0.0 {
        ((cfg.validation_fraction * data.len() as f64).round() as usize).max(1)
    } else {
        0
    };
    let val: Vec<Sample> = order[..n_val].iter().map(|&i| data[i].clone()).collect();
    let train_set: Vec<Sample> = order[n_val..].iter().map(|&i| data[i].clone()).collect();

    let rows: Vec<&[f64]> = train_set.iter().map(|s| s.features.as_slice()).collect();
    let (mean, std) = standardization(&rows);

    let mut sizes = vec![dim];
    sizes.extend(&cfg.hidden_layers);
    sizes.push(SymbolClass::COUNT);
    let mut model = MlpModel::he_init(&sizes, centroids, &mut rng);
    model.feat_mean = mean;
    model.feat_std = std;

    let mut adam = Adam::new(&model);
    let mut best = model.clone();
    let mut best_epoch = 0;
    let mut best_loss = f64::INFINITY;
    let mut history = Vec::new();
    let mut batch_order: Vec<usize> = (0..train_set.len()).collect();
    let mut batch = Vec::with_capacity(cfg.batch_size);

    for epoch in 0..cfg.max_epochs {
        batch_order.shuffle(&mut rng);
        for chunk in batch_order.chunks(cfg.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| train_set[i].clone()));
            let g = model.gradients(&batch);
            adam.step(&mut model, &g, cfg);
        }
        let train_loss = model.loss(&train_set);
        let val_loss = if val.is_empty() {
            train_loss
        } else {
            model.loss(&val)
        };
        history.push(EpochStats {
            epoch,
            train_loss,
            val_loss,
        });
        if val_loss < best_loss {
            best_loss = val_loss;
            best_epoch = epoch;
            best = model.clone();
        } else if epoch - best_epoch >= cfg.patience {
            break;
        }
    }

    Ok(TrainReport {
        model: best,
        best_epoch,
        history,
    })
}
