//! Symbol classifier: a small ReLU MLP trained with Adam, a kNN reference
//! model, and confusion-matrix metrics.

mod knn;
mod metrics;
mod mlp;
mod model_file;
mod train;

pub use crate::SymbolClass;
pub use knn::knn_predict;
pub use metrics::{evaluate, MetricsReport};
pub use mlp::{grad_check, Gradients, Layer, MlpModel};
pub use model_file::{load_model, save_model, MODEL_VERSION};
pub use train::{train, EpochStats, TrainReport, TrainingConfig};

use thiserror::Error;

/// One labelled feature row.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: SymbolClass,
}

impl Sample {
    pub fn new(features: impl Into<Vec<f64>>, label: SymbolClass) -> Self {
        Self {
            features: features.into(),
            label,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifierError {
    #[error("expected {expected} input features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input contains NaN or infinite values")]
    NonFiniteInput,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("training data contains a single class")]
    SingleClassData,
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("k must be between 1 and the training set size ({len}), got {k}")]
    InvalidK { k: usize, len: usize },
    #[error("unsupported model version {0:?}")]
    UnsupportedVersion(String),
    #[error("corrupt model file: {0}")]
    CorruptModelFile(String),
    #[error("model has {0} outputs; symbol prediction needs 6")]
    NotASymbolModel(usize),
}

/// Per-dimension mean and standard deviation (floored at 1e-8).
pub(crate) fn standardization(rows: &[&[f64]]) -> (Vec<f64>, Vec<f64>) {
    let dim = rows.first().map_or(0, |r| r.len());
    let n = rows.len() as f64;
    let mut mean = vec![0.0; dim];
    for r in rows {
        mean.iter_mut().zip(r.iter()).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; dim];
    for r in rows {
        var.iter_mut()
            .zip(r.iter().zip(&mean))
            .for_each(|(s, (v, m))| *s += (v - m) * (v - m));
    }
    let std = var.into_iter().map(|s| (s / n).sqrt().max(1e-8)).collect();
    (mean, std)
}
