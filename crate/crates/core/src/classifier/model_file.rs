use serde::{Deserialize, Serialize};

use super::mlp::{Layer, MlpModel};
use super::ClassifierError;
use crate::features::{ClassCentroids, DensityHistogramPair, HIST_BINS};
use crate::SymbolClass;

pub const MODEL_VERSION: &str = "hpl-mlp-1";

#[derive(Serialize, Deserialize)]
struct CentroidDoc {
    class: SymbolClass,
    count: usize,
    x_hist: Vec<f64>,
    y_hist: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    version: String,
    layer_sizes: Vec<usize>,
    /// Per layer, `outputs` rows of `inputs` weights.
    weights: Vec<Vec<Vec<f64>>>,
    biases: Vec<Vec<f64>>,
    feat_mean: Vec<f64>,
    feat_std: Vec<f64>,
    centroids: Vec<CentroidDoc>,
}

/// Pretty-printed JSON. Floats use shortest round-trip notation, so
/// [`load_model`] restores every parameter bit for bit.
pub fn save_model(model: &MlpModel) -> Vec<u8> {
    let doc = ModelDoc {
        version: MODEL_VERSION.to_owned(),
        layer_sizes: model.layer_sizes.clone(),
        weights: model
            .layers
            .iter()
            .map(|l| l.weights.chunks(l.inputs).map(<[f64]>::to_vec).collect())
            .collect(),
        biases: model.layers.iter().map(|l| l.biases.clone()).collect(),
        feat_mean: model.feat_mean.clone(),
        feat_std: model.feat_std.clone(),
        centroids: SymbolClass::ALL
            .into_iter()
            .map(|c| CentroidDoc {
                class: c,
                count: model.centroids.counts[c.code()],
                x_hist: model.centroids.get(c).x_hist.clone(),
                y_hist: model.centroids.get(c).y_hist.clone(),
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("finite parameters serialise");
    out.push(b'\n');
    out
}

pub fn load_model(bytes: &[u8]) -> Result<MlpModel, ClassifierError> {
    let corrupt = |msg: String| ClassifierError::CorruptModelFile(msg);
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| corrupt(e.to_string()))?;
    match value.get("version").and_then(|v| v.as_str()) {
        Some(MODEL_VERSION) => {}
        Some(other) => return Err(ClassifierError::UnsupportedVersion(other.to_owned())),
        None => return Err(corrupt("missing version".into())),
    }
    let doc: ModelDoc = serde_json::from_value(value).map_err(|e| corrupt(e.to_string()))?;

    let sizes = &doc.layer_sizes;
    if sizes.len() < 2 || sizes.contains(&0) {
        return Err(corrupt(format!("bad layer sizes {sizes:?}")));
    }
    if doc.weights.len() != sizes.len() - 1 || doc.biases.len() != sizes.len() - 1 {
        return Err(corrupt("layer count does not match layer_sizes".into()));
    }
    let mut layers = Vec::with_capacity(sizes.len() - 1);
    for (l, (rows, biases)) in doc.weights.into_iter().zip(doc.biases).enumerate() {
        let (inputs, outputs) = (sizes[l], sizes[l + 1]);
        if rows.len() != outputs
            || rows.iter().any(|r| r.len() != inputs)
            || biases.len() != outputs
        {
            return Err(corrupt(format!("layer {l} has the wrong shape")));
        }
        layers.push(Layer {
            inputs,
            outputs,
            weights: rows.into_iter().flatten().collect(),
            biases,
        });
    }
    if doc.feat_mean.len() != sizes[0] || doc.feat_std.len() != sizes[0] {
        return Err(corrupt(
            "standardisation vectors have the wrong length".into(),
        ));
    }
    if doc.feat_std.iter().any(|&s| s.is_nan() || s < 1e-8) {
        return Err(corrupt("standard deviation below 1e-8".into()));
    }

    let mut centroids = ClassCentroids::uniform();
    let mut seen = [false; SymbolClass::COUNT];
    for c in doc.centroids {
        if c.x_hist.len() != HIST_BINS || c.y_hist.len() != HIST_BINS {
            return Err(corrupt(format!(
                "centroid {} has the wrong length",
                c.class
            )));
        }
        seen[c.class.code()] = true;
        centroids.counts[c.class.code()] = c.count;
        centroids.entries[c.class.code()] = DensityHistogramPair {
            x_hist: c.x_hist,
            y_hist: c.y_hist,
        };
    }
    if let Some(missing) = SymbolClass::ALL.into_iter().find(|c| !seen[c.code()]) {
        return Err(corrupt(format!("missing centroid for {missing}")));
    }

    Ok(MlpModel {
        layer_sizes: doc.layer_sizes,
        layers,
        feat_mean: doc.feat_mean,
        feat_std: doc.feat_std,
        centroids,
    })
}
