use super::{standardization, ClassifierError, Sample};
use crate::SymbolClass;

/// Majority vote among the `k` nearest training rows.
///
/// Distances are Euclidean after z-scoring with the training set's
/// statistics. A tied vote goes to the class with the smaller mean distance
/// to the query, then to the lower class code.
pub fn knn_predict(
    train: &[Sample],
    query: &[f64],
    k: usize,
) -> Result<SymbolClass, ClassifierError> {
    if train.is_empty() {
        return Err(ClassifierError::EmptyTrainingSet);
    }
    if k == 0 || k > train.len() {
        return Err(ClassifierError::InvalidK {
            k,
            len: train.len(),
        });
    }
    let dim = train[0].features.len();
    for row in train
        .iter()
        .map(|s| &s.features)
        .chain(std::iter::once(&query.to_vec()))
    {
        if row.len() != dim {
            return Err(ClassifierError::DimensionMismatch {
                expected: dim,
                got: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(ClassifierError::NonFiniteInput);
        }
    }

    let rows: Vec<&[f64]> = train.iter().map(|s| s.features.as_slice()).collect();
    let (mean, std) = standardization(&rows);
    let z = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .zip(mean.iter().zip(&std))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    };
    let q = z(query);
    let mut dists: Vec<(f64, SymbolClass)> = train
        .iter()
        .map(|s| {
            let d: f64 = z(&s.features)
                .iter()
                .zip(&q)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            (d.sqrt(), s.label)
        })
        .collect();
    dists.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut votes = [0usize; SymbolClass::COUNT];
    let mut dist_sum = [0.0f64; SymbolClass::COUNT];
    for &(d, c) in &dists[..k] {
        votes[c.code()] += 1;
        dist_sum[c.code()] += d;
    }
    let best = SymbolClass::ALL
        .into_iter()
        .filter(|c| votes[c.code()] > 0)
        .min_by(|a, b| {
            let mean = |c: &SymbolClass| dist_sum[c.code()] / votes[c.code()] as f64;
            votes[b.code()]
                .cmp(&votes[a.code()])
                .then(mean(a).total_cmp(&mean(b)))
                .then(a.code().cmp(&b.code()))
        })
        .expect("k ≥ 1 votes cast");
    Ok(best)
}
