use super::FeatureError;
use crate::imaging::BinaryImage;

pub const HIST_BINS: usize = 32;

/// Normalised ink projections of a glyph onto its columns and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityHistogramPair {
    pub x_hist: Vec<f64>,
    pub y_hist: Vec<f64>,
}

/// Projects the glyph onto 32 bins per axis.
///
/// The glyph is resampled to 32×32 with an area (box) filter: each source
/// column or row contributes to every bin it overlaps in proportion to the
/// overlap. Thin strokes are never dropped, and a 32-pixel glyph maps
/// column-for-column.
pub fn density_histograms(glyph: &BinaryImage) -> Result<DensityHistogramPair, FeatureError> {
    let (w, h) = (glyph.width(), glyph.height());
    let mut cols = vec![0u64; w];
    let mut rows = vec![0u64; h];
    for (y, row) in glyph.bits().chunks(w).enumerate() {
        for (x, _) in row.iter().enumerate().filter(|(_, &ink)| ink) {
            cols[x] += 1;
            rows[y] += 1;
        }
    }
    let total: u64 = cols.iter().sum();
    if total == 0 {
        return Err(FeatureError::EmptyGlyph);
    }
    Ok(DensityHistogramPair {
        x_hist: project(&cols, total),
        y_hist: project(&rows, total),
    })
}

fn project(counts: &[u64], total: u64) -> Vec<f64> {
    // In units of 1/HIST_BINS pixel: source cell i spans [B·i, B·(i+1)),
    // bin b spans [n·b, n·(b+1)). Overlaps are exact integers.
    let n = counts.len() as u64;
    let bins = HIST_BINS as u64;
    let mut mass = vec![0u64; HIST_BINS];
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (lo, hi) = (bins * i as u64, bins * (i as u64 + 1));
        let first = lo / n;
        let last = ((hi - 1) / n).min(bins - 1);
        for b in first..=last {
            let overlap = hi.min(n * (b + 1)).saturating_sub(lo.max(n * b));
            mass[b as usize] += c * overlap;
        }
    }
    let denom = (total * bins) as f64;
    mass.into_iter().map(|m| m as f64 / denom).collect()
}

/// `(1/√2)·‖√p − √q‖₂`, clamped to `[0, 1]`.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64, FeatureError> {
    if p.len() != q.len() {
        return Err(FeatureError::LengthMismatch(p.len(), q.len()));
    }
    for h in [p, q] {
        let sum: f64 = h.iter().sum();
        if (sum - 1.0).abs() > 1e-6 || h.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(FeatureError::NotNormalized(sum));
        }
    }
    let sq: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2))
        .sum();
    Ok((sq.sqrt() / std::f64::consts::SQRT_2).clamp(0.0, 1.0))
}
