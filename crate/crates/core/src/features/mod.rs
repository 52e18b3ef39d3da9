//! The 42-value shape descriptor fed to the classifier.
//!
//! Three families are concatenated in a fixed order:
//!
//! | slice    | count | content                                             |
//! |----------|-------|-----------------------------------------------------|
//! | `fd`     | 16    | Fourier descriptor magnitudes of the contour        |
//! | `hell`   | 12    | Hellinger distance to each class centroid, x then y |
//! | `geo`    | 14    | circularity, convexity, inertia, rotated rectangle, |
//! |          |       | enclosing circle, 7 log-scaled Hu moments           |
//!
//! Standardisation happens in the classifier so the raw values here stay
//! interpretable.

mod density;
mod fourier;
mod geometry;

pub use density::{density_histograms, hellinger, DensityHistogramPair, HIST_BINS};
pub use fourier::{contour_descriptors, fourier_descriptors, Point, RESAMPLE_POINTS};
pub use geometry::{geometric_features, GEO_COUNT};

use thiserror::Error;

use crate::imaging::{BinaryImage, Contour};
use crate::SymbolClass;

pub const FD_COUNT: usize = 16;
pub const HELL_COUNT: usize = 2 * SymbolClass::COUNT;
pub const FEATURE_LEN: usize = FD_COUNT + HELL_COUNT + GEO_COUNT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("glyph has no ink")]
    EmptyGlyph,
    #[error("histogram lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("histogram is not a probability distribution (sum {0})")]
    NotNormalized(f64),
    #[error("contour is degenerate: {0}")]
    DegenerateContour(&'static str),
    #[error("contour has {0} points, at least 8 are required")]
    TooFewPoints(usize),
    #[error("descriptor count must be between 1 and {max}, got {got}")]
    InvalidDescriptorCount { got: usize, max: usize },
    #[error("no training sample for class {0}")]
    MissingClass(SymbolClass),
}

/// Fixed-length feature vector; see the module docs for the layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector([f64; FEATURE_LEN]);

impl FeatureVector {
    pub fn from_parts(
        fd: &[f64; FD_COUNT],
        hell: &[f64; HELL_COUNT],
        geo: &[f64; GEO_COUNT],
    ) -> Self {
        let mut v = [0.0; FEATURE_LEN];
        v[..FD_COUNT].copy_from_slice(fd);
        v[FD_COUNT..FD_COUNT + HELL_COUNT].copy_from_slice(hell);
        v[FD_COUNT + HELL_COUNT..].copy_from_slice(geo);
        Self(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn fd(&self) -> &[f64] {
        &self.0[..FD_COUNT]
    }

    pub fn hell(&self) -> &[f64] {
        &self.0[FD_COUNT..FD_COUNT + HELL_COUNT]
    }

    pub fn geo(&self) -> &[f64] {
        &self.0[FD_COUNT + HELL_COUNT..]
    }
}

/// Mean density histograms per class, computed on training glyphs.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCentroids {
    pub entries: [DensityHistogramPair; SymbolClass::COUNT],
    pub counts: [usize; SymbolClass::COUNT],
}

impl ClassCentroids {
    /// Every class centred on the flat histogram. Useful for models that
    /// never look at real glyphs.
    pub fn uniform() -> Self {
        let flat = DensityHistogramPair {
            x_hist: vec![1.0 / HIST_BINS as f64; HIST_BINS],
            y_hist: vec![1.0 / HIST_BINS as f64; HIST_BINS],
        };
        Self {
            entries: std::array::from_fn(|_| flat.clone()),
            counts: [0; SymbolClass::COUNT],
        }
    }

    pub fn get(&self, class: SymbolClass) -> &DensityHistogramPair {
        &self.entries[class.code()]
    }
}

/// Per-class mean of the training glyphs' histograms, renormalised.
pub fn compute_centroids(
    training: &[(BinaryImage, SymbolClass)],
) -> Result<ClassCentroids, FeatureError> {
    let mut sums = [(); SymbolClass::COUNT].map(|_| (vec![0.0; HIST_BINS], vec![0.0; HIST_BINS]));
    let mut counts = [0usize; SymbolClass::COUNT];
    for (glyph, class) in training {
        let h = density_histograms(glyph)?;
        let (sx, sy) = &mut sums[class.code()];
        sx.iter_mut().zip(&h.x_hist).for_each(|(a, b)| *a += b);
        sy.iter_mut().zip(&h.y_hist).for_each(|(a, b)| *a += b);
        counts[class.code()] += 1;
    }
    if let Some(missing) = SymbolClass::ALL.into_iter().find(|c| counts[c.code()] == 0) {
        return Err(FeatureError::MissingClass(missing));
    }
    let normalise = |v: Vec<f64>| {
        let total: f64 = v.iter().sum();
        v.into_iter().map(|x| x / total).collect::<Vec<_>>()
    };
    let mut entries = sums.into_iter().map(|(x, y)| DensityHistogramPair {
        x_hist: normalise(x),
        y_hist: normalise(y),
    });
    Ok(ClassCentroids {
        entries: std::array::from_fn(|_| entries.next().expect("six classes")),
        counts,
    })
}

/// Full descriptor for one segmented symbol.
///
/// `glyph` is the symbol's ink cropped to its bounding box (for a traced
/// contour that is `contour.ink`).
pub fn extract(
    glyph: &BinaryImage,
    contour: &Contour,
    centroids: &ClassCentroids,
) -> Result<FeatureVector, FeatureError> {
    let fd_vec = contour_descriptors(contour, FD_COUNT)?;
    let hist = density_histograms(glyph)?;
    let mut hell = [0.0; HELL_COUNT];
    for class in SymbolClass::ALL {
        let c = centroids.get(class);
        hell[2 * class.code()] = hellinger(&hist.x_hist, &c.x_hist)?;
        hell[2 * class.code() + 1] = hellinger(&hist.y_hist, &c.y_hist)?;
    }
    let geo = geometric_features(contour)?;
    let mut fd = [0.0; FD_COUNT];
    fd.copy_from_slice(&fd_vec);
    Ok(FeatureVector::from_parts(&fd, &hell, &geo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::trace_contours;

    fn one_hot(bin: usize) -> BinaryImage {
        let mut g = BinaryImage::new(HIST_BINS, HIST_BINS);
        for y in 0..HIST_BINS {
            g.set(bin, y, true);
        }
        g
    }

    fn filled(w: usize, h: usize) -> BinaryImage {
        BinaryImage::from_bits(w, h, vec![true; w * h]).unwrap()
    }

    #[test]
    fn centroid_of_single_samples_is_the_sample() {
        let data: Vec<_> = SymbolClass::ALL
            .into_iter()
            .map(|c| (one_hot(c.code() * 3), c))
            .collect();
        let cents = compute_centroids(&data).unwrap();
        for (g, c) in &data {
            assert_eq!(cents.get(*c), &density_histograms(g).unwrap());
            assert_eq!(cents.counts[c.code()], 1);
        }
    }

    #[test]
    fn centroid_of_two_one_hots() {
        let mut data: Vec<_> = SymbolClass::ALL
            .into_iter()
            .map(|c| (filled(4, 4), c))
            .collect();
        data[0].0 = one_hot(0);
        data.push((one_hot(2), SymbolClass::Up));
        let cents = compute_centroids(&data).unwrap();
        let x = &cents.get(SymbolClass::Up).x_hist;
        assert!((x[0] - 0.5).abs() < 1e-15 && (x[2] - 0.5).abs() < 1e-15);
        assert_eq!(x.iter().filter(|&&v| v != 0.0).count(), 2);
        // Two identical samples: centroid equals them.
        let d = cents.get(SymbolClass::Down);
        assert_eq!(d, &density_histograms(&filled(4, 4)).unwrap());
    }

    #[test]
    fn missing_class_is_reported() {
        let data = vec![(filled(3, 3), SymbolClass::Up)];
        assert_eq!(
            compute_centroids(&data).unwrap_err(),
            FeatureError::MissingClass(SymbolClass::Down)
        );
    }

    #[test]
    fn matching_centroid_gives_zero_distance() {
        let glyph = BinaryImage::from_ascii(&[
            "....##....",
            "...####...",
            "..##.###..",
            ".##..##.#.",
            "....##....",
            "....##....",
            "....##....",
            "....##....",
        ]);
        let contour = &trace_contours(&glyph, 1)[0];
        let mut cents = ClassCentroids::uniform();
        cents.entries[0] = density_histograms(&contour.ink).unwrap();
        let fv = extract(&contour.ink, contour, &cents).unwrap();
        assert_eq!(fv.as_slice().len(), FEATURE_LEN);
        assert_eq!(fv.hell()[0], 0.0);
        assert_eq!(fv.hell()[1], 0.0);
        assert!(fv.as_slice().iter().all(|v| v.is_finite()));
        assert_eq!(fv.fd()[0], 1.0);
    }
}
