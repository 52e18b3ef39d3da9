use std::cmp::Ordering;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::FeatureError;
use crate::imaging::Contour;

/// Number of arc-length samples taken along a contour before the transform.
pub const RESAMPLE_POINTS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Descriptors of a traced contour; see [`fourier_descriptors`].
pub fn contour_descriptors(contour: &Contour, k: usize) -> Result<Vec<f64>, FeatureError> {
    let pts: Vec<Point> = contour
        .points
        .iter()
        .map(|p| Point::new(p.x as f64, p.y as f64))
        .collect();
    fourier_descriptors(&pts, k)
}

/// Scale-normalised Fourier magnitudes `|Z₁|..|Z_k|` of a closed polygon.
///
/// The polygon is resampled at [`RESAMPLE_POINTS`] equal arc-length steps
/// and read as complex numbers `x + iy`. Resampling starts at the vertex
/// with the smallest `(y, x)` (ties broken by the lexicographically
/// smallest rotation), so the result does not depend on which vertex the
/// input list happens to start at. `Z₀` is dropped and every magnitude is
/// divided by `|Z₁|`, making the first value exactly 1.
pub fn fourier_descriptors(points: &[Point], k: usize) -> Result<Vec<f64>, FeatureError> {
    if points.len() < 8 {
        return Err(FeatureError::TooFewPoints(points.len()));
    }
    if k == 0 || k >= RESAMPLE_POINTS {
        return Err(FeatureError::InvalidDescriptorCount {
            got: k,
            max: RESAMPLE_POINTS - 1,
        });
    }
    let start = canonical_start(points);
    let ordered: Vec<Point> = points[start..]
        .iter()
        .chain(&points[..start])
        .copied()
        .collect();
    let mut samples = resample_closed(&ordered, RESAMPLE_POINTS)
        .ok_or(FeatureError::DegenerateContour("all points coincide"))?;

    let fft = FftPlanner::<f64>::new().plan_fft_forward(RESAMPLE_POINTS);
    fft.process(&mut samples);

    let base = samples[1].norm();
    let scale: f64 = samples.iter().map(|z| z.norm()).sum();
    if base <= 1e-12 * scale {
        return Err(FeatureError::DegenerateContour("first harmonic vanishes"));
    }
    Ok(samples[1..=k].iter().map(|z| z.norm() / base).collect())
}

fn cmp_point(a: &Point, b: &Point) -> Ordering {
    a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x))
}

fn canonical_start(points: &[Point]) -> usize {
    let n = points.len();
    let min = points
        .iter()
        .min_by(|a, b| cmp_point(a, b))
        .expect("nonempty");
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| cmp_point(&points[i], min) == Ordering::Equal)
        .collect();
    candidates
        .into_iter()
        .min_by(|&a, &b| {
            (0..n)
                .map(|j| cmp_point(&points[(a + j) % n], &points[(b + j) % n]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .expect("at least one candidate")
}

/// Equal arc-length samples around the closed polygon, first sample at
/// `points[0]`. `None` when the perimeter is zero.
fn resample_closed(points: &[Point], count: usize) -> Option<Vec<Complex64>> {
    let n = points.len();
    let seg_len: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            (b.x - a.x).hypot(b.y - a.y)
        })
        .collect();
    let perimeter: f64 = seg_len.iter().sum();
    if perimeter <= 0.0 || !perimeter.is_finite() {
        return None;
    }
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    let mut seg_start = 0.0;
    for j in 0..count {
        let target = perimeter * j as f64 / count as f64;
        while seg + 1 < n && seg_start + seg_len[seg] <= target {
            seg_start += seg_len[seg];
            seg += 1;
        }
        let (a, b) = (points[seg], points[(seg + 1) % n]);
        let t = if seg_len[seg] > 0.0 {
            ((target - seg_start) / seg_len[seg]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(Complex64::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, r: f64) -> Vec<Point> {
        // Clockwise on screen: angle grows with y pointing down.
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Point::new(100.0 + r * t.cos(), 100.0 + r * t.sin())
            })
            .collect()
    }

    #[test]
    fn circle_has_a_single_harmonic() {
        let fd = fourier_descriptors(&circle(400, 50.0), 16).unwrap();
        assert_eq!(fd[0], 1.0);
        assert!(fd[1..].iter().all(|&v| v < 1e-3), "{fd:?}");
    }

    #[test]
    fn doubling_scale() {
        let pts = vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 1.0),
            Point::new(7.0, 0.0),
            Point::new(9.0, 5.0),
            Point::new(6.0, 9.0),
            Point::new(2.0, 8.0),
            Point::new(3.0, 5.0),
            Point::new(-1.0, 3.0),
        ];
        let doubled: Vec<Point> = pts
            .iter()
            .map(|p| Point::new(2.0 * p.x, 2.0 * p.y))
            .collect();
        let a = fourier_descriptors(&pts, 16).unwrap();
        let b = fourier_descriptors(&doubled, 16).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_inputs() {
        let same = vec![Point::new(3.0, 3.0); 10];
        assert!(matches!(
            fourier_descriptors(&same, 4),
            Err(FeatureError::DegenerateContour(_))
        ));
        assert_eq!(
            fourier_descriptors(&same[..5], 4).unwrap_err(),
            FeatureError::TooFewPoints(5)
        );
        assert!(matches!(
            fourier_descriptors(&circle(20, 5.0), 0),
            Err(FeatureError::InvalidDescriptorCount { .. })
        ));
    }

    #[test]
    fn repeated_minimum_vertex_picks_smallest_rotation() {
        let p = |x: f64, y: f64| Point::new(x, y);
        let pts = [p(0.0, 0.0), p(5.0, 5.0), p(0.0, 0.0), p(3.0, 3.0)];
        assert_eq!(canonical_start(&pts), 2);
        let rotated = [p(5.0, 5.0), p(0.0, 0.0), p(3.0, 3.0), p(0.0, 0.0)];
        assert_eq!(canonical_start(&rotated), 1);
    }
}
