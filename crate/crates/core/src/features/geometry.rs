//! Geometric shape features of a filled contour region.
//!
//! All quantities are computed in bounding-box-local coordinates, so they
//! are exactly invariant to where the glyph sits on the page. Pixels are
//! unit squares centred at `(x + 0.5, y + 0.5)`.

use std::f64::consts::PI;

use super::FeatureError;
use crate::imaging::Contour;

pub const GEO_COUNT: usize = 14;

/// `[circularity, convexity, inertia ratio, rect aspect, sin 2θ, cos 2θ,
/// enclosing-circle fill, hu₁..hu₇]`.
///
/// * circularity `4πA/P²`, with `A` the filled pixel count and `P` the
///   perimeter of the pixel region: the boundary chain smoothed through
///   step midpoints, widened by half a pixel (adds `π`). Capped at 1.
/// * convexity: `A` over the area of the convex hull of the pixel squares.
/// * inertia ratio: minor over major principal axis length.
/// * minimum-area rotated rectangle: short/long side and the long side's
///   angle θ as `(sin 2θ, cos 2θ)`.
/// * `A / πr²` for the minimum enclosing circle of the pixel squares.
/// * Hu invariants, each mapped to `sign(h)·log₁₀(|h| + 1e-30)`.
pub fn geometric_features(contour: &Contour) -> Result<[f64; GEO_COUNT], FeatureError> {
    let filled = contour.filled();
    let area = filled.count_ink();
    if area == 0 || contour.points.is_empty() {
        return Err(FeatureError::DegenerateContour("empty region"));
    }
    let area_f = area as f64;
    let (ox, oy) = (contour.bbox.x as i64, contour.bbox.y as i64);
    let local: Vec<(i64, i64)> = contour
        .points
        .iter()
        .map(|p| (p.x as i64 - ox, p.y as i64 - oy))
        .collect();

    let perimeter = midpoint_perimeter(&local) + PI;
    let circularity = (4.0 * PI * area_f / (perimeter * perimeter)).min(1.0);

    let corners: Vec<(i64, i64)> = local
        .iter()
        .flat_map(|&(x, y)| [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
        .collect();
    let hull = convex_hull(corners);
    let hull_area = polygon_area2(&hull) as f64 / 2.0;
    if hull_area <= 0.0 {
        return Err(FeatureError::DegenerateContour("zero hull area"));
    }
    let convexity = (area_f / hull_area).min(1.0);

    let m = Moments::of(&filled);
    let (major, minor) = m.principal_variances();
    let inertia_ratio = if major > 0.0 {
        (minor / major).sqrt()
    } else {
        1.0
    };

    let hull_f: Vec<(f64, f64)> = hull.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let (aspect, theta) = min_area_rect(&hull_f);
    let (_, radius) = min_enclosing_circle(&hull_f);
    let circle_fill = (area_f / (PI * radius * radius)).min(1.0);

    let mut out = [0.0; GEO_COUNT];
    out[0] = circularity;
    out[1] = convexity;
    out[2] = inertia_ratio;
    out[3] = aspect;
    out[4] = (2.0 * theta).sin();
    out[5] = (2.0 * theta).cos();
    out[6] = circle_fill;
    for (slot, h) in out[7..].iter_mut().zip(m.hu()) {
        *slot = h.signum() * (h.abs() + 1e-30).log10();
    }
    Ok(out)
}

fn midpoint_perimeter(points: &[(i64, i64)]) -> f64 {
    let n = points.len();
    if n < 2 {
        return 0.0;
    }
    let mid = |i: usize| {
        let (a, b) = (points[i % n], points[(i + 1) % n]);
        ((a.0 + b.0) as f64 / 2.0, (a.1 + b.1) as f64 / 2.0)
    };
    (0..n)
        .map(|i| {
            let (p, q) = (mid(i), mid(i + 1));
            (q.0 - p.0).hypot(q.1 - p.1)
        })
        .sum()
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; collinear points dropped.
fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Twice the signed area (shoelace).
fn polygon_area2(poly: &[(i64, i64)]) -> i64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<i64>()
        .abs()
}

/// Rotating calipers over hull edges. Returns (short/long, long-side angle).
fn min_area_rect(hull: &[(f64, f64)]) -> (f64, f64) {
    let n = hull.len();
    let mut best: Option<(f64, f64, f64, f64)> = None; // area, extent_u, extent_v, angle_u
    for i in 0..n {
        let (a, b) = (hull[i], hull[(i + 1) % n]);
        let len = (b.0 - a.0).hypot(b.1 - a.1);
        if len == 0.0 {
            continue;
        }
        let u = ((b.0 - a.0) / len, (b.1 - a.1) / len);
        let v = (-u.1, u.0);
        let (mut umin, mut umax, mut vmin, mut vmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in hull {
            let pu = p.0 * u.0 + p.1 * u.1;
            let pv = p.0 * v.0 + p.1 * v.1;
            umin = umin.min(pu);
            umax = umax.max(pu);
            vmin = vmin.min(pv);
            vmax = vmax.max(pv);
        }
        let (eu, ev) = (umax - umin, vmax - vmin);
        let area = eu * ev;
        if best.is_none_or(|b| area < b.0 - 1e-9) {
            best = Some((area, eu, ev, u.1.atan2(u.0)));
        }
    }
    let Some((_, eu, ev, angle_u)) = best else {
        return (1.0, 0.0);
    };
    if eu >= ev {
        (ev / eu, angle_u)
    } else {
        (eu / ev, angle_u + PI / 2.0)
    }
}

/// Smallest circle containing every point (incremental Welzl).
fn min_enclosing_circle(pts: &[(f64, f64)]) -> ((f64, f64), f64) {
    let dist = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);
    let inside = |c: (f64, f64), r: f64, p: (f64, f64)| dist(c, p) <= r * (1.0 + 1e-12) + 1e-9;
    let two =
        |a: (f64, f64), b: (f64, f64)| (((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0), dist(a, b) / 2.0);
    let three = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| {
        let (bx, by) = (b.0 - a.0, b.1 - a.1);
        let (cx, cy) = (c.0 - a.0, c.1 - a.1);
        let d = 2.0 * (bx * cy - by * cx);
        if d.abs() < 1e-12 {
            // Collinear: the widest pair spans the others.
            return [two(a, b), two(a, c), two(b, c)]
                .into_iter()
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("three candidates");
        }
        let ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / d;
        let uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / d;
        ((a.0 + ux, a.1 + uy), ux.hypot(uy))
    };

    let Some(&first) = pts.first() else {
        return ((0.0, 0.0), 0.0);
    };
    let (mut c, mut r) = (first, 0.0);
    for i in 1..pts.len() {
        if inside(c, r, pts[i]) {
            continue;
        }
        (c, r) = (pts[i], 0.0);
        for j in 0..i {
            if inside(c, r, pts[j]) {
                continue;
            }
            (c, r) = two(pts[i], pts[j]);
            for k in 0..j {
                if !inside(c, r, pts[k]) {
                    (c, r) = three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    (c, r)
}

/// Central moments of a pixel region up to third order.
struct Moments {
    m00: f64,
    mu20: f64,
    mu02: f64,
    mu11: f64,
    mu30: f64,
    mu03: f64,
    mu21: f64,
    mu12: f64,
}

impl Moments {
    fn of(region: &crate::imaging::BinaryImage) -> Self {
        let mut pixels = Vec::new();
        for y in 0..region.height() {
            for x in 0..region.width() {
                if region.get(x, y) {
                    pixels.push((x as f64 + 0.5, y as f64 + 0.5));
                }
            }
        }
        let m00 = pixels.len() as f64;
        let cx = pixels.iter().map(|p| p.0).sum::<f64>() / m00;
        let cy = pixels.iter().map(|p| p.1).sum::<f64>() / m00;
        let mut m = Moments {
            m00,
            mu20: 0.0,
            mu02: 0.0,
            mu11: 0.0,
            mu30: 0.0,
            mu03: 0.0,
            mu21: 0.0,
            mu12: 0.0,
        };
        for (x, y) in pixels {
            let (dx, dy) = (x - cx, y - cy);
            m.mu20 += dx * dx;
            m.mu02 += dy * dy;
            m.mu11 += dx * dy;
            m.mu30 += dx * dx * dx;
            m.mu03 += dy * dy * dy;
            m.mu21 += dx * dx * dy;
            m.mu12 += dx * dy * dy;
        }
        m
    }

    /// Eigenvalues of the covariance of the region taken as a union of unit
    /// squares (each pixel adds 1/12 to both axis variances).
    fn principal_variances(&self) -> (f64, f64) {
        let a = self.mu20 / self.m00 + 1.0 / 12.0;
        let c = self.mu02 / self.m00 + 1.0 / 12.0;
        let b = self.mu11 / self.m00;
        let mean = (a + c) / 2.0;
        let spread = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        (mean + spread, (mean - spread).max(0.0))
    }

    fn hu(&self) -> [f64; 7] {
        let eta = |mu: f64, order: i32| mu / self.m00.powf(1.0 + order as f64 / 2.0);
        let (n20, n02, n11) = (eta(self.mu20, 2), eta(self.mu02, 2), eta(self.mu11, 2));
        let (n30, n03, n21, n12) = (
            eta(self.mu30, 3),
            eta(self.mu03, 3),
            eta(self.mu21, 3),
            eta(self.mu12, 3),
        );
        let (s1, s2) = (n30 + n12, n21 + n03);
        let (d1, d2) = (n30 - 3.0 * n12, 3.0 * n21 - n03);
        [
            n20 + n02,
            (n20 - n02).powi(2) + 4.0 * n11 * n11,
            d1 * d1 + d2 * d2,
            s1 * s1 + s2 * s2,
            d1 * s1 * (s1 * s1 - 3.0 * s2 * s2) + d2 * s2 * (3.0 * s1 * s1 - s2 * s2),
            (n20 - n02) * (s1 * s1 - s2 * s2) + 4.0 * n11 * s1 * s2,
            d2 * s1 * (s1 * s1 - 3.0 * s2 * s2) - d1 * s2 * (3.0 * s1 * s1 - s2 * s2),
        ]
    }
}
