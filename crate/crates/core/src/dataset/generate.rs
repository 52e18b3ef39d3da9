use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{DatasetError, LabeledImage};
use crate::imaging::GrayImage;
use crate::SymbolClass;

pub const MIN_SIZE: usize = 64;

/// Skeleton units to pixels, as a fraction of the image size.
const UNIT_SCALE: f64 = 0.33;
const JITTER: f64 = 0.06;
const MAX_ROTATION_DEG: f64 = 10.0;
const NOISE_SIGMA: f64 = 8.0;
const HEAD_LEN: f64 = 0.4;
const HEAD_HALF_ANGLE_DEG: f64 = 35.0;
const ARC_RADIUS: f64 = 0.8;
const ARC_GAP_DEG: f64 = 70.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Stroke {
    /// Catmull-Rom spline through the points, otherwise straight segments.
    pub smooth: bool,
    pub indices: Vec<usize>,
}

/// Control points in unit coordinates (y down, roughly within ±1) and the
/// strokes drawn through them. Strokes sharing an index stay joined after
/// jitter.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    pub points: Vec<(f64, f64)>,
    pub strokes: Vec<Stroke>,
}

impl Skeleton {
    fn map(&self, f: impl Fn((f64, f64)) -> (f64, f64)) -> Self {
        Self {
            points: self.points.iter().copied().map(f).collect(),
            strokes: self.strokes.clone(),
        }
    }

    pub fn mirrored_horizontally(&self) -> Self {
        self.map(|(u, v)| (-u, v))
    }

    pub fn mirrored_vertically(&self) -> Self {
        self.map(|(u, v)| (u, -v))
    }
}

fn rotate(v: (f64, f64), deg: f64) -> (f64, f64) {
    let (s, c) = deg.to_radians().sin_cos();
    (v.0 * c - v.1 * s, v.0 * s + v.1 * c)
}

/// Shaft through `shaft` ending in a V head whose arms trail back along
/// `dir`, the direction of travel at the tip.
fn with_head(shaft: Vec<(f64, f64)>, smooth: bool, dir: (f64, f64)) -> Skeleton {
    let norm = dir.0.hypot(dir.1);
    let back = (-dir.0 / norm * HEAD_LEN, -dir.1 / norm * HEAD_LEN);
    let tip = *shaft.last().expect("nonempty shaft");
    let arm = |deg| {
        let d = rotate(back, deg);
        (tip.0 + d.0, tip.1 + d.1)
    };
    let n = shaft.len();
    let mut points = shaft;
    points.push(arm(HEAD_HALF_ANGLE_DEG));
    points.push(arm(-HEAD_HALF_ANGLE_DEG));
    Skeleton {
        points,
        strokes: vec![
            Stroke {
                smooth,
                indices: (0..n).collect(),
            },
            Stroke {
                smooth: false,
                indices: vec![n, n - 1, n + 1],
            },
        ],
    }
}

/// Canonical, unperturbed skeleton of a class.
pub fn skeleton(class: SymbolClass) -> Skeleton {
    match class {
        SymbolClass::Up => with_head(vec![(0.0, 0.9), (0.0, -0.9)], false, (0.0, -1.0)),
        SymbolClass::Down => skeleton(SymbolClass::Up).mirrored_vertically(),
        SymbolClass::ForwardRight => {
            let shaft = vec![(-0.55, 0.9), (-0.5, 0.1), (-0.2, -0.45), (0.75, -0.6)];
            with_head(shaft, true, (0.95, -0.15))
        }
        SymbolClass::ForwardLeft => skeleton(SymbolClass::ForwardRight).mirrored_horizontally(),
        SymbolClass::RotateRight => {
            // Clockwise on screen: the screen angle grows with y pointing down.
            let start = -90.0 + ARC_GAP_DEG / 2.0;
            let sweep = 360.0 - ARC_GAP_DEG;
            let steps = 8;
            let shaft: Vec<(f64, f64)> = (0..=steps)
                .map(|i| {
                    let t = (start + sweep * i as f64 / steps as f64).to_radians();
                    (ARC_RADIUS * t.cos(), ARC_RADIUS * t.sin())
                })
                .collect();
            let end = (start + sweep).to_radians();
            with_head(shaft, true, (-end.sin(), end.cos()))
        }
        SymbolClass::RotateLeft => skeleton(SymbolClass::RotateRight).mirrored_horizontally(),
    }
}

fn catmull_rom(pts: &[(f64, f64)], per_span: usize) -> Vec<(f64, f64)> {
    let n = pts.len();
    let at = |i: isize| pts[i.clamp(0, n as isize - 1) as usize];
    let mut out = Vec::with_capacity((n - 1) * per_span + 1);
    for i in 0..n as isize - 1 {
        let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        for s in 0..per_span {
            let t = s as f64 / per_span as f64;
            let (t2, t3) = (t * t, t * t * t);
            let blend = |a: f64, b: f64, c: f64, d: f64| {
                0.5 * (2.0 * b
                    + (c - a) * t
                    + (2.0 * a - 5.0 * b + 4.0 * c - d) * t2
                    + (3.0 * b - a - 3.0 * c + d) * t3)
            };
            out.push((blend(p0.0, p1.0, p2.0, p3.0), blend(p0.1, p1.1, p2.1, p3.1)));
        }
    }
    out.push(pts[n - 1]);
    out
}

/// A glyph ready to paint: pixel-space polylines and a stroke radius.
struct Glyph {
    polylines: Vec<Vec<(f64, f64)>>,
    radius: f64,
}

fn glyph_rng(class: SymbolClass, seed: u64, size: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(size as u64).to_le_bytes());
    key[16] = class.code() as u8;
    key[17] = 0x48;
    ChaCha8Rng::from_seed(key)
}

/// Perturbed glyph of the given nominal size centred at `(cx, cy)`.
fn perturbed_glyph(class: SymbolClass, seed: u64, size: usize, cx: f64, cy: f64) -> Glyph {
    let mut rng = glyph_rng(class, seed, size);
    let s = size as f64;
    let angle = rng.random_range(-MAX_ROTATION_DEG..=MAX_ROTATION_DEG);
    let width = rng.random_range(2.0..=6.0);
    let sk = skeleton(class);
    let points: Vec<(f64, f64)> = sk
        .points
        .iter()
        .map(|&(u, v)| {
            let (ru, rv) = rotate((u, v), angle);
            // Uniform in a disc of radius JITTER · size.
            let r = JITTER * s * rng.random::<f64>().sqrt();
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            (
                cx + UNIT_SCALE * s * ru + r * phi.cos(),
                cy + UNIT_SCALE * s * rv + r * phi.sin(),
            )
        })
        .collect();
    let polylines = sk
        .strokes
        .iter()
        .map(|st| {
            let pts: Vec<(f64, f64)> = st.indices.iter().map(|&i| points[i]).collect();
            if st.smooth {
                catmull_rom(&pts, 12)
            } else {
                pts
            }
        })
        .collect();
    Glyph {
        polylines,
        radius: width / 2.0 + 0.5,
    }
}

fn seg_dist2(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (ex, ey) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    ex * ex + ey * ey
}

fn stamp(mask: &mut [bool], w: usize, h: usize, glyph: &Glyph) {
    let r = glyph.radius;
    for line in &glyph.polylines {
        for pair in line.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let x0 = (a.0.min(b.0) - r).floor().max(0.0) as usize;
            let y0 = (a.1.min(b.1) - r).floor().max(0.0) as usize;
            let x1 = ((a.0.max(b.0) + r).ceil().max(0.0) as usize).min(w.saturating_sub(1));
            let y1 = ((a.1.max(b.1) + r).ceil().max(0.0) as usize).min(h.saturating_sub(1));
            for y in y0..=y1 {
                for x in x0..=x1 {
                    if seg_dist2((x as f64, y as f64), a, b) <= r * r {
                        mask[y * w + x] = true;
                    }
                }
            }
        }
    }
}

/// Paper and ink levels plus Gaussian intensity noise.
fn paint(mask: &[bool], w: usize, h: usize, rng: &mut ChaCha8Rng) -> GrayImage {
    let paper: f64 = rng.random_range(225.0..=245.0);
    let ink: f64 = rng.random_range(20.0..=50.0);
    let noise = Normal::new(0.0, NOISE_SIGMA).expect("positive sigma");
    let pixels = mask
        .iter()
        .map(|&m| {
            let base = if m { ink } else { paper };
            (base + noise.sample(rng)).round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::new(w, h, pixels).expect("mask matches dimensions")
}

/// One `size`×`size` arrow image, deterministic in `(class, seed, size)`.
pub fn gen_arrow(class: SymbolClass, seed: u64, size: usize) -> Result<LabeledImage, DatasetError> {
    if size < MIN_SIZE {
        return Err(DatasetError::SizeTooSmall {
            size,
            min: MIN_SIZE,
        });
    }
    let c = size as f64 / 2.0;
    let glyph = perturbed_glyph(class, seed, size, c, c);
    let mut mask = vec![false; size * size];
    stamp(&mut mask, size, size, &glyph);
    let mut rng = glyph_rng(class, seed, size);
    // Advance past the draws used for the glyph's shape.
    rng.set_word_pos(1 << 20);
    Ok(LabeledImage {
        image: paint(&mask, size, size, &mut rng),
        label: class,
        id: format!("{}_{seed:06}", class.name()),
    })
}

/// `per_class` images of every class; sample `i` of a class uses seed
/// `seed · 1_000_000 + i`.
pub fn gen_dataset(
    per_class: usize,
    seed: u64,
    size: usize,
) -> Result<Vec<LabeledImage>, DatasetError> {
    let mut out = Vec::with_capacity(per_class * SymbolClass::COUNT);
    for class in SymbolClass::ALL {
        for i in 0..per_class as u64 {
            out.push(gen_arrow(
                class,
                seed.wrapping_mul(1_000_000).wrapping_add(i),
                size,
            )?);
        }
    }
    Ok(out)
}

/// Several glyphs on one page, laid out left to right in rows of `cols`
/// cells of `cell`×`cell` pixels. Each glyph is the one [`gen_arrow`]
/// would draw for its `(class, seed)` at size `cell`.
pub fn compose_sheet(
    glyphs: &[(SymbolClass, u64)],
    cell: usize,
    cols: usize,
    noise_seed: u64,
) -> Result<GrayImage, DatasetError> {
    if cell < MIN_SIZE {
        return Err(DatasetError::SizeTooSmall {
            size: cell,
            min: MIN_SIZE,
        });
    }
    if cols == 0 {
        return Err(DatasetError::BadLayout("need at least one column".into()));
    }
    let rows = glyphs.len().div_ceil(cols).max(1);
    let (w, h) = (cols * cell, rows * cell);
    let mut mask = vec![false; w * h];
    for (i, &(class, seed)) in glyphs.iter().enumerate() {
        let cx = (i % cols) as f64 * cell as f64 + cell as f64 / 2.0;
        let cy = (i / cols) as f64 * cell as f64 + cell as f64 / 2.0;
        stamp(&mut mask, w, h, &perturbed_glyph(class, seed, cell, cx, cy));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
    Ok(paint(&mask, w, h, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a = gen_arrow(SymbolClass::Up, 1, 300).unwrap();
        let b = gen_arrow(SymbolClass::Up, 1, 300).unwrap();
        assert_eq!(a, b);
        let c = gen_arrow(SymbolClass::Up, 2, 300).unwrap();
        assert_ne!(a.image, c.image);
    }

    #[test]
    fn mirror_pairs() {
        assert_eq!(
            skeleton(SymbolClass::RotateLeft),
            skeleton(SymbolClass::RotateRight).mirrored_horizontally()
        );
        assert_eq!(
            skeleton(SymbolClass::ForwardLeft),
            skeleton(SymbolClass::ForwardRight).mirrored_horizontally()
        );
        assert_eq!(
            skeleton(SymbolClass::Down),
            skeleton(SymbolClass::Up).mirrored_vertically()
        );
    }

    #[test]
    fn rotate_right_turns_clockwise_on_screen() {
        // The shaft starts right of the gap and the head points back
        // towards it: rightwards across the top.
        let sk = skeleton(SymbolClass::RotateRight);
        assert!(sk.points[0].0 > 0.0 && sk.points[0].1 < 0.0);
        let tip = sk.points[8];
        assert!(tip.0 < 0.0 && tip.1 < 0.0);
    }

    #[test]
    fn too_small() {
        assert!(matches!(
            gen_arrow(SymbolClass::Down, 0, 63),
            Err(DatasetError::SizeTooSmall { size: 63, min: 64 })
        ));
    }

    #[test]
    fn ink_is_dark_on_light_paper() {
        let img = gen_arrow(SymbolClass::ForwardLeft, 5, 128).unwrap().image;
        let dark = img.pixels().iter().filter(|&&p| p < 100).count();
        let light = img.pixels().iter().filter(|&&p| p > 180).count();
        assert!(dark > 100 && light > dark * 5, "{dark} {light}");
    }

    #[test]
    fn balanced_dataset() {
        let d = gen_dataset(2, 7, 64).unwrap();
        assert_eq!(d.len(), 12);
        for c in SymbolClass::ALL {
            assert_eq!(d.iter().filter(|s| s.label == c).count(), 2);
        }
        let mut ids: Vec<&str> = d.iter().map(|s| s.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 12);
    }
}
