//! Connected-component segmentation and Moore-neighbour boundary tracing.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelCoord {
    pub x: i32,
    pub y: i32,
}

impl PixelCoord {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }
}

/// Axis-aligned pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BBox {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl BBox {
    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + self.width as f64 / 2.0,
            self.y as f64 + self.height as f64 / 2.0,
        )
    }

    pub fn contains(&self, p: PixelCoord) -> bool {
        p.x >= self.x as i32
            && p.y >= self.y as i32
            && (p.x as i64) < (self.x + self.width) as i64
            && (p.y as i64) < (self.y + self.height) as i64
    }

    /// `[x, y, w, h]`, the layout used in JSON responses.
    pub fn to_array(&self) -> [usize; 4] {
        [self.x, self.y, self.width, self.height]
    }
}

/// Outer boundary of one 8-connected ink component.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    /// Closed boundary loop, clockwise on screen, starting at the topmost,
    /// leftmost pixel. The closing step back to `points[0]` is implicit.
    pub points: Vec<PixelCoord>,
    pub bbox: BBox,
    /// Pixels enclosed by the outer boundary, holes included.
    pub area_px: usize,
    /// The component's own ink, cropped to `bbox`.
    pub ink: BinaryImage,
}

impl Contour {
    /// Region enclosed by the boundary (ink plus holes), cropped to `bbox`.
    pub fn filled(&self) -> BinaryImage {
        fill_holes(&self.ink)
    }
}

// Clockwise on screen (y grows downwards), starting east.
const DIRS: [(i32, i32); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];
const WEST: usize = 4;

fn dir_index(dx: i32, dy: i32) -> usize {
    DIRS.iter()
        .position(|&d| d == (dx, dy))
        .expect("offset is a Moore neighbour")
}

/// One contour per 8-connected component whose filled area reaches
/// `min_area`, in raster order of the components' first pixels.
pub fn trace_contours(img: &BinaryImage, min_area: usize) -> Vec<Contour> {
    let (w, h) = (img.width(), img.height());
    let mut labels = vec![0u32; w * h];
    let mut next_label = 0u32;
    let mut contours = Vec::new();
    let mut queue = VecDeque::new();

    for start in 0..w * h {
        if !img.bits()[start] || labels[start] != 0 {
            continue;
        }
        next_label += 1;
        let label = next_label;
        labels[start] = label;
        queue.push_back(start);
        let (mut x0, mut y0, mut x1, mut y1) = (w, h, 0, 0);
        let mut pixels = Vec::new();
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % w, i / w);
            pixels.push(i);
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
            for &(dx, dy) in &DIRS {
                let (nx, ny) = (x as i64 + dx as i64, y as i64 + dy as i64);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if img.bits()[j] && labels[j] == 0 {
                    labels[j] = label;
                    queue.push_back(j);
                }
            }
        }

        let bbox = BBox {
            x: x0,
            y: y0,
            width: x1 - x0 + 1,
            height: y1 - y0 + 1,
        };
        let mut ink = BinaryImage::new(bbox.width, bbox.height);
        for &i in &pixels {
            ink.set(i % w - x0, i / w - y0, true);
        }
        let area_px = fill_holes(&ink).count_ink();
        if area_px < min_area {
            continue;
        }
        // Raster scan order makes `start` the topmost-leftmost pixel.
        let points = moore_trace(&ink, (start % w - x0) as i32, (start / w - y0) as i32)
            .into_iter()
            .map(|p| PixelCoord::new(p.x + x0 as i32, p.y + y0 as i32))
            .collect();
        contours.push(Contour {
            points,
            bbox,
            area_px,
            ink,
        });
    }
    contours
}

/// Moore-neighbour tracing with Jacob's stopping criterion: halt when the
/// first move out of the start pixel is about to be repeated.
fn moore_trace(ink: &BinaryImage, sx: i32, sy: i32) -> Vec<PixelCoord> {
    let start = PixelCoord::new(sx, sy);
    let mut points = vec![start];
    let mut current = start;
    // Entered from the west: nothing left of or above the start pixel is ink.
    let mut backtrack = WEST;
    let mut first_move: Option<(PixelCoord, PixelCoord)> = None;
    let limit = 4 * ink.width() * ink.height() + 8;

    for _ in 0..limit {
        let mut found = None;
        for k in 1..=8 {
            let d = (backtrack + k) % 8;
            let (dx, dy) = DIRS[d];
            let cand = PixelCoord::new(current.x + dx, current.y + dy);
            if ink.get_signed(cand.x as i64, cand.y as i64) {
                found = Some((cand, (backtrack + k - 1) % 8));
                break;
            }
        }
        let Some((next, prev_dir)) = found else {
            // Isolated pixel.
            return points;
        };
        match first_move {
            None => first_move = Some((current, next)),
            Some(m) if m == (current, next) => {
                points.pop();
                return points;
            }
            Some(_) => {}
        }
        let (px, py) = DIRS[prev_dir];
        backtrack = dir_index(current.x + px - next.x, current.y + py - next.y);
        points.push(next);
        current = next;
    }
    points
}

/// Ink plus every background pixel not 4-connected to the outside.
fn fill_holes(ink: &BinaryImage) -> BinaryImage {
    let (w, h) = (ink.width() + 2, ink.height() + 2);
    let inside = |x: usize, y: usize| {
        x >= 1 && y >= 1 && x <= ink.width() && y <= ink.height() && ink.get(x - 1, y - 1)
    };
    let mut outside = vec![false; w * h];
    let mut queue = VecDeque::from([0usize]);
    outside[0] = true;
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % w, i / w);
        let neighbours = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        for (nx, ny) in neighbours {
            if nx >= w || ny >= h {
                continue;
            }
            let j = ny * w + nx;
            if !outside[j] && !inside(nx, ny) {
                outside[j] = true;
                queue.push_back(j);
            }
        }
    }
    let mut filled = BinaryImage::new(ink.width(), ink.height());
    for y in 0..ink.height() {
        for x in 0..ink.width() {
            if !outside[(y + 1) * w + x + 1] {
                filled.set(x, y, true);
            }
        }
    }
    filled
}
