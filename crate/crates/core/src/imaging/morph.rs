//! Binary morphology.
//!
//! Pixels outside the raster are background for both primitives. Opening and
//! closing are evaluated on a frame padded by the element radius and then
//! cropped, so they behave exactly as on an unbounded plane: opening never
//! adds ink and closing never removes it, even along the image border.

use super::{BinaryImage, ImagingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphOp {
    Erode,
    Dilate,
    /// Erode, then dilate.
    Open,
    /// Dilate, then erode.
    Close,
}

/// Odd-sized boolean mask anchored at its centre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    width: usize,
    height: usize,
    mask: Vec<bool>,
}

impl StructuringElement {
    pub fn new(width: usize, height: usize, mask: Vec<bool>) -> Result<Self, ImagingError> {
        if width.is_multiple_of(2)
            || height.is_multiple_of(2)
            || mask.len() != width * height
            || !mask.iter().any(|&b| b)
        {
            return Err(ImagingError::InvalidStructuringElement);
        }
        Ok(Self {
            width,
            height,
            mask,
        })
    }

    /// Full `size`×`size` square.
    pub fn square(size: usize) -> Result<Self, ImagingError> {
        Self::new(size, size, vec![true; size * size])
    }

    /// 3×3 plus-shaped element.
    pub fn cross3() -> Self {
        #[rustfmt::skip]
        let mask = vec![
            false, true, false,
            true,  true, true,
            false, true, false,
        ];
        Self::new(3, 3, mask).expect("valid cross")
    }

    fn offsets(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (rx, ry) = ((self.width / 2) as i64, (self.height / 2) as i64);
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| ((i % self.width) as i64 - rx, (i / self.width) as i64 - ry))
    }

    fn radius(&self) -> (usize, usize) {
        (self.width / 2, self.height / 2)
    }
}

pub fn morph(img: &BinaryImage, op: MorphOp, se: &StructuringElement) -> BinaryImage {
    match op {
        MorphOp::Erode => erode(img, se),
        MorphOp::Dilate => dilate(img, se),
        MorphOp::Open => padded(img, se, |p| dilate(&erode(p, se), se)),
        MorphOp::Close => padded(img, se, |p| erode(&dilate(p, se), se)),
    }
}

fn erode(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let offsets: Vec<_> = se.offsets().collect();
    let mut out = BinaryImage::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            if !img.get(x, y) {
                continue;
            }
            let keep = offsets
                .iter()
                .all(|&(dx, dy)| img.get_signed(x as i64 + dx, y as i64 + dy));
            if keep {
                out.set(x, y, true);
            }
        }
    }
    out
}

fn dilate(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let offsets: Vec<_> = se.offsets().collect();
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut out = BinaryImage::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            if !img.get(x, y) {
                continue;
            }
            for &(dx, dy) in &offsets {
                let (tx, ty) = (x as i64 + dx, y as i64 + dy);
                if tx >= 0 && ty >= 0 && tx < w && ty < h {
                    out.set(tx as usize, ty as usize, true);
                }
            }
        }
    }
    out
}

fn padded(
    img: &BinaryImage,
    se: &StructuringElement,
    f: impl Fn(&BinaryImage) -> BinaryImage,
) -> BinaryImage {
    let (rx, ry) = se.radius();
    let (w, h) = (img.width(), img.height());
    let mut big = BinaryImage::new(w + 2 * rx, h + 2 * ry);
    for y in 0..h {
        for x in 0..w {
            if img.get(x, y) {
                big.set(x + rx, y + ry, true);
            }
        }
    }
    f(&big).crop(super::BBox {
        x: rx,
        y: ry,
        width: w,
        height: h,
    })
}
