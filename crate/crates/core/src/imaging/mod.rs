//! Raster input side of the recognition pipeline.
//!
//! Grayscale images come in as binary PGM, are thresholded against their
//! local mean, cleaned with binary morphology and finally split into one
//! [`Contour`] per connected ink component.

mod contour;
mod morph;
mod order;
mod pgm;
mod threshold;

pub use contour::{trace_contours, BBox, Contour, PixelCoord};
pub use morph::{morph, MorphOp, StructuringElement};
pub use order::reading_order;
pub use pgm::{encode_pgm, load_pgm};
pub use threshold::adaptive_binarize;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImagingError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    TruncatedPixelData { expected: usize, found: usize },
    #[error("unsupported maxval {0} (only 8-bit PGM is supported)")]
    UnsupportedMaxval(u32),
    #[error("threshold window must be odd, got {0}")]
    EvenWindow(usize),
    #[error("threshold window must be at least 3, got {0}")]
    WindowTooSmall(usize),
    #[error("invalid image dimensions {width}x{height} for {len} pixels")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("structuring element must be a nonempty odd-sized mask")]
    InvalidStructuringElement,
}

/// 8-bit grayscale raster, row-major. 0 is black ink, 255 is white paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(ImagingError::InvalidDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image filled with a single intensity.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }
}

/// Foreground mask, row-major. `true` marks ink.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryImage {
    /// # Panics
    /// If either dimension is zero.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(ImagingError::InvalidDimensions {
                width,
                height,
                len: bits.len(),
            });
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// Parses an ASCII picture where `#` is ink and anything else is
    /// background. Rows must have equal length. Handy for fixtures.
    ///
    /// # Panics
    /// On ragged or empty input.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut bits = Vec::with_capacity(width * height);
        for row in rows {
            assert_eq!(row.chars().count(), width, "ragged ascii picture");
            bits.extend(row.chars().map(|c| c == '#'));
        }
        Self::from_bits(width, height, bits).expect("empty ascii picture")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    /// Bounds-checked read; anything outside the raster is background.
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.bits[y as usize * self.width + x as usize]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn count_ink(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Sub-image covering `bbox`, which must lie inside the raster.
    pub fn crop(&self, bbox: BBox) -> BinaryImage {
        let mut out = BinaryImage::new(bbox.width, bbox.height);
        for y in 0..bbox.height {
            let src = (bbox.y + y) * self.width + bbox.x;
            out.bits[y * bbox.width..(y + 1) * bbox.width]
                .copy_from_slice(&self.bits[src..src + bbox.width]);
        }
        out
    }

    /// Renders ink as 0 and background as 255.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.bits.iter().map(|&b| if b { 0 } else { 255 }).collect(),
        }
    }
}
