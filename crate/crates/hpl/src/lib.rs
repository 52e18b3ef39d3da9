//! Command-line tool and HTTP service built on [`hpl_core`].

pub mod cli;
pub mod service;

use hpl_core::imaging::{load_pgm, GrayImage, ImagingError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("empty image")]
    Empty,
    #[error("not a PGM or PNG image")]
    UnknownFormat,
    #[error(transparent)]
    Pgm(#[from] ImagingError),
    #[error("PNG: {0}")]
    Png(#[from] image::ImageError),
}

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Decodes binary PGM or PNG by content. PNG pixels become luminance
/// composited over white, so transparent canvas exports read as paper.
pub fn decode_image(bytes: &[u8]) -> Result<GrayImage, DecodeError> {
    if bytes.is_empty() {
        return Err(DecodeError::Empty);
    }
    if bytes.starts_with(b"P5") {
        return Ok(load_pgm(bytes)?);
    }
    if !bytes.starts_with(PNG_MAGIC) {
        return Err(DecodeError::UnknownFormat);
    }
    let rgba = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)?.to_rgba8();
    let (w, h) = (rgba.width() as usize, rgba.height() as usize);
    let pixels = rgba
        .pixels()
        .map(|p| {
            let [r, g, b, a] = p.0.map(f64::from);
            let luma = 0.299 * r + 0.587 * g + 0.114 * b;
            let alpha = a / 255.0;
            (luma * alpha + 255.0 * (1.0 - alpha)).round() as u8
        })
        .collect();
    Ok(GrayImage::new(w, h, pixels)?)
}
