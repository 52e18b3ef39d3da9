use super::{GrayImage, ImagingError};

/// Decodes a binary (P5) PGM with maxval ≤ 255.
///
/// Pixel values are taken verbatim; a maxval below 255 is not rescaled.
/// `#` comments are allowed anywhere in the header.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage, ImagingError> {
    let mut cursor = HeaderCursor { bytes, pos: 0 };
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        let shown = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
        return Err(ImagingError::MalformedHeader(format!(
            "expected magic \"P5\", found {shown:?}"
        )));
    }
    cursor.pos = 2;

    let width = cursor.next_number("width")?;
    let height = cursor.next_number("height")?;
    let maxval = cursor.next_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ImagingError::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 {
        return Err(ImagingError::MalformedHeader(
            "maxval must be positive".into(),
        ));
    }
    if maxval > 255 {
        return Err(ImagingError::UnsupportedMaxval(maxval));
    }

    // Exactly one whitespace byte separates maxval from the raster.
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(ImagingError::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }

    let width = width as usize;
    let height = height as usize;
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| ImagingError::MalformedHeader("dimensions overflow".into()))?;
    let data = &bytes[cursor.pos..];
    if data.len() < expected {
        return Err(ImagingError::TruncatedPixelData {
            expected,
            found: data.len(),
        });
    }
    GrayImage::new(width, height, data[..expected].to_vec())
}

/// Encodes as P5 with maxval 255 and no comments.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.pixels().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_number(&mut self, field: &str) -> Result<u32, ImagingError> {
        let start_pos = self.pos;
        self.skip_separators();
        if self.pos == start_pos {
            return Err(ImagingError::MalformedHeader(format!(
                "expected whitespace before {field}"
            )));
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ImagingError::MalformedHeader(format!("missing {field}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImagingError::MalformedHeader(format!("{field} out of range")))
    }
}
