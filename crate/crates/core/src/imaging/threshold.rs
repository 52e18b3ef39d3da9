use super::{BinaryImage, GrayImage, ImagingError};

/// Local-mean thresholding.
///
/// A pixel is ink when its intensity is strictly below the mean of the
/// `window`×`window` neighbourhood (borders replicated) minus `offset`.
/// A window larger than the image is clamped to the largest odd size that
/// fits.
pub fn adaptive_binarize(
    img: &GrayImage,
    window: usize,
    offset: f64,
) -> Result<BinaryImage, ImagingError> {
    if window.is_multiple_of(2) {
        return Err(ImagingError::EvenWindow(window));
    }
    if window < 3 {
        return Err(ImagingError::WindowTooSmall(window));
    }
    let (w, h) = (img.width(), img.height());
    let fit = w.min(h);
    let window = if window > fit {
        if fit % 2 == 1 {
            fit
        } else {
            fit - 1
        }
    } else {
        window
    };
    let radius = (window / 2) as i64;

    // Separable box sums with clamped (edge-replicated) indices.
    let clamp = |v: i64, n: usize| v.clamp(0, n as i64 - 1) as usize;
    let mut row_sums = vec![0u32; w * h];
    for y in 0..h {
        let row = &img.pixels()[y * w..(y + 1) * w];
        let mut acc: u32 = (-radius..=radius).map(|dx| row[clamp(dx, w)] as u32).sum();
        row_sums[y * w] = acc;
        for x in 1..w {
            let enter = row[clamp(x as i64 + radius, w)] as u32;
            let leave = row[clamp(x as i64 - 1 - radius, w)] as u32;
            acc = acc + enter - leave;
            row_sums[y * w + x] = acc;
        }
    }

    let area = (window * window) as f64;
    let mut out = BinaryImage::new(w, h);
    for x in 0..w {
        let col = |y: i64| row_sums[clamp(y, h) * w + x];
        let mut acc: u32 = (-radius..=radius).map(col).sum();
        for y in 0..h {
            if y > 0 {
                acc = acc + col(y as i64 + radius) - col(y as i64 - 1 - radius);
            }
            let mean = acc as f64 / area;
            if (img.get(x, y) as f64) < mean - offset {
                out.set(x, y, true);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_image_is_background() {
        let img = GrayImage::filled(20, 20, 200);
        assert_eq!(adaptive_binarize(&img, 5, 10.0).unwrap().count_ink(), 0);
    }

    #[test]
    fn lone_black_pixel_is_the_only_ink() {
        // Black pixel: 3x3 mean = 8*255/9 ≈ 226.7, threshold 216.7 > 0 → ink.
        // Any white neighbour sees the same mean, and 255 ≥ 216.7 → paper.
        let mut img = GrayImage::filled(9, 9, 255);
        img.set(4, 4, 0);
        let bin = adaptive_binarize(&img, 3, 10.0).unwrap();
        assert_eq!(bin.count_ink(), 1);
        assert!(bin.get(4, 4));
    }

    #[test]
    fn even_window_is_rejected() {
        let img = GrayImage::filled(8, 8, 0);
        assert_eq!(
            adaptive_binarize(&img, 4, 10.0).unwrap_err(),
            ImagingError::EvenWindow(4)
        );
        assert_eq!(
            adaptive_binarize(&img, 1, 10.0).unwrap_err(),
            ImagingError::WindowTooSmall(1)
        );
    }

    #[test]
    fn oversized_window_is_clamped() {
        let mut img = GrayImage::filled(6, 4, 255);
        img.set(1, 1, 0);
        // 31 clamps to 3 on a 6x4 image; the result must match an explicit 3.
        assert_eq!(
            adaptive_binarize(&img, 31, 10.0).unwrap(),
            adaptive_binarize(&img, 3, 10.0).unwrap()
        );
    }

    #[test]
    fn replicated_border_mean() {
        // Corner pixel at 0 in a 3x3 window over a replicated border: the
        // window holds the corner 4 times, so mean = (4*0 + 5*255)/9.
        let mut img = GrayImage::filled(5, 5, 255);
        img.set(0, 0, 0);
        let bin = adaptive_binarize(&img, 3, 0.0).unwrap();
        assert!(bin.get(0, 0));
        assert_eq!(bin.count_ink(), 1);
    }
}
