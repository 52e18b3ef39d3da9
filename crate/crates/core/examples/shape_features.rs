//! Prints the descriptor of one generated glyph per class.
//!
//!     cargo run -p hpl-core --example shape_features

use hpl_core::dataset::gen_arrow;
use hpl_core::features::{compute_centroids, extract};
use hpl_core::pipeline::{glyph_contour, PipelineConfig};
use hpl_core::SymbolClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = PipelineConfig::default();
    let mut glyphs = Vec::new();
    for class in SymbolClass::ALL {
        let img = gen_arrow(class, 11, 128)?;
        glyphs.push((class, glyph_contour(&img.image, &cfg)?));
    }
    let centroids = compute_centroids(
        &glyphs
            .iter()
            .map(|(c, g)| (g.ink.clone(), *c))
            .collect::<Vec<_>>(),
    )?;

    for (class, contour) in &glyphs {
        let fv = extract(&contour.ink, contour, &centroids)?;
        let fmt = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:6.3}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!("{class}");
        println!("  fourier  {}", fmt(&fv.fd()[..6]));
        println!("  hell     {}", fmt(fv.hell()));
        println!("  geo      {}", fmt(&fv.geo()[..7]));
    }
    Ok(())
}
