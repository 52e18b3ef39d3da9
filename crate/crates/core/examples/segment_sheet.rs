//! Draws a sheet of arrows, then finds and orders the glyphs on it.
//!
//!     cargo run -p hpl-core --example segment_sheet -- [out.pgm]

use hpl_core::dataset::compose_sheet;
use hpl_core::imaging::encode_pgm;
use hpl_core::pipeline::{segment, PipelineConfig};
use hpl_core::SymbolClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let glyphs = [
        (SymbolClass::Up, 1),
        (SymbolClass::RotateLeft, 2),
        (SymbolClass::ForwardRight, 3),
        (SymbolClass::Down, 4),
        (SymbolClass::ForwardLeft, 5),
    ];
    let sheet = compose_sheet(&glyphs, 128, 3, 7)?;
    println!("sheet {}x{}", sheet.width(), sheet.height());

    let contours = segment(&sheet, &PipelineConfig::default())?;
    for (c, (class, _)) in contours.iter().zip(&glyphs) {
        let b = c.bbox;
        println!(
            "{:>13}: box {}x{} at ({}, {}), {} boundary points, area {}",
            class.name(),
            b.width,
            b.height,
            b.x,
            b.y,
            c.points.len(),
            c.area_px
        );
    }

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, encode_pgm(&sheet))?;
        println!("wrote {path}");
    }
    Ok(())
}
