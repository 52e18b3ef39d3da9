use std::sync::OnceLock;

use hpl_core::classifier::{MlpModel, TrainingConfig};
use hpl_core::dataset::{compose_sheet, gen_dataset};
use hpl_core::imaging::GrayImage;
use hpl_core::pipeline::{classify_sheet, train_from_images, PipelineConfig, PipelineError};
use hpl_core::SymbolClass;

fn model() -> &'static MlpModel {
    static MODEL: OnceLock<MlpModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        let data = gen_dataset(80, 7, 128).unwrap();
        train_from_images(
            &data,
            &PipelineConfig::default(),
            &TrainingConfig::default(),
        )
        .unwrap()
        .model
    })
}

const GLYPHS: [(SymbolClass, u64); 3] = [
    (SymbolClass::Up, 501),
    (SymbolClass::ForwardLeft, 502),
    (SymbolClass::RotateRight, 503),
];

fn sheet() -> GrayImage {
    compose_sheet(&GLYPHS, 128, 3, 99).unwrap()
}

#[test]
fn reads_generated_glyphs_in_order() {
    let reading = classify_sheet(&sheet(), model(), &PipelineConfig::default()).unwrap();
    let want: Vec<SymbolClass> = GLYPHS.iter().map(|g| g.0).collect();
    assert_eq!(reading.program.symbols(), want.as_slice());
    assert_eq!(reading.boxes.len(), 3);
    assert!(reading.boxes.windows(2).all(|w| w[0].x < w[1].x));
    let conf = reading.program.confidences().unwrap();
    assert!(conf.iter().all(|&c| (0.5..=1.0).contains(&c)));
}

#[test]
fn small_smudges_are_ignored() {
    let mut img = sheet();
    let (w, h) = (img.width(), img.height());
    for y in h - 8..h - 5 {
        for x in w / 2..w / 2 + 3 {
            img.set(x, y, 10);
        }
    }
    let cfg = PipelineConfig::default();
    let clean = classify_sheet(&sheet(), model(), &cfg).unwrap();
    let smudged = classify_sheet(&img, model(), &cfg).unwrap();
    assert_eq!(smudged.program, clean.program);
}

#[test]
fn reading_is_deterministic() {
    let cfg = PipelineConfig::default();
    let a = classify_sheet(&sheet(), model(), &cfg).unwrap();
    let b = classify_sheet(&sheet(), model(), &cfg).unwrap();
    assert_eq!(a.program, b.program);
    assert_eq!(a.boxes, b.boxes);
}

#[test]
fn empty_sheet_has_no_symbols() {
    let blank = compose_sheet(&[], 128, 3, 5).unwrap();
    let err = classify_sheet(&blank, model(), &PipelineConfig::default()).unwrap_err();
    assert!(matches!(err, PipelineError::NoSymbolsFound), "{err:?}");
}
