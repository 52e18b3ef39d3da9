//! End-to-end recognition: page image to symbols, plus the helpers that
//! train and evaluate a model from labelled images.

use serde::Serialize;
use thiserror::Error;

use crate::classifier::{self, ClassifierError, MetricsReport, MlpModel, Sample, TrainReport};
use crate::compiler::Program;
use crate::dataset::LabeledImage;
use crate::features::{self, ClassCentroids, FeatureError, FeatureVector};
use crate::imaging::{
    adaptive_binarize, morph, reading_order, trace_contours, BBox, Contour, GrayImage,
    ImagingError, MorphOp, StructuringElement,
};
use crate::SymbolClass;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Odd side of the local-mean window.
    pub window: usize,
    /// How far below the local mean a pixel must be to count as ink.
    pub offset: f64,
    /// Smallest filled area, in pixels, kept as a symbol.
    pub min_area: usize,
    /// Glyphs whose top class probability falls below this are rejected.
    pub reject_threshold: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            window: 31,
            offset: 10.0,
            min_area: 30,
            reject_threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedGlyph {
    pub bbox: BBox,
    /// Best guess, absent when no features could be computed.
    pub symbol: Option<SymbolClass>,
    pub confidence: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("no symbols found on the page")]
    NoSymbolsFound,
    #[error("{} glyph(s) below the confidence threshold", rejected.len())]
    LowConfidence { rejected: Vec<RejectedGlyph> },
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
}

/// Binarise, clean up, trace, and sort the page's symbols into reading
/// order.
pub fn segment(img: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<Contour>, ImagingError> {
    let bin = adaptive_binarize(img, cfg.window, cfg.offset)?;
    let cross = StructuringElement::cross3();
    let cleaned = morph(&morph(&bin, MorphOp::Open, &cross), MorphOp::Close, &cross);
    Ok(reading_order(trace_contours(&cleaned, cfg.min_area)))
}

/// The largest symbol on an image expected to hold exactly one.
pub fn glyph_contour(img: &GrayImage, cfg: &PipelineConfig) -> Result<Contour, PipelineError> {
    segment(img, cfg)?
        .into_iter()
        .max_by_key(|c| c.area_px)
        .ok_or(PipelineError::NoSymbolsFound)
}

pub fn contour_features(
    contour: &Contour,
    centroids: &ClassCentroids,
) -> Result<FeatureVector, FeatureError> {
    features::extract(&contour.ink, contour, centroids)
}

/// A recognised page: symbols with confidences, and each glyph's box.
#[derive(Debug, Clone, PartialEq)]
pub struct SheetReading {
    pub program: Program,
    pub boxes: Vec<BBox>,
}

/// Recognises every symbol on a page, in reading order.
///
/// Fails with [`PipelineError::LowConfidence`] listing every glyph whose
/// best probability is below the threshold, rather than dropping them.
pub fn classify_sheet(
    img: &GrayImage,
    model: &MlpModel,
    cfg: &PipelineConfig,
) -> Result<SheetReading, PipelineError> {
    let contours = segment(img, cfg)?;
    if contours.is_empty() {
        return Err(PipelineError::NoSymbolsFound);
    }
    let mut symbols = Vec::with_capacity(contours.len());
    let mut confidences = Vec::with_capacity(contours.len());
    let mut boxes = Vec::with_capacity(contours.len());
    let mut rejected = Vec::new();
    for c in &contours {
        let fv = match contour_features(c, &model.centroids) {
            Ok(fv) => fv,
            Err(_) => {
                rejected.push(RejectedGlyph {
                    bbox: c.bbox,
                    symbol: None,
                    confidence: 0.0,
                });
                continue;
            }
        };
        let (symbol, p) = model.predict(fv.as_slice())?;
        if p < cfg.reject_threshold {
            rejected.push(RejectedGlyph {
                bbox: c.bbox,
                symbol: Some(symbol),
                confidence: p,
            });
        }
        symbols.push(symbol);
        confidences.push(p);
        boxes.push(c.bbox);
    }
    if !rejected.is_empty() {
        return Err(PipelineError::LowConfidence { rejected });
    }
    let program = Program::new(symbols)
        .with_confidences(confidences)
        .expect("one probability per symbol");
    Ok(SheetReading { program, boxes })
}

/// Traced glyph of every image, paired with its label.
pub fn glyphs_of(
    data: &[LabeledImage],
    cfg: &PipelineConfig,
) -> Result<Vec<(Contour, SymbolClass)>, PipelineError> {
    data.iter()
        .map(|s| Ok((glyph_contour(&s.image, cfg)?, s.label)))
        .collect()
}

pub fn samples_of(
    glyphs: &[(Contour, SymbolClass)],
    centroids: &ClassCentroids,
) -> Result<Vec<Sample>, PipelineError> {
    glyphs
        .iter()
        .map(|(c, label)| {
            Ok(Sample::new(
                contour_features(c, centroids)?.as_slice().to_vec(),
                *label,
            ))
        })
        .collect()
}

/// Centroids from the training glyphs, then features, then training.
pub fn train_from_images(
    train: &[LabeledImage],
    pcfg: &PipelineConfig,
    tcfg: &classifier::TrainingConfig,
) -> Result<TrainReport, PipelineError> {
    let glyphs = glyphs_of(train, pcfg)?;
    let inks: Vec<_> = glyphs.iter().map(|(c, l)| (c.ink.clone(), *l)).collect();
    let centroids = features::compute_centroids(&inks)?;
    let samples = samples_of(&glyphs, &centroids)?;
    Ok(classifier::train(&samples, centroids, tcfg)?)
}

pub fn evaluate_images(
    model: &MlpModel,
    test: &[LabeledImage],
    pcfg: &PipelineConfig,
) -> Result<MetricsReport, PipelineError> {
    let samples = samples_of(&glyphs_of(test, pcfg)?, &model.centroids)?;
    Ok(classifier::evaluate(model, &samples)?)
}
