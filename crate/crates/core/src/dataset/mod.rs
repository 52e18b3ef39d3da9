//! Synthetic arrow images, stratified splitting, and dataset directories.

mod generate;
mod split;
mod store;

pub use generate::{compose_sheet, gen_arrow, gen_dataset, skeleton, Skeleton, Stroke, MIN_SIZE};
pub use split::{split, split_by, SplitConfig};
pub use store::{load_dir, save_dir, INDEX_FILE};

use std::path::PathBuf;

use thiserror::Error;

use crate::imaging::GrayImage;
use crate::SymbolClass;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledImage {
    pub image: GrayImage,
    pub label: SymbolClass,
    /// Stable name; also the file stem on disk.
    pub id: String,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("image size {size} is below the minimum of {min}")]
    SizeTooSmall { size: usize, min: usize },
    #[error("class {class} has {count} samples; splitting needs at least 2")]
    ClassTooSmall { class: SymbolClass, count: usize },
    #[error("train fraction {0} outside (0, 1)")]
    InvalidFraction(f64),
    #[error("no {INDEX_FILE} in {0}")]
    MissingIndex(PathBuf),
    #[error("{INDEX_FILE} line {line}: unknown label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("{INDEX_FILE} line {line}: expected `<file>\\t<label>`")]
    MalformedIndex { line: usize },
    #[error("cannot read image {file}: {reason}")]
    UnreadableImage { file: PathBuf, reason: String },
    #[error("sheet layout does not fit: {0}")]
    BadLayout(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
