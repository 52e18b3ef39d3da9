use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{DatasetError, LabeledImage};
use crate::SymbolClass;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.6,
            seed: 42,
        }
    }
}

/// Stratified split: within each class the items are shuffled and the
/// first `⌊fraction · n_c⌋` go to training. Both halves list classes in
/// code order.
pub fn split_by<T>(
    items: Vec<T>,
    label: impl Fn(&T) -> SymbolClass,
    cfg: &SplitConfig,
) -> Result<(Vec<T>, Vec<T>), DatasetError> {
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return Err(DatasetError::InvalidFraction(cfg.train_fraction));
    }
    let mut by_class: [Vec<T>; SymbolClass::COUNT] = Default::default();
    for item in items {
        by_class[label(&item).code()].push(item);
    }
    for class in SymbolClass::ALL {
        let count = by_class[class.code()].len();
        if count == 1 {
            return Err(DatasetError::ClassTooSmall { class, count });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for mut group in by_class {
        group.shuffle(&mut rng);
        let n_train = (cfg.train_fraction * group.len() as f64).floor() as usize;
        let rest = group.split_off(n_train);
        train.extend(group);
        test.extend(rest);
    }
    Ok((train, test))
}

pub fn split(
    data: Vec<LabeledImage>,
    cfg: &SplitConfig,
) -> Result<(Vec<LabeledImage>, Vec<LabeledImage>), DatasetError> {
    split_by(data, |s| s.label, cfg)
}
