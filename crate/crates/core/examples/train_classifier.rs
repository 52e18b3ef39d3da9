//! Trains the classifier on generated glyphs and saves the model file.
//!
//!     cargo run --release -p hpl-core --example train_classifier -- [model.json]

use hpl_core::classifier::{load_model, save_model, TrainingConfig};
use hpl_core::dataset::{gen_dataset, split, SplitConfig};
use hpl_core::pipeline::{evaluate_images, train_from_images, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "model.json".into());
    let (train, test) = split(gen_dataset(60, 3, 128)?, &SplitConfig::default())?;

    let pcfg = PipelineConfig::default();
    let report = train_from_images(&train, &pcfg, &TrainingConfig::default())?;
    for e in report.history.iter().step_by(5) {
        println!(
            "epoch {:3}  train {:.4}  validation {:.4}",
            e.epoch + 1,
            e.train_loss,
            e.val_loss
        );
    }
    println!("best epoch {}", report.best_epoch + 1);

    let bytes = save_model(&report.model);
    std::fs::write(&out, &bytes)?;
    assert_eq!(load_model(&bytes)?, report.model);
    println!(
        "saved {} parameters to {out}\n",
        report.model.parameter_count()
    );

    println!("{}", evaluate_images(&report.model, &test, &pcfg)?);
    Ok(())
}
