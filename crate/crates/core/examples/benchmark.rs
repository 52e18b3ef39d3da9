//! Synthetic benchmark: generate, split 60/40, train, and evaluate.
//!
//!     cargo run --release -p hpl-core --example benchmark -- [per_class] [size]

use std::time::Instant;

use hpl_core::classifier::TrainingConfig;
use hpl_core::dataset::{gen_dataset, split, SplitConfig};
use hpl_core::pipeline::{evaluate_images, train_from_images, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let per_class: usize = args.next().map_or(Ok(200), |a| a.parse())?;
    let size: usize = args.next().map_or(Ok(128), |a| a.parse())?;

    let t = Instant::now();
    let data = gen_dataset(per_class, 42, size)?;
    let (train, test) = split(data, &SplitConfig::default())?;
    println!(
        "{} train / {} test images ({:.1?})",
        train.len(),
        test.len(),
        t.elapsed()
    );

    let pcfg = PipelineConfig::default();
    let t = Instant::now();
    let report = train_from_images(&train, &pcfg, &TrainingConfig::default())?;
    println!(
        "trained {} epochs, best {} with validation loss {:.4} ({:.1?})",
        report.history.len(),
        report.best_epoch,
        report.best_val_loss(),
        t.elapsed()
    );

    let metrics = evaluate_images(&report.model, &test, &pcfg)?;
    println!("{metrics}");
    println!("most confused pairs:");
    for ((a, b), mass) in metrics.confusion_pairs().into_iter().take(3) {
        println!("  {a} / {b}: {mass}");
    }
    Ok(())
}
