//! Trains a small model in memory and serves the API on port 8080.
//!
//!     cargo run --release -p hpl --example serve_demo
//!     curl localhost:8080/api/health

use hpl::service::{router, serve, AppState, ServiceOptions};
use hpl_core::classifier::TrainingConfig;
use hpl_core::dataset::gen_dataset;
use hpl_core::pipeline::{train_from_images, PipelineConfig};
use hpl_core::playground::PlaygroundMap;

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = gen_dataset(60, 42, 128)?;
    let report = train_from_images(
        &data,
        &PipelineConfig::default(),
        &TrainingConfig::default(),
    )?;
    println!("model trained ({} epochs)", report.history.len());

    let state = AppState::new(report.model, PlaygroundMap::default_map());
    let app = router(state, &ServiceOptions::default());
    let listener = tokio::net::TcpListener::bind("127.0.0.1:8080").await?;
    println!("listening on http://127.0.0.1:8080, Ctrl-C to stop");
    serve(listener, app).await?;
    Ok(())
}
