//! The `hpl` command line.
//!
//! Exit status is 0 on success, 1 when the work itself fails (unreadable
//! data, nothing recognised, ...), and 2 for invalid arguments. JSON goes
//! to stdout, diagnostics to stderr; `HPL_LOG` sets the log level.

use std::fmt;
use std::fs;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use axum::http::HeaderValue;
use clap::{Parser, Subcommand};
use serde_json::json;

use hpl_core::classifier::{load_model, save_model, MlpModel, TrainingConfig};
use hpl_core::compiler::{compile, parse_symbols, CompilerConfig, MotionCommand, Program};
use hpl_core::dataset::{gen_dataset, load_dir, save_dir, split, SplitConfig};
use hpl_core::pipeline::{
    classify_sheet, evaluate_images, train_from_images, PipelineConfig, PipelineError,
};
use hpl_core::playground::{load_map, run, EnergyModel, PlaygroundMap};
use hpl_core::SymbolClass;

use crate::decode_image;
use crate::service::{self, AppState, ServiceOptions};

#[derive(Debug, Parser)]
#[command(
    name = "hpl",
    version,
    about = "Recognise, compile and simulate hand-drawn arrow programs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset of PGM images and a label index.
    GenDataset {
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Images per symbol class.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        per_class: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Side of each square image in pixels.
        #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(64..))]
        size: u64,
    },
    /// Split 60/40, train on the first part, and report on the second.
    Train {
        /// Dataset directory with a label index.
        #[arg(long)]
        data: PathBuf,
        /// Where to write the model file.
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Upper bound; training stops early when validation loss stalls.
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        epochs: u64,
        #[arg(long, default_value_t = 0.01, value_parser = positive_f64)]
        lr: f64,
    },
    /// Re-create the 60/40 split and evaluate a model on its test part.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Recognise the symbols on a page image (PGM or PNG).
    Classify {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Glyphs whose best class probability is lower are rejected.
        #[arg(long, default_value_t = 0.5, value_parser = probability)]
        reject_below: f64,
    },
    /// Turn comma-separated symbol names into motion commands.
    Compile {
        /// e.g. "up, rotate_left, forward_right"
        #[arg(long, allow_hyphen_values = true)]
        symbols: String,
    },
    /// Run a program on a map and write the trajectory.
    Simulate {
        /// Map file; the bundled map when omitted.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Program JSON (`{"symbols": [...]}`) or a list of commands.
        #[arg(long)]
        program: PathBuf,
        /// Where to write the simulation result JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the HTTP API and web UI.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        map: Option<PathBuf>,
        /// Directory with the built web UI.
        #[arg(long, default_value = "webui/dist")]
        static_dir: PathBuf,
        /// Allow browser calls from this origin, e.g. a UI dev server.
        #[arg(long)]
        cors_origin: Option<String>,
        #[arg(long, default_value_t = Ipv4Addr::LOCALHOST)]
        host: Ipv4Addr,
    },
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be a positive number, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn probability(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
        Ok(v) => Err(format!("must lie in [0, 1], got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

/// A failed command: the error's name plus its message.
#[derive(Debug)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// Variant name of an error enum, read off its `Debug` output.
fn variant_name(debug: &str) -> String {
    debug
        .split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("Error")
        .to_owned()
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Self {
            kind: variant_name(&format!("{e:?}")),
            message: e.to_string(),
        }
    }
}

fn failure(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        kind: kind.to_owned(),
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| failure("Io", format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| failure("Io", format!("{}: {e}", path.display())))
}

fn read_model(path: &Path) -> Result<MlpModel, Failure> {
    Ok(load_model(&read(path)?)?)
}

fn read_map(path: Option<&Path>) -> Result<PlaygroundMap, Failure> {
    match path {
        Some(p) => {
            let text = String::from_utf8(read(p)?).map_err(|e| failure("Utf8", e.to_string()))?;
            Ok(load_map(&text)?)
        }
        None => Ok(PlaygroundMap::default_map()),
    }
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn gen_dataset_cmd(out: &Path, per_class: u64, seed: u64, size: u64) -> Result<(), Failure> {
    let data = gen_dataset(per_class as usize, seed, size as usize)?;
    save_dir(&data, out).map_err(|e| failure("Io", format!("{}: {e}", out.display())))?;
    let counts: serde_json::Map<String, serde_json::Value> = SymbolClass::ALL
        .into_iter()
        .map(|c| {
            (
                c.name().to_owned(),
                json!(data.iter().filter(|s| s.label == c).count()),
            )
        })
        .collect();
    print_json(&counts);
    Ok(())
}

fn train_cmd(data: &Path, model: &Path, seed: u64, epochs: u64, lr: f64) -> Result<(), Failure> {
    let images = load_dir(data)?;
    let (train, test) = split(
        images,
        &SplitConfig {
            train_fraction: 0.6,
            seed,
        },
    )?;
    log::info!("{} training and {} test images", train.len(), test.len());
    let pcfg = PipelineConfig::default();
    let tcfg = TrainingConfig {
        learning_rate: lr,
        max_epochs: epochs as usize,
        seed,
        ..TrainingConfig::default()
    };
    let report = train_from_images(&train, &pcfg, &tcfg)?;
    write(model, &save_model(&report.model))?;
    println!(
        "epochs run: {}, best epoch: {}, validation loss: {:.6}",
        report.history.len(),
        report.best_epoch + 1,
        report.best_val_loss()
    );
    if test.is_empty() {
        println!("no test images to evaluate");
    } else {
        println!("{}", evaluate_images(&report.model, &test, &pcfg)?);
    }
    Ok(())
}

fn eval_cmd(data: &Path, model: &Path, seed: u64) -> Result<(), Failure> {
    let model = read_model(model)?;
    let images = load_dir(data)?;
    let (_, test) = split(
        images,
        &SplitConfig {
            train_fraction: 0.6,
            seed,
        },
    )?;
    println!(
        "{}",
        evaluate_images(&model, &test, &PipelineConfig::default())?
    );
    Ok(())
}

fn classify_cmd(image: &Path, model: &Path, reject_below: f64) -> Result<(), Failure> {
    let model = read_model(model)?;
    let img = decode_image(&read(image)?)?;
    let cfg = PipelineConfig {
        reject_threshold: reject_below,
        ..PipelineConfig::default()
    };
    match classify_sheet(&img, &model, &cfg) {
        Ok(reading) => {
            print_json(&reading.program);
            Ok(())
        }
        Err(PipelineError::LowConfidence { rejected }) => {
            let boxes: Vec<String> = rejected
                .iter()
                .map(|r| {
                    let [x, y, w, h] = r.bbox.to_array();
                    format!("{w}x{h}+{x}+{y} at {:.2}", r.confidence)
                })
                .collect();
            Err(failure("LowConfidence", boxes.join(", ")))
        }
        Err(e) => Err(e.into()),
    }
}

fn compile_cmd(symbols: &str) -> Result<(), Failure> {
    let program = parse_symbols(symbols)?;
    print_json(&compile(&program, &CompilerConfig::default()));
    Ok(())
}

/// A program file holds either symbol names or a command list.
fn read_commands(path: &Path) -> Result<Vec<MotionCommand>, Failure> {
    let bytes = read(path)?;
    let value: serde_json::Value = serde_json::from_slice(&bytes)?;
    if value.is_array() {
        Ok(serde_json::from_value(value)?)
    } else {
        let program: Program = serde_json::from_value(value)?;
        Ok(compile(&program, &CompilerConfig::default()))
    }
}

fn simulate_cmd(map: Option<&Path>, program: &Path, out: &Path) -> Result<(), Failure> {
    let map = read_map(map)?;
    let commands = read_commands(program)?;
    let result = run(&commands, &map, &EnergyModel::default())?;
    let text = serde_json::to_string_pretty(&result).expect("serialisable");
    write(out, text.as_bytes())?;
    print_json(&json!({
        "status": result.status,
        "final_energy": result.final_energy,
    }));
    Ok(())
}

fn serve_cmd(
    host: Ipv4Addr,
    port: u16,
    model: &Path,
    map: Option<&Path>,
    static_dir: PathBuf,
    cors_origin: Option<String>,
) -> Result<(), Failure> {
    let state = AppState::new(read_model(model)?, read_map(map)?);
    let cors_origin = cors_origin
        .map(|o| HeaderValue::from_str(&o).map_err(|e| failure("BadOrigin", e.to_string())))
        .transpose()?;
    if !static_dir.is_dir() {
        log::warn!(
            "{} not found; serving a placeholder page at /",
            static_dir.display()
        );
    }
    let opts = ServiceOptions {
        static_dir: Some(static_dir),
        cors_origin,
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| failure("Io", e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(SocketAddr::from((host, port)))
            .await
            .map_err(|e| failure("Io", format!("cannot bind port {port}: {e}")))?;
        service::serve(listener, service::router(state, &opts))
            .await
            .map_err(|e| failure("Io", e.to_string()))
    })
}

pub fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::GenDataset {
            out,
            per_class,
            seed,
            size,
        } => gen_dataset_cmd(&out, per_class, seed, size),
        Command::Train {
            data,
            model,
            seed,
            epochs,
            lr,
        } => train_cmd(&data, &model, seed, epochs, lr),
        Command::Eval { data, model, seed } => eval_cmd(&data, &model, seed),
        Command::Classify {
            image,
            model,
            reject_below,
        } => classify_cmd(&image, &model, reject_below),
        Command::Compile { symbols } => compile_cmd(&symbols),
        Command::Simulate { map, program, out } => simulate_cmd(map.as_deref(), &program, &out),
        Command::Serve {
            port,
            model,
            map,
            static_dir,
            cors_origin,
            host,
        } => serve_cmd(host, port, &model, map.as_deref(), static_dir, cors_origin),
    }
}

/// Parses arguments, runs the subcommand, and maps the outcome to an exit
/// status.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HPL_LOG", "info")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(1)
        }
    }
}
