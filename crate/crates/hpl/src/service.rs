//! HTTP API over classification, compilation and simulation, plus the
//! browser UI's static files.
//!
//! | route               | body                         | reply                 |
//! |---------------------|------------------------------|-----------------------|
//! | `GET /api/health`   |                              | status, model version |
//! | `POST /api/classify`| PGM or PNG bytes             | symbols, confidences, boxes |
//! | `POST /api/compile` | `{"symbols": [...]}`         | motion commands       |
//! | `POST /api/simulate`| `{"program", "map"?, "energy"?}` | simulation result |
//! | `GET /api/map/default` |                           | the bundled map       |
//!
//! Every non-2xx reply is `{"status", "code", "message", "detail"?}`.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::extract::State;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use hpl_core::classifier::{MlpModel, MODEL_VERSION};
use hpl_core::compiler::{compile, CompilerConfig, MotionCommand, Program};
use hpl_core::pipeline::{classify_sheet, PipelineConfig, PipelineError};
use hpl_core::playground::{run, EnergyModel, PlaygroundMap};

use crate::decode_image;

/// Largest accepted request body.
pub const MAX_BODY_BYTES: usize = 8 * 1024 * 1024;

/// Read-only configuration shared by all requests.
#[derive(Debug, Clone)]
pub struct AppState {
    pub model: Arc<MlpModel>,
    pub map: Arc<PlaygroundMap>,
    pub pipeline: PipelineConfig,
    pub compiler: CompilerConfig,
    pub energy: EnergyModel,
}

impl AppState {
    pub fn new(model: MlpModel, map: PlaygroundMap) -> Self {
        Self {
            model: Arc::new(model),
            map: Arc::new(map),
            pipeline: PipelineConfig::default(),
            compiler: CompilerConfig::default(),
            energy: EnergyModel::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(serialize_with = "serialize_status")]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

fn serialize_status<S: serde::Serializer>(s: &StatusCode, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_u16(s.as_u16())
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

async fn read_body(body: Body) -> Result<Bytes, ApiError> {
    axum::body::to_bytes(body, MAX_BODY_BYTES)
        .await
        .map_err(|_| {
            ApiError::new(
                StatusCode::PAYLOAD_TOO_LARGE,
                "payload_too_large",
                format!("request body exceeds {MAX_BODY_BYTES} bytes"),
            )
        })
}

fn malformed(e: impl std::fmt::Display) -> ApiError {
    ApiError::new(StatusCode::BAD_REQUEST, "malformed_json", e.to_string())
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "model_version": MODEL_VERSION }))
}

#[derive(Serialize)]
struct ClassifyReply {
    symbols: Vec<String>,
    confidences: Vec<f64>,
    boxes: Vec<[usize; 4]>,
}

async fn classify(
    State(state): State<AppState>,
    body: Body,
) -> Result<Json<ClassifyReply>, ApiError> {
    let bytes = read_body(body).await?;
    let img = decode_image(&bytes)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_image", e.to_string()))?;
    let reading =
        tokio::task::spawn_blocking(move || classify_sheet(&img, &state.model, &state.pipeline))
            .await
            .map_err(|e| {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string())
            })?;
    match reading {
        Ok(r) => Ok(Json(ClassifyReply {
            symbols: r
                .program
                .symbols()
                .iter()
                .map(|s| s.name().to_owned())
                .collect(),
            confidences: r.program.confidences().unwrap_or_default().to_vec(),
            boxes: r.boxes.iter().map(|b| b.to_array()).collect(),
        })),
        Err(PipelineError::NoSymbolsFound) => Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "no_symbols",
            "no symbols found in the image",
        )),
        Err(PipelineError::LowConfidence { rejected }) => {
            let message = format!("{} glyph(s) below the confidence threshold", rejected.len());
            let detail: Vec<Value> = rejected
                .iter()
                .map(|r| {
                    json!({
                        "box": r.bbox.to_array(),
                        "symbol": r.symbol.map(|s| s.name()),
                        "confidence": r.confidence,
                    })
                })
                .collect();
            Err(
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "low_confidence", message)
                    .with_detail(json!({ "rejected": detail })),
            )
        }
        Err(e) => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "bad_image",
            e.to_string(),
        )),
    }
}

#[derive(Deserialize)]
struct ProgramRequest {
    symbols: Vec<String>,
    #[serde(default)]
    confidences: Option<Vec<f64>>,
}

fn parse_program(req: ProgramRequest) -> Result<Program, ApiError> {
    let program = Program::from_names(req.symbols.iter().map(String::as_str)).map_err(|e| {
        let hpl_core::compiler::CompilerError::UnknownSymbolName { token, index } = &e else {
            return malformed(&e);
        };
        ApiError::new(StatusCode::BAD_REQUEST, "unknown_symbol", e.to_string())
            .with_detail(json!({ "token": token, "index": index }))
    })?;
    match req.confidences {
        Some(c) => program.with_confidences(c).map_err(malformed),
        None => Ok(program),
    }
}

async fn compile_route(
    State(state): State<AppState>,
    body: Body,
) -> Result<Json<Vec<MotionCommand>>, ApiError> {
    let bytes = read_body(body).await?;
    let req: ProgramRequest = serde_json::from_slice(&bytes).map_err(malformed)?;
    let program = parse_program(req)?;
    Ok(Json(compile(&program, &state.compiler)))
}

/// A program as symbol names or as ready-made commands.
#[derive(Deserialize)]
#[serde(untagged)]
enum ProgramOrCommands {
    Commands(Vec<MotionCommand>),
    Program(ProgramRequest),
}

#[derive(Deserialize)]
struct SimulateRequest {
    program: ProgramOrCommands,
    #[serde(default)]
    map: Option<Value>,
    #[serde(default)]
    energy: Option<EnergyModel>,
}

async fn simulate(State(state): State<AppState>, body: Body) -> Result<Response, ApiError> {
    let bytes = read_body(body).await?;
    let req: SimulateRequest = serde_json::from_slice(&bytes).map_err(malformed)?;
    let commands = match req.program {
        ProgramOrCommands::Commands(c) => c,
        ProgramOrCommands::Program(p) => compile(&parse_program(p)?, &state.compiler),
    };
    let custom_map;
    let map = match req.map {
        Some(doc) => {
            custom_map = serde_json::from_value::<PlaygroundMap>(doc)
                .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_map", e.to_string()))?;
            &custom_map
        }
        None => state.map.as_ref(),
    };
    let em = req.energy.unwrap_or(state.energy);
    let result = run(&commands, map, &em)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_energy_model", e.to_string()))?;
    Ok(Json(result).into_response())
}

async fn default_map(State(state): State<AppState>) -> Response {
    (
        [(axum::http::header::CONTENT_TYPE, "application/json")],
        state.map.to_json(),
    )
        .into_response()
}

async fn api_not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint")
}

async fn method_not_allowed() -> ApiError {
    ApiError::new(
        StatusCode::METHOD_NOT_ALLOWED,
        "method_not_allowed",
        "method not allowed for this endpoint",
    )
}

const PLACEHOLDER_PAGE: &str = "<!doctype html><title>hpl</title>\
<p>The web UI has not been built. The API is available under <code>/api</code>.</p>";

#[derive(Debug, Clone, Default)]
pub struct ServiceOptions {
    /// Directory served at `/`; a placeholder page is shown when absent.
    pub static_dir: Option<PathBuf>,
    /// Extra origin allowed to call the API from a browser.
    pub cors_origin: Option<HeaderValue>,
}

pub fn router(state: AppState, opts: &ServiceOptions) -> Router {
    let api = Router::new()
        .route("/health", get(health))
        .route("/classify", post(classify))
        .route("/compile", post(compile_route))
        .route("/simulate", post(simulate))
        .route("/map/default", get(default_map))
        .fallback(api_not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .with_state(state);
    let mut app = Router::new().nest("/api", api);
    app = match opts.static_dir.as_ref().filter(|d| d.is_dir()) {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.fallback(|| async { Html(PLACEHOLDER_PAGE) }),
    };
    if let Some(origin) = &opts.cors_origin {
        app = app.layer(
            CorsLayer::new()
                .allow_origin(origin.clone())
                .allow_methods(tower_http::cors::Any)
                .allow_headers(tower_http::cors::Any),
        );
    }
    app
}

/// Serves until the task is cancelled or Ctrl-C arrives.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    let addr: Option<SocketAddr> = listener.local_addr().ok();
    if let Some(addr) = addr {
        log::info!("listening on http://{addr}");
    }
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
