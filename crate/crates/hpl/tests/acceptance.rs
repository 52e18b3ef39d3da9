//! Acceptance checks, one line per criterion.
//!
//!     cargo test -p hpl --test acceptance

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hpl::service::{router, AppState, ServiceOptions};
use hpl_core::classifier::{grad_check, load_model, MetricsReport, MlpModel, Sample};
use hpl_core::compiler::{compile, CompilerConfig, MotionCommand, Program};
use hpl_core::dataset::{compose_sheet, load_dir, split, split_by, SplitConfig};
use hpl_core::features::{
    fourier_descriptors, geometric_features, hellinger, ClassCentroids, Point, HIST_BINS,
};
use hpl_core::imaging::{encode_pgm, trace_contours, BinaryImage, GrayImage};
use hpl_core::pipeline::{classify_sheet, evaluate_images, PipelineConfig};
use hpl_core::playground::{load_map, run, start_pose, EnergyModel, PlaygroundMap, SimStatus};
use hpl_core::SymbolClass;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn data(&self) -> PathBuf {
        self.dir.path().join("data")
    }

    fn model(&self) -> PathBuf {
        self.dir.path().join("model.json")
    }

    fn load_model(&self) -> Result<MlpModel, String> {
        let bytes = std::fs::read(self.model()).map_err(|e| format!("no trained model: {e}"))?;
        load_model(&bytes).map_err(|e| e.to_string())
    }
}

fn hpl(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hpl"))
        .args(args)
        .env("HPL_LOG", "warn")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "hpl {} exited with {}: {}",
            args.first().unwrap_or(&""),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

const REFERENCE_MATRIX: [[u64; 6]; 6] = [
    [430, 3, 5, 5, 5, 3],
    [3, 427, 4, 4, 4, 3],
    [8, 2, 544, 8, 6, 0],
    [6, 3, 7, 573, 6, 0],
    [2, 2, 2, 3, 263, 55],
    [2, 3, 6, 10, 86, 263],
];

const REFERENCE_SCORES: [(f64, f64, f64); 6] = [
    (0.95, 0.95, 0.95),
    (0.97, 0.96, 0.96),
    (0.96, 0.96, 0.96),
    (0.95, 0.96, 0.96),
    (0.71, 0.80, 0.75),
    (0.81, 0.71, 0.76),
];

fn confusion_arithmetic(_: &Workspace) -> Outcome {
    let pairs = SymbolClass::ALL.into_iter().flat_map(|t| {
        SymbolClass::ALL.into_iter().flat_map(move |p| {
            std::iter::repeat_n((t, p), REFERENCE_MATRIX[t.code()][p.code()] as usize)
        })
    });
    let m = MetricsReport::from_predictions(pairs).map_err(|e| e.to_string())?;
    ensure!(
        m.confusion == REFERENCE_MATRIX,
        "confusion matrix not reproduced"
    );
    for (c, (p, r, f)) in REFERENCE_SCORES.into_iter().enumerate() {
        let tol = 0.005 + 1e-12;
        ensure!(
            (m.precision[c] - p).abs() <= tol
                && (m.recall[c] - r).abs() <= tol
                && (m.f1[c] - f).abs() <= tol,
            "class {c}: P {:.4} R {:.4} F1 {:.4}, expected {p} {r} {f}",
            m.precision[c],
            m.recall[c],
            m.f1[c]
        );
    }
    Ok(format!(
        "36 scores within 0.005, macro-F1 {:.4}",
        m.macro_f1
    ))
}

fn random_batch(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> Vec<Sample> {
    (0..n)
        .map(|i| {
            let f: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
            Sample::new(f, SymbolClass::from_code(i % 6).expect("code < 6"))
        })
        .collect()
}

fn gradients(_: &Workspace) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let model = MlpModel::he_init(&[10, 24, 6], ClassCentroids::uniform(), &mut rng);
        ensure!(model.parameter_count() <= 500, "model too large");
        let batch = random_batch(&mut rng, 10, 12);
        worst = worst.max(grad_check(&model, &batch, 1e-5));
    }
    ensure!(worst < 1e-4, "max relative error {worst:e}");

    let model = MlpModel::he_init(&[10, 24, 6], ClassCentroids::uniform(), &mut rng);
    let batch = random_batch(&mut rng, 10, 12);
    let mut corrupted = model.gradients(&batch);
    for w in &mut corrupted.weights[1] {
        *w *= 2.0;
    }
    let detected = corrupted.max_relative_error(&model.numeric_gradients(&batch, 1e-5));
    ensure!(
        detected > 0.1,
        "corrupted gradient scored only {detected:e}"
    );
    Ok(format!(
        "worst error {worst:.1e}, corrupted gradient {detected:.2}"
    ))
}

fn benchmark(ws: &Workspace) -> Outcome {
    let (data, model) = (ws.data(), ws.model());
    hpl(&[
        "gen-dataset",
        "--out",
        path(&data),
        "--per-class",
        "200",
        "--seed",
        "42",
    ])?;
    hpl(&[
        "train",
        "--data",
        path(&data),
        "--model",
        path(&model),
        "--seed",
        "42",
    ])?;
    let printed = hpl(&[
        "eval",
        "--data",
        path(&data),
        "--model",
        path(&model),
        "--seed",
        "42",
    ])?;
    ensure!(printed.contains("macro"), "eval printed no table");

    let trained = ws.load_model()?;
    let images = load_dir(&data).map_err(|e| e.to_string())?;
    let (_, test) = split(images, &SplitConfig::default()).map_err(|e| e.to_string())?;
    let m =
        evaluate_images(&trained, &test, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    let ((a, b), mass) = m.confusion_pairs()[0];
    let rotations = [SymbolClass::RotateRight, SymbolClass::RotateLeft];
    ensure!(m.macro_f1 >= 0.90, "macro-F1 {:.4}", m.macro_f1);
    ensure!(
        mass > 0 && rotations.contains(&a) && rotations.contains(&b),
        "largest confusion is {a}/{b} ({mass})"
    );
    Ok(format!(
        "macro-F1 {:.3}, top confusion {a}/{b} = {mass}",
        m.macro_f1
    ))
}

fn features(_: &Workspace) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let histogram = |rng: &mut ChaCha8Rng| {
        let v: Vec<f64> = (0..HIST_BINS).map(|_| rng.random::<f64>() + 1e-6).collect();
        let total: f64 = v.iter().sum();
        v.into_iter().map(|x| x / total).collect::<Vec<f64>>()
    };
    for _ in 0..1000 {
        let (p, q) = (histogram(&mut rng), histogram(&mut rng));
        let d = hellinger(&p, &q).map_err(|e| e.to_string())?;
        let back = hellinger(&q, &p).map_err(|e| e.to_string())?;
        let own = hellinger(&p, &p).map_err(|e| e.to_string())?;
        ensure!(d == back, "asymmetric: {d} vs {back}");
        ensure!((0.0..=1.0).contains(&d) && d > 0.0, "out of bounds: {d}");
        ensure!(own.abs() < 1e-7, "d(p, p) = {own}");
    }

    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(8..40);
        let steps: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = steps.iter().sum();
        let mut angle = 0.0;
        let poly: Vec<Point> = steps
            .iter()
            .map(|s| {
                angle += 2.0 * PI * s / total;
                let r = rng.random_range(0.5..3.0);
                Point::new(r * f64::cos(angle), r * f64::sin(angle))
            })
            .collect();
        let (dx, dy, k) = (
            rng.random_range(-50.0..50.0),
            rng.random_range(-50.0..50.0),
            rng.random_range(0.1..20.0),
        );
        let shift = rng.random_range(0..n);
        let base = fourier_descriptors(&poly, 16).map_err(|e| e.to_string())?;
        let mut rotated = poly.clone();
        rotated.rotate_left(shift);
        let variants = [
            poly.iter()
                .map(|p| Point::new(p.x + dx, p.y + dy))
                .collect::<Vec<_>>(),
            poly.iter().map(|p| Point::new(p.x * k, p.y * k)).collect(),
            rotated,
        ];
        for v in &variants {
            let fd = fourier_descriptors(v, 16).map_err(|e| e.to_string())?;
            for (a, b) in fd.iter().zip(&base) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    ensure!(worst <= 1e-9, "descriptor drift {worst:e}");

    let raster = |inside: &dyn Fn(f64, f64) -> bool| {
        let mut img = BinaryImage::new(208, 208);
        for y in 0..208 {
            for x in 0..208 {
                if inside((x as f64 - 3.5) / 200.0, (y as f64 - 3.5) / 200.0) {
                    img.set(x, y, true);
                }
            }
        }
        let contours = trace_contours(&img, 1);
        geometric_features(&contours[0])
            .map(|g| g[0])
            .map_err(|e| e.to_string())
    };
    let disc = raster(&|u, v| (u - 0.5).powi(2) + (v - 0.5).powi(2) <= 0.25)?;
    let square = raster(&|u, v| (0.0..1.0).contains(&u) && (0.0..1.0).contains(&v))?;
    ensure!((disc - 1.0).abs() < 0.1, "disc circularity {disc}");
    ensure!(
        (square - PI / 4.0).abs() < 0.05,
        "square circularity {square}"
    );
    Ok(format!(
        "descriptor drift {worst:.1e}, disc {disc:.3}, square {square:.3}"
    ))
}

fn split_contract(_: &Workspace) -> Outcome {
    let labels: Vec<(usize, SymbolClass)> = SymbolClass::ALL
        .into_iter()
        .flat_map(|c| (0..1148).map(move |i| (c.code() * 10_000 + i, c)))
        .collect();
    ensure!(labels.len() == 6888, "{} labels", labels.len());
    let cfg = SplitConfig::default();
    let (train, test) = split_by(labels.clone(), |x| x.1, &cfg).map_err(|e| e.to_string())?;
    for class in SymbolClass::ALL {
        let n = train.iter().filter(|x| x.1 == class).count();
        ensure!(n == 688, "{class}: {n} training labels");
    }
    let mut all: Vec<usize> = train.iter().chain(&test).map(|x| x.0).collect();
    all.sort_unstable();
    all.dedup();
    ensure!(all.len() == 6888, "split lost or duplicated labels");
    let again = split_by(labels, |x| x.1, &cfg).map_err(|e| e.to_string())?;
    ensure!(again == (train.clone(), test), "rerun differs");
    Ok(format!(
        "{} train / {} test",
        train.len(),
        6888 - train.len()
    ))
}

fn random_program(rng: &mut ChaCha8Rng) -> Program {
    let len = rng.random_range(0..30);
    Program::new(
        (0..len)
            .map(|_| SymbolClass::from_code(rng.random_range(0..6)).expect("code < 6"))
            .collect(),
    )
}

const HALF_DARK_MAP: &str = r#"{
  "pitch_mm": 110,
  "start": {"node": "A", "heading": 0},
  "nodes": [{"id": "A", "col": 0, "row": 0}, {"id": "B", "col": 1, "row": 0}],
  "segments": [{"a": "A", "b": "B", "darkness": 0.5}]
}"#;

fn compiler_and_simulator(_: &Workspace) -> Outcome {
    let cfg = CompilerConfig::default();
    let map = PlaygroundMap::default_map();
    let em = EnergyModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let (a, b) = (random_program(&mut rng), random_program(&mut rng));
        let mut joined = compile(&a, &cfg);
        joined.extend(compile(&b, &cfg));
        ensure!(
            compile(&a.concat(&b), &cfg) == joined,
            "homomorphism broken"
        );
        for (c, m) in compile(&a, &cfg)
            .into_iter()
            .zip(compile(&a.mirrored(), &cfg))
        {
            ensure!(
                m.heading_change_deg() == -c.heading_change_deg()
                    && m.distance_mm() == c.distance_mm(),
                "mirror of {c:?} is {m:?}"
            );
        }
        let result = run(&compile(&a, &cfg), &map, &em).map_err(|e| e.to_string())?;
        ensure!(
            result
                .trajectory
                .windows(2)
                .all(|w| w[1].energy <= w[0].energy),
            "energy rose"
        );
    }

    let home = start_pose(&map);
    let up_down = Program::new(vec![SymbolClass::Up, SymbolClass::Down]);
    let back = run(&compile(&up_down, &cfg), &map, &em).map_err(|e| e.to_string())?;
    ensure!(
        back.status == SimStatus::Completed,
        "up/down status {:?}",
        back.status
    );
    ensure!(
        (back.final_pose.x_mm - home.x_mm).abs() < 1e-9
            && (back.final_pose.y_mm - home.y_mm).abs() < 1e-9
            && (back.final_pose.heading_deg - home.heading_deg).abs() < 1e-9,
        "up/down ends at {:?}",
        back.final_pose
    );

    let spin = compile(&Program::new(vec![SymbolClass::RotateRight; 8]), &cfg);
    let spun = run(&spin, &map, &em).map_err(|e| e.to_string())?;
    ensure!(
        spun.final_pose.heading_deg == home.heading_deg,
        "heading {}",
        spun.final_pose.heading_deg
    );

    let half = load_map(HALF_DARK_MAP).map_err(|e| e.to_string())?;
    let one = run(
        &[MotionCommand::Translate { distance_mm: 110.0 }],
        &half,
        &em,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        one.total_cost == 5.0 && one.final_energy == 95.0,
        "step cost {}",
        one.total_cost
    );
    Ok("500 programs, round trips exact, half-dark step costs 5".into())
}

const SHEET: [(SymbolClass, u64); 3] = [
    (SymbolClass::Up, 501),
    (SymbolClass::ForwardLeft, 502),
    (SymbolClass::RotateRight, 503),
];

fn sheet() -> Result<GrayImage, String> {
    compose_sheet(&SHEET, 128, 3, 99).map_err(|e| e.to_string())
}

fn determinism(ws: &Workspace) -> Outcome {
    let again = ws.dir.path().join("model-again.json");
    hpl(&[
        "train",
        "--data",
        path(&ws.data()),
        "--model",
        path(&again),
        "--seed",
        "42",
    ])?;
    let first = std::fs::read(ws.model()).map_err(|e| e.to_string())?;
    let second = std::fs::read(&again).map_err(|e| e.to_string())?;
    ensure!(first == second, "model files differ");

    let model = ws.load_model()?;
    let cfg = PipelineConfig::default();
    let img = sheet()?;
    let a = classify_sheet(&img, &model, &cfg).map_err(|e| e.to_string())?;
    let b = classify_sheet(&img, &model, &cfg).map_err(|e| e.to_string())?;
    ensure!(a.program == b.program, "programs differ");
    Ok(format!(
        "{} identical model bytes, program {}",
        first.len(),
        a.program.to_names()
    ))
}

async fn call(req: reqwest::RequestBuilder) -> Result<(u16, Value), String> {
    let resp = req.send().await.map_err(|e| e.to_string())?;
    let status = resp.status().as_u16();
    let text = resp.text().await.map_err(|e| e.to_string())?;
    Ok((
        status,
        serde_json::from_str(&text).unwrap_or(Value::String(text)),
    ))
}

async fn conformance(base: &str) -> Outcome {
    let client = reqwest::Client::new();
    let url = |p: &str| format!("{base}{p}");
    let mut checked = 0;
    let mut expect = |what: &str, got: (u16, Value), status: u16, code: Option<&str>| {
        checked += 1;
        ensure!(
            got.0 == status,
            "{what}: status {} (want {status}), body {}",
            got.0,
            got.1
        );
        if let Some(code) = code {
            ensure!(
                got.1["code"] == code,
                "{what}: code {} (want {code})",
                got.1["code"]
            );
            ensure!(
                got.1["status"] == status,
                "{what}: body status {}",
                got.1["status"]
            );
        }
        Ok(got.1)
    };

    let health = expect(
        "health",
        call(client.get(url("/api/health"))).await?,
        200,
        None,
    )?;
    ensure!(health["status"] == "ok", "health body {health}");

    let pgm = encode_pgm(&sheet()?);
    let read = expect(
        "classify",
        call(client.post(url("/api/classify")).body(pgm)).await?,
        200,
        None,
    )?;
    let want: Vec<&str> = SHEET.iter().map(|g| g.0.name()).collect();
    ensure!(
        read["symbols"] == json!(want),
        "classified {} (want {want:?})",
        read["symbols"]
    );
    ensure!(
        read["confidences"].as_array().map(Vec::len) == Some(3),
        "confidences {}",
        read["confidences"]
    );
    ensure!(
        read["boxes"].as_array().map(Vec::len) == Some(3),
        "boxes {}",
        read["boxes"]
    );

    let blank = encode_pgm(&compose_sheet(&[], 128, 3, 5).map_err(|e| e.to_string())?);
    expect(
        "classify blank",
        call(client.post(url("/api/classify")).body(blank)).await?,
        422,
        Some("no_symbols"),
    )?;
    expect(
        "classify empty",
        call(client.post(url("/api/classify")).body(Vec::new())).await?,
        400,
        Some("bad_image"),
    )?;
    expect(
        "classify junk",
        call(client.post(url("/api/classify")).body("hello")).await?,
        400,
        Some("bad_image"),
    )?;
    let huge = vec![0u8; hpl::service::MAX_BODY_BYTES + 1];
    expect(
        "classify huge",
        call(client.post(url("/api/classify")).body(huge)).await?,
        413,
        Some("payload_too_large"),
    )?;

    let cmds = expect(
        "compile",
        call(
            client
                .post(url("/api/compile"))
                .json(&json!({"symbols": ["up", "rotate_right", "forward_left"]})),
        )
        .await?,
        200,
        None,
    )?;
    ensure!(
        cmds == json!([
            {"kind": "translate", "distance_mm": 110.0},
            {"kind": "rotate", "angle_deg": -45.0},
            {"kind": "arc", "heading_change_deg": 45.0, "chord_mm": 110.0}
        ]),
        "compiled {cmds}"
    );
    let unknown = expect(
        "compile unknown",
        call(
            client
                .post(url("/api/compile"))
                .json(&json!({"symbols": ["up", "zigzag"]})),
        )
        .await?,
        400,
        Some("unknown_symbol"),
    )?;
    ensure!(
        unknown["detail"]["index"] == 1,
        "detail {}",
        unknown["detail"]
    );
    expect(
        "compile malformed",
        call(client.post(url("/api/compile")).body("{\"symbols\": [")).await?,
        400,
        Some("malformed_json"),
    )?;

    let sim = expect(
        "simulate",
        call(
            client
                .post(url("/api/simulate"))
                .json(&json!({"program": {"symbols": ["up"]}})),
        )
        .await?,
        200,
        None,
    )?;
    ensure!(
        sim["status"] == "completed",
        "simulate status {}",
        sim["status"]
    );
    let traj = sim["trajectory"].as_array().ok_or("no trajectory")?;
    ensure!(traj.len() == 2, "trajectory of {}", traj.len());
    ensure!(
        traj[1]["energy"].as_f64() <= traj[0]["energy"].as_f64(),
        "energy rose: {}",
        sim["trajectory"]
    );
    let off = expect(
        "simulate off map",
        call(
            client
                .post(url("/api/simulate"))
                .json(&json!({"program": {"symbols": ["up", "up", "up"]}})),
        )
        .await?,
        200,
        None,
    )?;
    ensure!(
        off["status"] == "off_map" && off["failed_command"] == 2,
        "off-map reply {off}"
    );
    let custom = expect(
        "simulate custom map",
        call(client.post(url("/api/simulate")).json(&json!({
            "program": [{"kind": "translate", "distance_mm": 110.0}],
            "map": serde_json::from_str::<Value>(HALF_DARK_MAP).map_err(|e| e.to_string())?,
        })))
        .await?,
        200,
        None,
    )?;
    ensure!(
        custom["final_energy"] == 95.0,
        "custom map energy {}",
        custom["final_energy"]
    );
    expect(
        "simulate bad map",
        call(
            client
                .post(url("/api/simulate"))
                .json(&json!({"program": [], "map": {"pitch_mm": 1}})),
        )
        .await?,
        400,
        Some("bad_map"),
    )?;
    expect(
        "simulate bad energy",
        call(client.post(url("/api/simulate")).json(&json!({"program": [], "energy": {"initial": -1.0, "drain_per_step": 10.0, "rotation_cost": 0.0}}))).await?,
        400,
        Some("bad_energy_model"),
    )?;
    expect(
        "simulate malformed",
        call(client.post(url("/api/simulate")).body("[]")).await?,
        400,
        Some("malformed_json"),
    )?;

    let map = expect(
        "default map",
        call(client.get(url("/api/map/default"))).await?,
        200,
        None,
    )?;
    ensure!(
        map["nodes"].as_array().map(Vec::len) == Some(25),
        "map nodes {}",
        map["nodes"]
    );
    expect(
        "unknown route",
        call(client.get(url("/api/nope"))).await?,
        404,
        Some("not_found"),
    )?;
    expect(
        "wrong method",
        call(client.get(url("/api/compile"))).await?,
        405,
        Some("method_not_allowed"),
    )?;
    let page = expect("static root", call(client.get(url("/"))).await?, 200, None)?;
    ensure!(
        page.as_str().is_some_and(|s| s.contains("<title>")),
        "root page {page}"
    );
    Ok(format!("{checked} requests conform"))
}

fn service(ws: &Workspace) -> Outcome {
    let model = ws.load_model()?;
    let state = AppState::new(model, PlaygroundMap::default_map());
    let opts = ServiceOptions {
        static_dir: Some(ws.dir.path().join("no-webui-build")),
        cors_origin: None,
    };
    let app = router(state, &opts);
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
            .await
            .map_err(|e| e.to_string())?;
        let base = format!(
            "http://{}",
            listener.local_addr().map_err(|e| e.to_string())?
        );
        let server = tokio::spawn(async move { axum::serve(listener, app).await });
        let outcome = conformance(&base).await;
        server.abort();
        outcome
    })
}

struct Criterion {
    name: &'static str,
    check: fn(&Workspace) -> Outcome,
    limit: Option<Duration>,
}

fn main() {
    let ws = Workspace {
        dir: tempfile::tempdir().expect("temp dir"),
    };
    let criteria = [
        Criterion {
            name: "confusion-matrix arithmetic",
            check: confusion_arithmetic,
            limit: Some(Duration::from_secs(1)),
        },
        Criterion {
            name: "gradient correctness",
            check: gradients,
            limit: Some(Duration::from_secs(10)),
        },
        Criterion {
            name: "end-to-end synthetic benchmark",
            check: benchmark,
            limit: Some(Duration::from_secs(300)),
        },
        Criterion {
            name: "feature property suite",
            check: features,
            limit: Some(Duration::from_secs(30)),
        },
        Criterion {
            name: "split contract",
            check: split_contract,
            limit: Some(Duration::from_secs(5)),
        },
        Criterion {
            name: "compiler/simulator properties",
            check: compiler_and_simulator,
            limit: Some(Duration::from_secs(30)),
        },
        Criterion {
            name: "determinism",
            check: determinism,
            limit: None,
        },
        Criterion {
            name: "service contract",
            check: service,
            limit: None,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.check)(&ws);
        let elapsed = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("{detail}; took {elapsed:.1?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS  {:<32} {detail} ({elapsed:.2?})", c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:<32} {why} ({elapsed:.2?})", c.name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
