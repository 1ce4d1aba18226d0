//! Subcommands of the `structenc` binary. Each command reads its inputs,
//! runs one experiment, and writes CSV/JSON artifacts plus a manifest into
//! the output directory.
//!
//! Exit codes: 0 success, 1 generic/usage, 2 encoding failure, 3 symmetry
//! check failure, 4 data problem, 5 persistence/stability failure.

pub mod config;
pub mod input;
pub mod output;

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};
use structenc::encodings::{encode_pure, parse_bits, EncodingSpec};
use structenc::equivariance::{
    check_action, check_representation, decision_grid, gqml_closed_form, grid_to_csv, klein_four_known_solutions,
    solve_default, SymmetryFixture, GeneratorBasis,
};
use structenc::metric_learning::{
    bloch_coords, bloch_curve, dataset_cost, spectrum_check, train, CentroidModel, LabeledDataset, TrainConfig,
    REFERENCE_THETA,
};
use structenc::metrics::{FiniteMetricSpace, StateMetric};
use structenc::tda::{compare_spaces, stability_experiment};

pub use config::{Cli, Command, Knobs};
use output::{num, Manifest, OutputDir};

pub const EXIT_GENERIC: i32 = 1;
pub const EXIT_ENCODE: i32 = 2;
pub const EXIT_SYMMETRY: i32 = 3;
pub const EXIT_DATA: i32 = 4;
pub const EXIT_TDA: i32 = 5;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn generic(message: impl Into<String>) -> Self {
        Self::new(EXIT_GENERIC, message)
    }

    fn from_core(code: i32, context: &str, e: structenc::Error) -> Self {
        Self::new(code, format!("{context}: {e}"))
    }
}

/// Result of a completed run. `exit_code` is nonzero when an internal check
/// failed even though all files were written.
#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub checks: Value,
}

struct Report {
    config: Value,
    seed: Option<u64>,
    checks: Value,
    exit_code: i32,
}

pub fn run(cli: Cli) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let knobs = cli.knobs.resolve()?;
    let mut out = OutputDir::create(&knobs.out_dir())?;
    let report = match cli.command {
        Command::Encode => cmd_encode(&knobs, &mut out)?,
        Command::EquivariantBasis => cmd_equivariant_basis(&knobs, &mut out)?,
        Command::GqmlGrid => cmd_gqml_grid(&knobs, &mut out)?,
        Command::MetricLearn => cmd_metric_learn(&knobs, &mut out)?,
        Command::TdaStability => cmd_tda_stability(&knobs, &mut out)?,
    };
    let manifest = Manifest {
        subcommand: cli.command.name(),
        config: report.config,
        seed: report.seed,
        checks: report.checks.clone(),
        exit_code: report.exit_code,
    };
    let mut files = out.files().to_vec();
    files.push("manifest.json".into());
    let value = manifest.to_value(&files, start.elapsed().as_secs_f64());
    out.write_json("manifest.json", &value)?;
    Ok(RunOutcome {
        exit_code: report.exit_code,
        out_dir: out.path().to_path_buf(),
        files,
        checks: report.checks,
    })
}

fn path_value(p: &Option<PathBuf>) -> Value {
    p.as_ref().map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn require<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a PathBuf, CliError> {
    p.as_ref().ok_or_else(|| CliError::generic(format!("--{flag} is required")))
}

fn load_spec(knobs: &Knobs) -> Result<EncodingSpec, CliError> {
    let path = require(&knobs.spec, "spec")?;
    let text = config::read_text(path)?;
    EncodingSpec::from_json(&text).map_err(|e| CliError::from_core(EXIT_ENCODE, &format!("spec {}", path.display()), e))
}

pub fn cmd_encode_inner(spec: &EncodingSpec, table: &input::PointTable) -> (String, Vec<(usize, usize, String)>) {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut errors = Vec::new();
    for (i, record) in table.rows.iter().enumerate() {
        let x: Result<Vec<f64>, String> = match spec {
            EncodingSpec::Bit {} => parse_bits(&record.raw[0])
                .map(|bits| bits.into_iter().map(|b| f64::from(u8::from(b))).collect())
                .map_err(|e| e.to_string()),
            _ => record.values.clone(),
        };
        match x.and_then(|x| encode_pure(spec, &x, None).map_err(|e| e.to_string())) {
            Ok(psi) => rows.push((i, psi.amplitudes().iter().flat_map(|z| [z.re, z.im]).collect())),
            Err(e) => errors.push((i, record.line, e)),
        }
    }
    let width = rows.iter().map(|r| r.1.len() / 2).max().unwrap_or(0);
    let mut csv = String::from("row");
    for k in 0..width {
        csv.push_str(&format!(",re_{k},im_{k}"));
    }
    csv.push('\n');
    for (i, amps) in &rows {
        csv.push_str(&i.to_string());
        for k in 0..width {
            let (re, im) = amps.get(2 * k).zip(amps.get(2 * k + 1)).map_or((0.0, 0.0), |(a, b)| (*a, *b));
            csv.push_str(&format!(",{re},{im}"));
        }
        csv.push('\n');
    }
    (csv, errors)
}

fn cmd_encode(knobs: &Knobs, out: &mut OutputDir) -> Result<Report, CliError> {
    let spec = load_spec(knobs)?;
    let points = require(&knobs.points, "points")?;
    let table = input::read_points(points, matches!(spec, EncodingSpec::Bit {}))?;
    let (csv, errors) = cmd_encode_inner(&spec, &table);
    out.write("states.csv", &csv)?;
    if !errors.is_empty() {
        let mut err_csv = String::from("row,line,error\n");
        for (row, line, msg) in &errors {
            err_csv.push_str(&format!("{row},{line},\"{}\"\n", msg.replace('"', "'")));
        }
        out.write("errors.csv", &err_csv)?;
    }
    Ok(Report {
        config: json!({"points": path_value(&knobs.points), "spec": spec, "encoding": spec.name()}),
        seed: None,
        checks: json!({"rows": table.rows.len(), "encoded": table.rows.len() - errors.len(), "failed": errors.len()}),
        exit_code: if errors.is_empty() { 0 } else { EXIT_ENCODE },
    })
}

fn load_symmetry(knobs: &Knobs) -> Result<(SymmetryFixture, String), CliError> {
    match (&knobs.symmetry, &knobs.builtin) {
        (Some(path), None) => {
            let text = config::read_text(path)?;
            let f = SymmetryFixture::from_json(&text)
                .map_err(|e| CliError::from_core(EXIT_SYMMETRY, &format!("symmetry {}", path.display()), e))?;
            Ok((f, path.display().to_string()))
        }
        (None, Some(name)) => {
            let f = match name.as_str() {
                "klein-four" => SymmetryFixture::klein_four(),
                "trivial" => SymmetryFixture::trivial(),
                "z2-reflection" => SymmetryFixture::z2_reflection(),
                other => return Err(CliError::generic(format!("unknown builtin symmetry {other:?}"))),
            };
            Ok((f, format!("builtin:{name}")))
        }
        (Some(_), Some(_)) => Err(CliError::generic("give either --symmetry or --builtin, not both")),
        (None, None) => Err(CliError::generic("--symmetry or --builtin is required")),
    }
}

fn cmd_equivariant_basis(knobs: &Knobs, out: &mut OutputDir) -> Result<Report, CliError> {
    let (fixture, source) = load_symmetry(knobs)?;
    let (action, rep) = fixture
        .parts()
        .map_err(|e| CliError::from_core(EXIT_SYMMETRY, "symmetry data", e))?;
    let a_check = check_action(&action);
    let r_check = check_representation(&rep);
    let config = json!({"symmetry": source});
    let mut checks = json!({
        "action": a_check,
        "representation": r_check,
    });
    if !a_check.pass || !r_check.pass {
        out.write_json("checks.json", &checks)?;
        return Ok(Report {
            config,
            seed: None,
            checks,
            exit_code: EXIT_SYMMETRY,
        });
    }
    let basis = solve_default(&action, &rep).map_err(|e| CliError::from_core(EXIT_SYMMETRY, "solver", e))?;
    checks["dim"] = json!(basis.dim);
    checks["max_constraint_residual"] = json!(basis.max_constraint_residual);
    if basis.d == 2 && basis.n == 4 {
        let residuals: Vec<f64> = klein_four_known_solutions()
            .iter()
            .map(|pair| basis.projection_residual(pair).unwrap_or(f64::INFINITY))
            .collect();
        checks["pauli_pair_projection_residuals"] = json!(residuals);
    }
    let mut doc = serde_json::to_value(&basis).map_err(|e| CliError::generic(e.to_string()))?;
    doc["action_check"] = checks["action"].clone();
    doc["representation_check"] = checks["representation"].clone();
    out.write_json("basis.json", &doc)?;
    Ok(Report {
        config,
        seed: None,
        checks,
        exit_code: 0,
    })
}

/// Reads a basis document written by `equivariant-basis`.
pub fn read_basis(text: &str) -> Result<GeneratorBasis, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::new(EXIT_DATA, format!("basis JSON: {e}")))
}

fn cmd_gqml_grid(knobs: &Knobs, out: &mut OutputDir) -> Result<Report, CliError> {
    let p = knobs.p.unwrap_or(0.99);
    let resolution = knobs.grid.unwrap_or(401);
    let lo = knobs.lo.unwrap_or(-std::f64::consts::PI);
    let hi = knobs.hi.unwrap_or(std::f64::consts::PI);
    let tol = knobs.tolerance.unwrap_or(1e-12);
    let rows = decision_grid(lo, hi, resolution, p).map_err(|e| CliError::from_core(EXIT_DATA, "grid", e))?;
    out.write("grid.csv", &grid_to_csv(&rows))?;

    let n = resolution;
    let at = |i: usize, j: usize| &rows[i * n + j];
    let mirrored = (lo + hi).abs() <= f64::EPSILON * (lo.abs() + hi.abs());
    let mut sym = 0.0f64;
    let mut class_violations = 0usize;
    let mut closed = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let r = at(i, j);
            closed = closed.max((r.y - gqml_closed_form(r.x1, r.x2, p)).abs());
            let mut images = vec![at(j, i)];
            if mirrored {
                images.push(at(n - 1 - i, n - 1 - j));
                images.push(at(n - 1 - j, n - 1 - i));
            }
            for m in images {
                sym = sym.max((m.y - r.y).abs());
                if m.class != r.class {
                    class_violations += 1;
                }
            }
        }
    }
    let count = |c: i8| rows.iter().filter(|r| r.class == c).count();
    let coefficient = 2.0 * (p * (1.0 - p)).sqrt();
    let pass = sym <= tol && closed <= tol && class_violations == 0;
    let checks = json!({
        "symmetry_residual": sym,
        "class_symmetry_violations": class_violations,
        "inversion_checked": mirrored,
        "closed_form_residual": closed,
        "closed_form": "cos(x1) cos(x2) + c sin(x1) sin(x2)",
        "closed_form_coefficient": coefficient,
        "tolerance": tol,
        "class_counts": {"+1": count(1), "-1": count(-1), "0": count(0)},
        "pass": pass,
    });
    out.write_json("summary.json", &checks)?;
    Ok(Report {
        config: json!({"p": p, "grid": resolution, "lo": lo, "hi": hi, "tolerance": tol}),
        seed: None,
        checks,
        exit_code: if pass { 0 } else { EXIT_SYMMETRY },
    })
}

fn data_err(ctx: &'static str) -> impl Fn(structenc::Error) -> CliError {
    move |e| CliError::from_core(EXIT_DATA, ctx, e)
}

fn cmd_metric_learn(knobs: &Knobs, out: &mut OutputDir) -> Result<Report, CliError> {
    let seed = knobs.seed.unwrap_or(7);
    let (data, source) = match (&knobs.data, knobs.fixture, knobs.reference_data) {
        (Some(path), false, false) => (input::read_dataset(path)?, path.display().to_string()),
        (None, true, false) => (LabeledDataset::fixture(seed), format!("fixture:{seed}")),
        (None, false, true) => (LabeledDataset::reference_dataset(), "reference".to_string()),
        (None, false, false) => return Err(CliError::generic("one of --data, --fixture or --reference-data is required")),
        _ => return Err(CliError::generic("--data, --fixture and --reference-data are mutually exclusive")),
    };
    let config = TrainConfig {
        restarts: knobs.restarts.unwrap_or(16),
        seed,
        max_iters: knobs.max_iters.unwrap_or(2000),
        ftol: knobs.tolerance.unwrap_or(1e-9),
    };
    let samples = knobs.samples.unwrap_or(201);
    let lo = knobs.lo.unwrap_or(-2.0);
    let hi = knobs.hi.unwrap_or(2.0);
    if samples < 2 || lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(CliError::generic("need --samples ≥ 2 and --lo < --hi"));
    }

    let result = train(&data, &config).map_err(data_err("training"))?;
    let reference_cost = dataset_cost(&data, &REFERENCE_THETA).map_err(data_err("reference cost"))?;
    let model = CentroidModel::fit(&data, &result.theta_star).map_err(data_err("model"))?;
    let spectrum = spectrum_check(&data, &result.theta_star).map_err(data_err("spectrum"))?;

    let mut point_csv = String::from("x,label,bx,by,bz,y,class,helstrom_y\n");
    let mut correct = 0;
    let mut helstrom_correct = 0;
    for (&x, &label) in data.points().iter().zip(data.labels()) {
        let b = bloch_coords(&structenc::metric_learning::reupload_state(x, &result.theta_star))
            .map_err(data_err("bloch"))?;
        let (y, class) = model.fidelity_y(x).map_err(data_err("classifier"))?;
        let (hy, hclass) = model.helstrom_y(x).map_err(data_err("classifier"))?;
        correct += usize::from(class == label);
        helstrom_correct += usize::from(hclass == label);
        point_csv.push_str(&format!("{x},{label},{},{},{},{y},{class},{hy}\n", b[0], b[1], b[2]));
    }

    let mut curve_csv = String::from("x,bx,by,bz\n");
    for (x, b) in bloch_curve(&result.theta_star, lo, hi, samples) {
        curve_csv.push_str(&format!("{x},{},{},{}\n", b[0], b[1], b[2]));
    }

    let theta = result.theta_star;
    let mut space = structenc::metrics::pullback(
        data.points(),
        |x| Ok(structenc::metric_learning::reupload_state(*x, &theta)),
        StateMetric::Hs,
    )
    .map_err(data_err("pull-back"))?
    .rescaled_to_unit_max();
    space.labels = (0..data.len()).map(|i| format!("p{i}")).collect();
    let max_entry = space.max_distance();

    let centroid_bloch = [&model.rho_a, &model.rho_b].map(|rho| bloch_coords(rho).map(|b| b.to_vec()).unwrap_or_default());
    let pass = spectrum.residual <= 1e-12 && max_entry == 1.0;
    let checks = json!({
        "cost": result.cost,
        "reference_theta": REFERENCE_THETA,
        "reference_cost": reference_cost,
        "cost_at_most_reference": result.cost <= reference_cost + 1e-6,
        "training_accuracy": correct as f64 / data.len() as f64,
        "helstrom_accuracy": helstrom_correct as f64 / data.len() as f64,
        "spectrum_lambda": spectrum.lambda,
        "spectrum_residual": spectrum.residual,
        "distance_max_entry": max_entry,
        "pass": pass,
    });
    let mut train_json = serde_json::to_value(&result).map_err(|e| CliError::generic(e.to_string()))?;
    train_json["reference_theta"] = json!(REFERENCE_THETA);
    train_json["reference_cost"] = json!(reference_cost);
    train_json["centroid_bloch"] = json!({"A": centroid_bloch[0], "B": centroid_bloch[1]});
    train_json["checks"] = checks.clone();

    out.write("dataset.csv", &data.to_csv())?;
    out.write_json("train_result.json", &train_json)?;
    out.write("points_bloch.csv", &point_csv)?;
    out.write("bloch_curve.csv", &curve_csv)?;
    out.write("distances.csv", &space.to_csv())?;
    Ok(Report {
        config: json!({
            "data": source,
            "restarts": config.restarts,
            "max_iters": config.max_iters,
            "ftol": config.ftol,
            "samples": samples,
            "lo": lo,
            "hi": hi,
        }),
        seed: Some(seed),
        checks,
        exit_code: if pass { 0 } else { EXIT_DATA },
    })
}

fn cmd_tda_stability(knobs: &Knobs, out: &mut OutputDir) -> Result<Report, CliError> {
    let points_path = require(&knobs.points, "points")?;
    let spec_path = require(&knobs.spec, "spec")?;
    let max_dim = knobs.max_dim.unwrap_or(2);
    let metric: StateMetric = knobs
        .metric
        .as_deref()
        .unwrap_or("trace")
        .parse()
        .map_err(|e: structenc::Error| CliError::generic(e.to_string()))?;
    let table = input::read_points(points_path, false)?;
    let points = table.numeric().map_err(|e| CliError::new(EXIT_DATA, e))?;
    let tda_err = |e: structenc::Error| CliError::from_core(EXIT_TDA, "stability", e);

    let (report, spec_value) = if spec_path.as_os_str() == "identity" {
        let raw = FiniteMetricSpace::euclidean(&points).map_err(tda_err)?;
        (compare_spaces(&raw, &raw.clone(), max_dim).map_err(tda_err)?, json!("identity"))
    } else {
        let spec = load_spec(knobs)?;
        let r = stability_experiment(&points, |x| structenc::encodings::encode_state(&spec, x, None), metric, max_dim)
            .map_err(tda_err)?;
        (r, serde_json::to_value(&spec).unwrap_or(Value::Null))
    };
    out.write_json("dgm_raw.json", &report.dgm_raw.to_json_value(max_dim))?;
    out.write_json("dgm_encoded.json", &report.dgm_encoded.to_json_value(max_dim))?;
    let checks = json!({
        "distortion": num(report.distortion),
        "bottleneck": report.bottleneck.iter().map(|b| num(*b)).collect::<Vec<_>>(),
        "isometry_pass": report.isometry_pass,
        "bound_pass": report.bound_pass,
    });
    out.write_json("report.json", &checks)?;
    Ok(Report {
        config: json!({
            "points": path_value(&knobs.points),
            "spec": spec_value,
            "metric": format!("{metric:?}").to_lowercase(),
            "max_dim": max_dim,
        }),
        seed: None,
        checks,
        exit_code: if report.bound_pass && report.isometry_pass { 0 } else { EXIT_TDA },
    })
}

/// Sizes the global rayon pool from `STRUCTENC_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("STRUCTENC_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::generic(format!("STRUCTENC_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CliError::generic("STRUCTENC_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::generic(e.to_string()))?;
    }
    Ok(())
}
