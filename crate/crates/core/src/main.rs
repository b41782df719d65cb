use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sepcorr::analysis::config::{MAX_CLOSED_FORM_PARTIES, MAX_DENSE_PARTIES};
use sepcorr::analysis::report::CSV_HEADER;
use sepcorr::analysis::scenarios::multi_index_label;
use sepcorr::analysis::{
    run_builtin, run_validated, verify_all, violation_ratio, AggregateReport, BuiltinScenario,
    GridSpec, Provenance, Report, RunOptions, ScenarioConfig, StateSpec, Tolerances,
};
use sepcorr::lhv::{lhv_upper_bound, ModelSpec};
use sepcorr::quantum::{correlation_tensor, correlation_tensor_dense, separable_maximum};
use sepcorr::{separability_check, Error};

const EXIT_VERDICT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sepcorr",
    version,
    about = "Correlation-function scalar products for separable states and hidden-variable models"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Gauss-Legendre nodes in cos θ per sphere.
    #[arg(long, global = true)]
    n_theta: Option<usize>,
    /// Trapezoid nodes in φ per sphere.
    #[arg(long, global = true)]
    n_phi: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed for randomized scenarios and property suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest party count swept by built-in scenarios.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// TOML file with tolerance overrides (same keys as a scenario's [tolerances]).
    #[arg(long, global = true)]
    tolerances: Option<PathBuf>,
    #[arg(long, global = true)]
    quadrature_tol: Option<f64>,
    #[arg(long, global = true)]
    exact_tol: Option<f64>,
    #[arg(long, global = true)]
    lhv_tol: Option<f64>,
    #[arg(long, global = true)]
    ratio_tol: Option<f64>,
    /// Also write quantities as CSV to this path.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Directory for per-scenario JSONL reports.
    #[arg(long, global = true, env = "SEPCORR_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Correlation tensor of a state, e.g. `bell`, `ghz:3`, `pure:0,0;1.5708,0`.
    Tensor { state: String },
    /// Closed-form and quadrature scalar products of a state's correlation function.
    ScalarProduct { state: String },
    /// Scalar product of a hidden-variable model: a TOML file or
    /// `saturating:N`, `hemispheric:N`, `simulator:x,y,z[@resolution]`.
    Lhv { model: String },
    /// Violation ratio (4π)^N / (4π/3)^N for N = 1..=max.
    Ratio {
        #[arg(default_value_t = MAX_CLOSED_FORM_PARTIES)]
        max: usize,
    },
    /// Run a scenario file or a built-in scenario by name.
    Run { scenario: String },
    /// Run every built-in scenario and property suite.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERDICT),
        Err(e) => {
            eprintln!("sepcorr: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(PathBuf, io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Lib(Error::Budget { .. } | Error::NonFinite { .. }) | CliError::Io(..) => {
            EXIT_RESOURCE
        }
        CliError::Lib(_) => EXIT_CONFIG,
    }
}

fn run_options(g: &Global) -> Result<RunOptions, CliError> {
    let mut opts = RunOptions::default();
    if let Some(path) = &g.tolerances {
        let text = read(path)?;
        opts.tolerances = toml::from_str::<Tolerances>(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    let t = &mut opts.tolerances;
    for (slot, value) in [
        (&mut t.quadrature_rel, g.quadrature_tol),
        (&mut t.exact_rel, g.exact_tol),
        (&mut t.lhv_rel, g.lhv_tol),
        (&mut t.ratio_rel, g.ratio_tol),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("tolerance {v} must be finite and ≥ 0")).into());
            }
            *slot = v;
        }
    }
    opts.grid = GridSpec {
        n_theta: g.n_theta.unwrap_or(opts.grid.n_theta),
        n_phi: g.n_phi.unwrap_or(opts.grid.n_phi),
    };
    opts.grid.build()?;
    if let Some(seed) = g.seed {
        opts.seed = seed;
    }
    if let Some(n) = g.max_n {
        if n == 0 {
            return Err(Error::Config("--max-n must be ≥ 1".into()).into());
        }
        opts.max_parties = n;
    }
    Ok(opts)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn parse_state(text: &str) -> Result<StateSpec, CliError> {
    Ok(text.parse::<StateSpec>()?)
}

fn parse_model(text: &str) -> Result<ModelSpec, CliError> {
    let path = Path::new(text);
    if path.is_file() {
        return Ok(ModelSpec::from_toml(&read(path)?)?);
    }
    let bad = || Error::Config(format!("model `{text}`: not a file or compact model"));
    let (kind, arg) = text.split_once(':').ok_or_else(bad)?;
    let count = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    Ok(match kind {
        "saturating" => ModelSpec::Saturating {
            n_parties: count(arg)?,
        },
        "hemispheric" => ModelSpec::HemisphericDisagreement {
            n_parties: count(arg)?,
        },
        "simulator" => {
            let (vec, res) = match arg.split_once('@') {
                Some((v, r)) => (v, count(r)?),
                None => (arg, sepcorr::lhv::DEFAULT_SIMULATOR_RESOLUTION),
            };
            let xs: Vec<f64> = vec
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            let bloch: [f64; 3] = xs.try_into().map_err(|_| bad())?;
            ModelSpec::ThresholdSimulator {
                bloch,
                resolution: res,
            }
        }
        _ => return Err(bad().into()),
    })
}

fn config(name: &str, n: usize, opts: &RunOptions) -> ScenarioConfig {
    ScenarioConfig {
        name: name.to_string(),
        n_parties: n,
        state: None,
        model: None,
        grid: opts.grid,
        tolerances: opts.tolerances,
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let opts = run_options(&cli.global)?;
    let reports = match &cli.command {
        Command::Tensor { state } => vec![tensor_report(&parse_state(state)?, &opts)?],
        Command::ScalarProduct { state } => {
            let spec = parse_state(state)?;
            let mut cfg = config("scalar-product", spec.n_parties(), &opts);
            cfg.state = Some(spec);
            vec![run_validated(&cfg.validate()?)?]
        }
        Command::Lhv { model } => {
            let spec = parse_model(model)?;
            let mut cfg = config("lhv", spec.n_parties(), &opts);
            cfg.model = Some(spec);
            vec![run_validated(&cfg.validate()?)?]
        }
        Command::Ratio { max } => vec![ratio_report(*max, &opts)?],
        Command::Run { scenario } => {
            let path = Path::new(scenario);
            if path.is_file() {
                let mut cfg = ScenarioConfig::from_toml(&read(path)?)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                if cli.global.n_theta.is_some() || cli.global.n_phi.is_some() {
                    cfg.grid = opts.grid;
                }
                vec![run_validated(&cfg.validate()?)?]
            } else if BuiltinScenario::from_name(scenario).is_some() {
                vec![run_builtin(scenario, &opts)?]
            } else {
                let names: Vec<_> = BuiltinScenario::ALL.iter().map(|s| s.name()).collect();
                return Err(Error::Config(format!(
                    "`{scenario}` is neither a file nor a built-in scenario ({})",
                    names.join(", ")
                ))
                .into());
            }
        }
        Command::Verify => {
            let agg = verify_all(&opts);
            emit(&agg.reports, &cli.global)?;
            if cli.global.format == Format::Table {
                print_summary(&agg);
            }
            return Ok(agg.passed());
        }
    };
    emit(&reports, &cli.global)?;
    Ok(reports.iter().all(Report::passed))
}

fn tensor_report(spec: &StateSpec, opts: &RunOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let n = spec.n_parties();
    if n > MAX_DENSE_PARTIES {
        return Err(Error::Config(format!("tensor: N = {n} exceeds the dense-state cap")).into());
    }
    let state = spec.build(opts.tolerances.density)?;
    let t = correlation_tensor(&state);
    let dense = correlation_tensor_dense(&state);
    let mut r = Report::new(
        "tensor",
        Provenance::new(opts.grid, opts.tolerances, opts.seed),
    );
    let diff = t
        .values()
        .iter()
        .zip(dense.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    r.compare_abs("tensor-vs-dense-max-diff", diff, 0.0, "dense trace", 1e-12);
    for (k, v) in t.values().iter().enumerate() {
        r.quantity(format!("T[{}]", multi_index_label(k, n)), *v);
    }
    let verdict = separability_check(&t, opts.tolerances.separability);
    r.quantity("sum-t2", verdict.sum_of_squares);
    r.note(format!(
        "separability condition ΣT² ≤ 1: {:?}",
        verdict.status
    ));
    r.duration = start.elapsed();
    Ok(r)
}

fn ratio_report(max: usize, opts: &RunOptions) -> Result<Report, CliError> {
    if max == 0 || max > MAX_CLOSED_FORM_PARTIES {
        return Err(
            Error::Config(format!("ratio: N must be in 1..={MAX_CLOSED_FORM_PARTIES}")).into(),
        );
    }
    let start = Instant::now();
    let mut r = Report::new(
        "ratio",
        Provenance::new(opts.grid, opts.tolerances, opts.seed),
    );
    for n in 1..=max {
        r.quantity(format!("lhv-max[N={n}]"), lhv_upper_bound(n)?);
        r.quantity(format!("sep-max[N={n}]"), separable_maximum(n));
        r.compare_rel(
            format!("ratio[N={n}]"),
            violation_ratio(n)?,
            3f64.powi(n as i32),
            "3^N",
            opts.tolerances.ratio_rel,
        );
    }
    r.duration = start.elapsed();
    Ok(r)
}

fn emit(reports: &[Report], g: &Global) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |e: io::Error| CliError::Io(PathBuf::from("<stdout>"), e);
    for r in reports {
        match g.format {
            Format::Table => writeln!(out, "{}", r.to_table()).map_err(io_err)?,
            Format::Jsonl => r.write_jsonl(&mut out).map_err(io_err)?,
        }
    }
    if let Some(dir) = &g.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.clone(), e))?;
        for r in reports {
            let path = dir.join(format!("{}.jsonl", r.scenario));
            let mut f = fs::File::create(&path).map_err(|e| CliError::Io(path.clone(), e))?;
            r.write_jsonl(&mut f)
                .map_err(|e| CliError::Io(path.clone(), e))?;
        }
    }
    if let Some(csv_path) = &g.csv {
        let path = match &g.out_dir {
            Some(dir) if csv_path.is_relative() => dir.join(csv_path),
            _ => csv_path.clone(),
        };
        let csv_err = |e: csv::Error| CliError::Io(path.clone(), io::Error::other(e));
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in reports {
            r.write_csv(&mut w).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::Io(path.clone(), e))?;
    }
    Ok(())
}

fn print_summary(agg: &AggregateReport) {
    println!("{}", agg.summary_table());
    println!(
        "{} in {:.3} s",
        if agg.passed() { "ALL PASS" } else { "FAILURES" },
        agg.duration.as_secs_f64()
    );
}
