//! `orlicz`: command-line front end to the genorlicz toolkit.
//!
//! Every run writes one JSON bundle to the output directory and prints a
//! one-line verdict. Exit codes: 0 all claims match, 1 mismatch, 2 usage or
//! parse error, 3 internal error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

use genorlicz::conditions::TInterval;
use genorlicz::gallery::{
    default_grid, run_example, run_pipeline, Bundle, CheckKind, CheckRequest, Experiment, ExperimentSpec, NamedGrid,
    RunSettings, TransformStep, Verdict, EXAMPLE_NAMES,
};
use genorlicz::geometry::{Field, Region, WeightFunction};
use genorlicz::grid::GridFunction;
use genorlicz::maximal::{maximal, MaximalConfig};
use genorlicz::norms::GridPhi;
use genorlicz::phi_core::{PhiCurve, PhiFunction};
use genorlicz::{Error, Extended};

const OUT_ENV: &str = "ORLICZ_OUT_DIR";

#[derive(Parser)]
#[command(name = "orlicz", version, about = "Check conditions, build transforms and run maximal-function experiments for generalized Orlicz Φ-functions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Cells per axis of the (largest) grid.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Half-width R of the truncation box [−R, R]ⁿ used for unbounded domains.
    #[arg(long, global = true)]
    truncation_radius: Option<f64>,
    /// Seed for randomized ball sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for JSON bundles and CSV extracts.
    #[arg(long, global = true, env = OUT_ENV, default_value = "orlicz-out")]
    out: PathBuf,
    /// Also write grid functions produced by the run as CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Print the full JSON bundle to stdout as well.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check one structural condition for a Φ-function.
    Check(CheckArgs),
    /// Apply a construction and emit the resulting Φ-function.
    Transform(TransformArgs),
    /// Modular and Luxemburg norm of a function on a grid.
    Norm(NormArgs),
    /// Compute the maximal function of a grid function.
    Maximal(MaximalArgs),
    /// Reproduce one worked example (or `all`).
    Example {
        /// ex3_2, ex3_4, ex3_5, ex4_6, dp_cor49 or all.
        name: String,
    },
    /// Run a JSON pipeline spec.
    Pipeline {
        /// Pipeline spec JSON, inline or a file path.
        spec: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConditionArg {
    A0,
    A1,
    #[value(name = "a1prime")]
    A1Prime,
    A2,
    Ainc,
    Adec,
    Equiv,
    WeakEquiv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Holds,
    Fails,
}

#[derive(Args)]
struct CheckArgs {
    /// Φ-function JSON, inline or a file path.
    phi: String,
    condition: ConditionArg,
    /// Exponent for aInc.
    #[arg(long)]
    p: Option<f64>,
    /// Exponent for aDec.
    #[arg(long)]
    q: Option<f64>,
    /// Lower end of the t-range (aInc/aDec).
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    /// Upper end of the t-range (aInc/aDec); `inf` for unbounded.
    #[arg(long, default_value = "inf")]
    t_max: String,
    /// Asymptote curve JSON for A2.
    #[arg(long)]
    phi_inf: Option<String>,
    /// Weight JSON for A2 and weak equivalence.
    #[arg(long)]
    h: Option<String>,
    /// Argument scaling β ∈ (0, 1] of the A2 candidate.
    #[arg(long)]
    beta: Option<f64>,
    /// Level bound for A2.
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Second Φ-function for (weak) equivalence.
    #[arg(long)]
    other: Option<String>,
    /// Equivalence constant L ≥ 1.
    #[arg(long)]
    l: Option<f64>,
    #[arg(long, value_enum, default_value = "holds")]
    expect: Expect,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformOp {
    /// aInc-restoring construction from an asymptote.
    Thm47,
    /// Glue φ^p on a region for t ≤ 1.
    Glue,
    /// Shell estimates of the asymptotes at infinity.
    Asymptotes,
}

#[derive(Args)]
struct TransformArgs {
    /// Φ-function JSON, inline or a file path.
    phi: String,
    op: TransformOp,
    /// Asymptote curve JSON (thm47).
    #[arg(long)]
    phi_inf: Option<String>,
    /// Weight JSON (thm47).
    #[arg(long)]
    h: Option<String>,
    /// Argument scaling β₂ of the asymptote (thm47).
    #[arg(long)]
    beta: Option<f64>,
    /// Level bound of the asymptote pair (thm47).
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Switch-over level; derived from φ and φ∞ when omitted (thm47).
    #[arg(long)]
    t1: Option<f64>,
    /// Region JSON for glue.
    #[arg(long)]
    region: Option<String>,
    /// Glue exponent.
    #[arg(long)]
    p: Option<f64>,
    /// Shell radii for asymptotes.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
}

#[derive(Args)]
struct NormArgs {
    /// Φ-function JSON, inline or a file path.
    phi: String,
    #[command(flatten)]
    input: FunctionInput,
    /// Norm with respect to the conjugate φ*.
    #[arg(long)]
    conjugate: bool,
}

#[derive(Args)]
struct MaximalArgs {
    /// Φ-function JSON, inline or a file path; used for the norms of f and Mf.
    phi: String,
    #[command(flatten)]
    input: FunctionInput,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FunctionInput {
    /// Field JSON evaluated at grid cell centers (absolute value taken).
    #[arg(long)]
    f: Option<String>,
    /// Region JSON; the function is its indicator.
    #[arg(long)]
    indicator: Option<String>,
    /// Grid function in the binary format (carries its own grid).
    #[arg(long)]
    f_binary: Option<PathBuf>,
}

/// Failure classes mapped to exit codes 2 and 3.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(m) => Failure::Internal(m),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}

fn settings(g: &Global) -> RunSettings {
    RunSettings { resolution: g.resolution, truncation_radius: g.truncation_radius, seed: g.seed }
}

/// Inline JSON when the argument parses as JSON, otherwise a file path.
fn load<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = if serde_json::from_str::<serde_json::Value>(arg).is_ok() {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?
    };
    Ok(genorlicz::json::parse(&text)?)
}

fn load_phi(arg: &str) -> Result<PhiFunction, Failure> {
    let phi: PhiFunction = load(arg)?;
    phi.validate()?;
    Ok(phi)
}

fn need<T>(v: Option<T>, flag: &str, what: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{what} needs --{flag}")))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let s = settings(&cli.global);
    match &cli.command {
        Command::Check(a) => {
            let phi = load_phi(&a.phi)?;
            let kind = check_kind(a)?;
            let spec = ExperimentSpec {
                name: format!("check-{}", a.condition.to_possible_value().expect("named").get_name()),
                seed: None,
                phi,
                transforms: vec![],
                checks: vec![CheckRequest { kind, label: None, expect: Some(matches!(a.expect, Expect::Holds)) }],
                experiments: vec![],
                output: None,
            };
            emit(&cli.global, run_pipeline(&spec, &s)?, None)
        }
        Command::Transform(a) => {
            let phi = load_phi(&a.phi)?;
            let step = transform_step(a)?;
            let spec = ExperimentSpec {
                name: format!("transform-{}", a.op.to_possible_value().expect("named").get_name()),
                seed: None,
                phi,
                transforms: vec![step],
                checks: vec![],
                experiments: vec![],
                output: None,
            };
            emit(&cli.global, run_pipeline(&spec, &s)?, None)
        }
        Command::Norm(a) => {
            let phi = load_phi(&a.phi)?;
            let f = load_function(&a.input, &phi, &s)?;
            let mut b = Bundle::new("norm", s.clone(), phi.clone());
            if let Some((modular, luxemburg)) = b.stage("norm", || {
                let gp = if a.conjugate { GridPhi::conjugate_of(&phi, &f.shape)? } else { GridPhi::new(&phi, &f.shape)? };
                Ok((gp.modular(&f)?, gp.luxemburg(&f)?))
            }) {
                let label = if a.conjugate { "conjugate" } else { "phi" };
                b.experiments.push(Experiment::Norm { label: label.into(), modular, luxemburg });
            }
            emit(&cli.global, b.finish(), None)
        }
        Command::Maximal(a) => {
            let phi = load_phi(&a.phi)?;
            let f = load_function(&a.input, &phi, &s)?;
            let mut b = Bundle::new("maximal", s.clone(), phi.clone());
            if let Some(mf) = b.stage("maximal", || maximal(&f, &MaximalConfig::default_for(&f.shape))) {
                b.experiments.push(Experiment::Maximal {
                    label: "Mf".into(),
                    sup_f: f.max_value(),
                    sup_mf: mf.max_value(),
                    integral_f: f.integral(),
                    integral_mf: mf.integral(),
                });
                if let Some((nf, nmf, mod_mf)) = b.stage("norms", || {
                    let gp = GridPhi::new(&phi, &f.shape)?;
                    Ok((gp.luxemburg(&f)?, gp.luxemburg(&mf)?, gp.modular(&mf)?))
                }) {
                    b.experiments.push(Experiment::Norm { label: "f".into(), modular: Extended::ZERO, luxemburg: nf });
                    b.experiments.push(Experiment::Norm { label: "Mf".into(), modular: mod_mf, luxemburg: nmf });
                }
                b.grids.push(NamedGrid { name: "f".into(), function: f });
                b.grids.push(NamedGrid { name: "mf".into(), function: mf });
            }
            emit(&cli.global, b.finish(), None)
        }
        Command::Example { name } => {
            let names: Vec<&str> = if name == "all" { EXAMPLE_NAMES.to_vec() } else { vec![name.as_str()] };
            let mut worst = 0;
            for n in names {
                let b = run_example(n, &s)?;
                worst = worst.max(emit(&cli.global, b, None)?);
            }
            Ok(worst)
        }
        Command::Pipeline { spec } => {
            let parsed: ExperimentSpec = load(spec)?;
            let report_path = parsed.output.as_ref().and_then(|o| o.report.clone()).map(PathBuf::from);
            let csv_dir = parsed.output.as_ref().and_then(|o| o.csv_dir.clone()).map(PathBuf::from);
            let b = run_pipeline(&parsed, &s)?;
            let mut global = cli.global.clone();
            if let Some(dir) = csv_dir {
                global.out = dir;
                global.csv = true;
            }
            emit(&global, b, report_path)
        }
    }
}

fn interval(t_min: f64, t_max: &str) -> Result<TInterval, Failure> {
    let hi = match t_max {
        "inf" | "infinity" => f64::INFINITY,
        v => v.parse().map_err(|_| Failure::Usage(format!("--t-max {v:?} is not a number")))?,
    };
    let r = TInterval { lo: t_min, hi };
    r.validate()?;
    Ok(r)
}

fn check_kind(a: &CheckArgs) -> Result<CheckKind, Failure> {
    let weight = |h: &Option<String>| -> Result<WeightFunction, Failure> {
        h.as_deref().map_or(Ok(WeightFunction::Zero), load)
    };
    Ok(match a.condition {
        ConditionArg::A0 => CheckKind::A0,
        ConditionArg::A1 => CheckKind::A1,
        ConditionArg::A1Prime => CheckKind::A1Prime,
        ConditionArg::A2 => CheckKind::A2 {
            phi_inf: load::<PhiCurve>(need(a.phi_inf.as_deref(), "phi-inf", "A2")?)?,
            h: weight(&a.h)?,
            beta: need(a.beta, "beta", "A2")?,
            s: a.s,
        },
        ConditionArg::Ainc => CheckKind::AInc { p: need(a.p, "p", "aInc")?, range: interval(a.t_min, &a.t_max)? },
        ConditionArg::Adec => CheckKind::ADec { q: need(a.q, "q", "aDec")?, range: interval(a.t_min, &a.t_max)? },
        ConditionArg::Equiv => CheckKind::Equiv {
            other: Some(load_phi(need(a.other.as_deref(), "other", "equivalence")?)?),
            l: need(a.l, "l", "equivalence")?,
        },
        ConditionArg::WeakEquiv => CheckKind::WeakEquiv {
            other: Some(load_phi(need(a.other.as_deref(), "other", "weak equivalence")?)?),
            l: need(a.l, "l", "weak equivalence")?,
            h: weight(&a.h)?,
        },
    })
}

fn transform_step(a: &TransformArgs) -> Result<TransformStep, Failure> {
    Ok(match a.op {
        TransformOp::Thm47 => TransformStep::Thm47Construct {
            phi_inf: load(need(a.phi_inf.as_deref(), "phi-inf", "thm47")?)?,
            h: a.h.as_deref().map_or(Ok(WeightFunction::Zero), load)?,
            beta: need(a.beta, "beta", "thm47")?,
            s: a.s,
            t1: a.t1,
        },
        TransformOp::Glue => TransformStep::Thm31Glue {
            region: load::<Region>(need(a.region.as_deref(), "region", "glue")?)?,
            p: need(a.p, "p", "glue")?,
        },
        TransformOp::Asymptotes => TransformStep::Remark45Asymptotes { radii: a.radii.clone(), t_grid: None },
    })
}

fn load_function(input: &FunctionInput, phi: &PhiFunction, s: &RunSettings) -> Result<GridFunction, Failure> {
    if let Some(path) = &input.f_binary {
        let file = fs::File::open(path).map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
        let f = GridFunction::read_binary(std::io::BufReader::new(file))?;
        if f.shape.dim() != phi.dim() {
            return Err(Failure::Usage(format!("grid dimension {} differs from φ's {}", f.shape.dim(), phi.dim())));
        }
        return Ok(f);
    }
    let shape = default_grid(&phi.domain, s)?;
    if let Some(text) = &input.f {
        let field: Field = load(text)?;
        return Ok(GridFunction::from_fn(shape, |x| field.eval(x))?);
    }
    let region: Region = load(input.indicator.as_deref().expect("clap enforces one input"))?;
    Ok(GridFunction::indicator(shape, &region)?)
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Internal(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
}

/// Write the bundle (and CSV extracts when asked), print the verdict, and
/// return the exit code it maps to.
fn emit(g: &Global, b: Bundle, report_path: Option<PathBuf>) -> Result<u8, Failure> {
    let json = b.to_json();
    let path = report_path.unwrap_or_else(|| g.out.join(format!("{}.json", b.name)));
    write(&path, json.as_bytes())?;
    if g.csv {
        for grid in &b.grids {
            let mut buf = Vec::new();
            grid.function.write_csv(&mut buf)?;
            write(&g.out.join(format!("{}-{}.csv", b.name, grid.name)), &buf)?;
        }
    }
    // a closed pipe on stdout (e.g. `| head`) is not an error of the run
    let mut out = std::io::stdout().lock();
    if g.json {
        let _ = writeln!(out, "{json}");
    }
    let (word, code) = match &b.verdict {
        Verdict::Match => ("match", 0),
        Verdict::Mismatch { .. } => ("MISMATCH", 1),
        Verdict::Errored { .. } => ("ERRORED", 3),
    };
    let _ = writeln!(out, "{}: {word} ({} claims, {} reports) -> {}", b.name, b.claims.len(), b.reports.len(), path.display());
    for c in b.claims.iter().filter(|c| !c.matches) {
        let _ = writeln!(out, "  failed: {} [{}]", c.statement, c.evidence);
    }
    if let Verdict::Errored { stage, message } = &b.verdict {
        let _ = writeln!(out, "  errored in {stage}: {message}");
    }
    Ok(code)
}
