//! Command-line front end: one JSON report on stdout, a short summary on
//! stderr, and an exit code that mirrors the report's verdict.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use harnack_core::harnack::{domination_constant_with_cap, INFEASIBILITY_CAP};
use harnack_core::{
    block_decompose, build_shift, check_scalar_relations, classify_with, numerical_radius, operator_norm,
    oracle::check_all_identities, rho_kernel, rho_radius, spectral_radius, Complex64, ComplexSquareMatrix, Error,
    GridSpec, NullVectorParams,
};
use serde::Serialize;
use serde_json::{json, Value};

pub mod verify;

pub use verify::{verify_theorem, VerifyOptions, VerifyReport};

/// Default tolerance of pass/fail decisions, overridden by `HARNACK_DEFAULT_TOL`.
pub const DEFAULT_TOL: f64 = 1e-8;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "harnack",
    version,
    about = "Harnack-part verification toolkit for ρ-contractions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Interior radii, comma separated, each in [0, 1).
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Interior angles per radius.
    #[arg(long)]
    pub angles: Option<usize>,
    /// Sample points on the unit circle.
    #[arg(long)]
    pub boundary_angles: Option<usize>,
}

impl GridArgs {
    fn resolve(&self, base: GridSpec) -> Result<GridSpec, Error> {
        GridSpec::new(
            self.radii.clone().unwrap_or(base.radii),
            self.angles.unwrap_or(base.angles),
            self.boundary_angles.unwrap_or(base.boundary_angles),
        )
    }
}

#[derive(Debug, Clone, Args)]
pub struct TolArg {
    /// Numerical tolerance of the verdicts.
    #[arg(long, env = "HARNACK_DEFAULT_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the truncated shift as Matrix JSON.
    Shift {
        #[arg(long)]
        dim: usize,
        /// Use the weight that puts the numerical radius at one.
        #[arg(long)]
        normalized: bool,
    },
    /// ρ-numerical radius with the norm, numerical and spectral radii.
    Radius {
        matrix: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Evaluate the ρ-kernel at one point.
    Kernel {
        matrix: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Domination certificate for T1 ≺ T0.
    Dominate {
        t1: PathBuf,
        t0: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[arg(long, default_value_t = INFEASIBILITY_CAP)]
        cap: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Mutual domination of T1 and T0.
    Equiv {
        t1: PathBuf,
        t0: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[arg(long, default_value_t = INFEASIBILITY_CAP)]
        cap: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Membership conditions and family of a 5×5 matrix.
    Classify {
        matrix: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Run the classification pipeline on the known solution families.
    VerifyTheorem {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5))]
        dim: u32,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        theta_samples: u32,
        /// Check a single angle instead of the uniform samples.
        #[arg(long, conflicts_with = "theta_samples")]
        theta: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        rho: f64,
        #[arg(long, default_value_t = INFEASIBILITY_CAP)]
        cap: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tol: TolArg,
    },
    /// Polynomial identities and scalar relations of a 5×5 block form.
    Oracle { matrix: PathBuf },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("real part `{re}`: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("imaginary part `{im}`: {e}"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err("z must be finite".into());
    }
    Ok(Complex64::new(re, im))
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs the verb.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_PASS,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((report, summary)) => {
            let verdict = report.get("verdict").and_then(Value::as_bool).unwrap_or(true);
            Outcome {
                code: if verdict { EXIT_PASS } else { EXIT_FAIL },
                stdout: render(&report),
                stderr: summary + "\n",
            }
        }
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stdout: render(&json!({ "verdict": false, "error": e.to_string() })),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports are plain JSON values");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialise")
}

fn read_matrix(path: &Path) -> Result<ComplexSquareMatrix, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    ComplexSquareMatrix::from_json_str(&text).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn check_tol(tol: f64) -> Result<f64, Error> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Error::Input(format!(
            "tolerance must be positive and finite, got {tol}"
        )))
    }
}

fn check_rho(rho: f64) -> Result<f64, Error> {
    if rho > 0.0 && rho.is_finite() {
        Ok(rho)
    } else {
        Err(Error::Input(format!("rho must be positive and finite, got {rho}")))
    }
}

type Executed = (Value, String);

fn execute(cmd: &Command) -> Result<Executed, Error> {
    match cmd {
        Command::Shift { dim, normalized } => {
            let s = build_shift(*dim, *normalized)?;
            Ok((to_value(&s), format!("shift: {dim}x{dim}, weight {}", s.get(0, 1).re)))
        }
        Command::Radius { matrix, rho, grid, tol } => {
            let t = read_matrix(matrix)?;
            let rho = check_rho(*rho)?;
            let grid = grid.resolve(GridSpec::radius_default())?;
            let w = rho_radius(&t, rho, &grid, check_tol(tol.tol)?)?;
            let report = json!({
                "verdict": true,
                "rho": rho,
                "rho_radius": to_value(&w),
                "operator_norm": operator_norm(&t).value,
                "numerical_radius": numerical_radius(&t, 720)?.value,
                "spectral_radius": spectral_radius(&t).value,
                "grid": to_value(&grid),
            });
            Ok((report, format!("radius: w_{rho} = {:.10}", w.value)))
        }
        Command::Kernel { matrix, z, rho, tol } => {
            let t = read_matrix(matrix)?;
            let tol = check_tol(tol.tol)?;
            let k = rho_kernel(&t, *z, check_rho(*rho)?)?;
            let psd = k.min_eigenvalue >= -tol;
            let report = json!({
                "verdict": psd,
                "psd": psd,
                "kernel": to_value(&k),
            });
            Ok((
                report,
                format!(
                    "kernel: min eigenvalue {:.3e} ({})",
                    k.min_eigenvalue,
                    word(psd, "psd", "indefinite")
                ),
            ))
        }
        Command::Dominate {
            t1,
            t0,
            rho,
            cap,
            grid,
            tol,
        } => {
            let (a, b) = (read_matrix(t1)?, read_matrix(t0)?);
            let grid = grid.resolve(GridSpec::harnack_default())?;
            let cert = domination_constant_with_cap(&a, &b, check_rho(*rho)?, &grid, check_tol(tol.tol)?, *cap)?;
            let summary = match cert.c {
                Some(c) => format!("dominate: feasible, c = {c:.10}"),
                None => "dominate: infeasible".to_string(),
            };
            let mut report = json!({ "verdict": cert.feasible });
            merge(&mut report, to_value(&cert));
            Ok((report, summary))
        }
        Command::Equiv {
            t1,
            t0,
            rho,
            cap,
            grid,
            tol,
        } => {
            let (a, b) = (read_matrix(t1)?, read_matrix(t0)?);
            let grid = grid.resolve(GridSpec::harnack_default())?;
            let (rho, tol) = (check_rho(*rho)?, check_tol(tol.tol)?);
            let fwd = domination_constant_with_cap(&a, &b, rho, &grid, tol, *cap)?;
            let bwd = domination_constant_with_cap(&b, &a, rho, &grid, tol, *cap)?;
            let eq = fwd.feasible && bwd.feasible;
            let summary = format!(
                "equiv: {} (T1 ≺ T0 {}, T0 ≺ T1 {})",
                word(eq, "equivalent", "not equivalent"),
                word(fwd.feasible, "feasible", "infeasible"),
                word(bwd.feasible, "feasible", "infeasible"),
            );
            let report = json!({
                "verdict": eq,
                "equivalent": eq,
                "forward": to_value(&fwd),
                "backward": to_value(&bwd),
            });
            Ok((report, summary))
        }
        Command::Classify { matrix, grid, tol } => {
            let t = read_matrix(matrix)?;
            let grid = grid.resolve(GridSpec::harnack_default())?;
            let (tag, conditions) = classify_with(&t, harnack_core::shift5::CLASSIFY_TOL, &grid, check_tol(tol.tol)?)?;
            let member = tag.family != harnack_core::Family::None;
            let mut report = json!({ "verdict": member });
            merge(&mut report, to_value(&tag));
            report["conditions"] = to_value(&conditions);
            let failing: Vec<String> = conditions
                .failing()
                .iter()
                .map(|id| to_value(id).as_str().unwrap_or("").to_string())
                .collect();
            let summary = if failing.is_empty() {
                format!("classify: {}", tag.family.name())
            } else {
                format!("classify: {} (failing: {})", tag.family.name(), failing.join(", "))
            };
            Ok((report, summary))
        }
        Command::VerifyTheorem {
            dim,
            theta_samples,
            theta,
            rho,
            cap,
            grid,
            tol,
        } => {
            let opts = VerifyOptions {
                rho: check_rho(*rho)?,
                cap: *cap,
                tol: check_tol(tol.tol)?,
                grid: grid.resolve(GridSpec::harnack_default())?,
                thetas: match theta {
                    Some(t) => vec![*t],
                    None => verify::uniform_thetas(*theta_samples as usize),
                },
            };
            let report = verify_theorem(*dim as usize, &opts)?;
            let summary = format!(
                "verify-theorem: dim {dim}, {} passed, {} failed",
                report.passed, report.failed
            );
            Ok((to_value(&report), summary))
        }
        Command::Oracle { matrix } => {
            let t = read_matrix(matrix)?;
            let blocks = block_decompose(&t)?;
            let params = NullVectorParams::shift5();
            let identities = check_all_identities(&blocks, &params)?;
            let relations = check_scalar_relations(&blocks, &params);
            let ok = identities.iter().all(|c| c.pass) && relations.pass();
            let worst = identities.iter().map(|c| c.max_residual).fold(0.0, f64::max);
            let report = json!({
                "verdict": ok,
                "lambda": [blocks.r.trace().re, blocks.r.trace().im],
                "identities": to_value(&identities),
                "scalar_relations": to_value(&relations),
            });
            Ok((
                report,
                format!(
                    "oracle: {} (worst identity residual {worst:.3e})",
                    word(ok, "pass", "fail")
                ),
            ))
        }
    }
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

fn word(flag: bool, yes: &'static str, no: &'static str) -> &'static str {
    if flag {
        yes
    } else {
        no
    }
}
