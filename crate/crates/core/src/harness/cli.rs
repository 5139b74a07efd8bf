//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::Theorem;
use crate::preinvex::{self, library_function, library_map, GridSize, Interval};
use crate::specfun::{self, SpecFunError};

use super::config::{jobs_from_env, ConfigError, OutputFormat, SweepConfig};
use super::falsify::run_falsify;
use super::report::RunReport;
use super::sweep::{run_verify_identities, run_verify_theorems};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fracineq", version, about = "Verify fractional Hermite-Hadamard identities and bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a special function.
    Specfun {
        #[command(subcommand)]
        op: SpecfunOp,
    },
    /// Check both integral identities over the configured grid.
    Identities(RunArgs),
    /// Evaluate theorem bounds over the configured grid.
    Theorems {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated theorem list.
        #[arg(long, default_value = "T1,T2,T3,T4,T5,T6")]
        which: String,
    },
    /// Grid-certify λ-preinvexity of a library function or its derivative.
    Certify(CertifyArgs),
    /// Random search for oracle-bound violations.
    Falsify {
        #[command(flatten)]
        run: RunArgs,
        /// Overrides `falsify.trials` from the config
        #[arg(long)]
        trials: Option<u64>,
        /// Overrides `falsify.seed` from the config
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Convert a JSON report to CSV.
    Report {
        /// JSON report written by another subcommand
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum SpecfunOp {
    /// `gamma x`, `lgamma x`, `beta a b`, `incbeta x a b`, `hyp2f1 a b c z`
    Eval {
        name: String,
        #[arg(allow_negative_numbers = true)]
        args: Vec<f64>,
        /// Series tolerance for hyp2f1.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// TOML sweep configuration; the bundled default suite when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long = "fn")]
    function: String,
    #[arg(long, default_value = "identity")]
    map: String,
    #[arg(long)]
    lambda: f64,
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    /// Certify `|f^(order)|^power` instead of `f`.
    #[arg(long, default_value_t = 0)]
    order: u8,
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// `n_u,n_v,n_t`
    #[arg(long, default_value = "21,21,99")]
    grid: String,
    #[arg(long, default_value_t = preinvex::CERTIFICATION_TOL)]
    tolerance: f64,
}

/// Runs the CLI on `argv` (program name first). Returns the exit code.
pub fn cli_main<I, S>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let jobs = match jobs_from_env(|k| std::env::var(k).ok()) {
        Ok(j) => j,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    pool.install(|| dispatch(cli.command, out, err))
}

fn dispatch(cmd: Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32 {
    match cmd {
        Command::Specfun { op: SpecfunOp::Eval { name, args, tol } } => specfun_eval(&name, &args, tol, out, err),
        Command::Identities(run) => sweep_command(&run, out, err, |cfg| {
            Ok(run_verify_identities(cfg))
        }),
        Command::Theorems { run, which } => {
            let theorems = match Theorem::parse_list(&which) {
                Ok(t) => t,
                Err(e) => {
                    let _ = writeln!(err, "error: --which: {e}");
                    return EXIT_USAGE;
                }
            };
            sweep_command(&run, out, err, |cfg| {
                cfg.validate_for_theorems(&theorems)?;
                Ok(run_verify_theorems(cfg, &theorems))
            })
        }
        Command::Falsify { run, trials, seed } => sweep_command(&run, out, err, |cfg| {
            let trials = trials.unwrap_or(cfg.falsify.trials);
            let seed = seed.unwrap_or(cfg.falsify.seed);
            run_falsify(cfg, trials, seed)
        }),
        Command::Certify(args) => certify(&args, out, err),
        Command::Report { input, out: path } => convert_report(&input, path.as_deref(), out, err),
    }
}

fn load_config(path: Option<&Path>) -> Result<SweepConfig, String> {
    let mut cfg = match path {
        Some(p) => SweepConfig::from_path(p).map_err(|e| format!("config {}: {e}", p.display()))?,
        None => SweepConfig::default_suite(),
    };
    cfg.apply_env_overrides(|k| std::env::var(k).ok())
        .map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn sweep_command(
    run: &RunArgs,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
    body: impl FnOnce(&SweepConfig) -> Result<RunReport, ConfigError>,
) -> i32 {
    let cfg = match load_config(run.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let mut report = match body(&cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if run.timing {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    let format = match run.format {
        Some(FormatArg::Json) => OutputFormat::Json,
        Some(FormatArg::Csv) => OutputFormat::Csv,
        None => cfg.output.format,
    };
    let path = run.out.clone().or_else(|| cfg.output.path.clone().map(PathBuf::from));
    if let Err(e) = emit(&report, format, path.as_deref(), out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    let s = report.summary;
    let _ = writeln!(
        err,
        "{}: {} rows: {} pass, {} flag, {} fail, {} exploratory, {} error",
        report.command, s.total, s.pass, s.flag, s.fail, s.exploratory, s.error
    );
    if let Some(f) = &report.falsification {
        let _ = writeln!(
            err,
            "falsify: {} trials, {} certified evaluations, {} violations, {} exact-equality, {} exploratory",
            f.trials, f.certified, f.violations, f.exact_equality, f.exploratory
        );
    }
    report.exit_code()
}

fn emit(report: &RunReport, format: OutputFormat, path: Option<&Path>, out: &mut (dyn Write + Send)) -> Result<(), String> {
    let text = match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    }
    .map_err(|e| e.to_string())?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn specfun_eval(name: &str, args: &[f64], tol: f64, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32 {
    let arity = |n: usize| -> Result<(), String> {
        if args.len() == n {
            Ok(())
        } else {
            Err(format!("{name} takes {n} argument(s), got {}", args.len()))
        }
    };
    let result: Result<Result<f64, SpecFunError>, String> = match name {
        "gamma" => arity(1).map(|_| specfun::gamma(args[0])),
        "lgamma" | "log_gamma" => arity(1).map(|_| specfun::log_gamma(args[0])),
        "beta" => arity(2).map(|_| specfun::beta(args[0], args[1])),
        "incbeta" | "incomplete_beta" => {
            arity(3).map(|_| specfun::incomplete_beta(args[0], args[1], args[2]).map(|r| r.value))
        }
        "hyp2f1" | "2f1" => {
            arity(4).map(|_| specfun::gauss_2f1(args[0], args[1], args[2], args[3], tol).map(|r| r.value))
        }
        other => Err(format!(
            "unknown function '{other}' (gamma, lgamma, beta, incbeta, hyp2f1)"
        )),
    };
    match result {
        Err(usage) => {
            let _ = writeln!(err, "error: {usage}");
            EXIT_USAGE
        }
        Ok(Ok(v)) => {
            let _ = writeln!(out, "{v}");
            EXIT_OK
        }
        Ok(Err(e @ SpecFunError::Convergence { .. })) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FINDINGS
        }
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn parse_grid(s: &str) -> Result<GridSize, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("--grid '{s}': {e}"))?;
    match parts.as_slice() {
        [u, v, t] => Ok(GridSize::new(*u, *v, *t)),
        _ => Err(format!("--grid '{s}': expected n_u,n_v,n_t")),
    }
}

fn certify(args: &CertifyArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32 {
    let run = || -> Result<preinvex::CertificationReport, String> {
        let f = library_function(&args.function).map_err(|e| e.to_string())?;
        let map = library_map(&args.map).map_err(|e| e.to_string())?;
        let target = if args.order == 0 && args.power == 1.0 {
            f.clone()
        } else {
            f.derivative_power(args.order, args.power).map_err(|e| e.to_string())?
        };
        let domain = Interval::new(args.lo.unwrap_or(f.domain.lo), args.hi.unwrap_or(f.domain.hi));
        let grid = parse_grid(&args.grid)?;
        preinvex::certify_with_tolerance(&target, &map, args.lambda, domain, grid, args.tolerance)
            .map_err(|e| e.to_string())
    };
    match run() {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            let _ = writeln!(out, "{text}");
            if report.passed {
                EXIT_OK
            } else {
                EXIT_FINDINGS
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn convert_report(input: &Path, path: Option<&Path>, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32 {
    let text = match std::fs::read_to_string(input) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", input.display());
            return EXIT_USAGE;
        }
    };
    let report = match RunReport::from_json(&text) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", input.display());
            return EXIT_USAGE;
        }
    };
    match emit(&report, OutputFormat::Csv, path, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
