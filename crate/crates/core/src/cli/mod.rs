//! Command-line driver: verification suites, central charges and sweeps,
//! reported as JSON (and CSV for sweeps).
//!
//! Exit status is 0 when every check passes, 1 when any fails and 2 on a
//! usage error.

mod report;
mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{Check, Comparison, ConfigRecord, Criterion, Report, Summary, Verdict};
pub use suites::{
    algebra_suite, central_charge_check, cocycle_suite, lemma_suite, max_cocycle_defect,
    spectral_convergence, transgressed_charge, whitney_suite, RunConfig, ScaleArg, Tolerances,
    CONVERGENCE_START, DEFECT_FLOOR,
};

use crate::error::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "virasoro",
    version,
    about = "Verify the transgression of p̂₁ to the Virasoro extension"
)]
struct Cli {
    #[command(flatten)]
    options: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Options {
    /// Fourier order of projected flows.
    #[arg(long, global = true, default_value_t = crate::diffeo::DEFAULT_FOURIER_ORDER)]
    fourier_order: usize,
    /// Trapezoid nodes for circle integrals.
    #[arg(long, global = true, default_value_t = crate::cocycle::DEFAULT_QUADRATURE_POINTS)]
    quadrature_points: usize,
    /// Finite-difference step of the Lie cocycle extraction.
    #[arg(long, global = true, default_value_t = 1e-3)]
    fd_step: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override a named tolerance; repeatable.
    #[arg(long = "tolerance", global = true, value_name = "NAME=VALUE", value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
    /// Also write the JSON report here.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Leave timestamps and runtimes out of the report.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cocycle,
    Lemma,
    Algebra,
    Whitney,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParameter {
    /// Transgression scale; tabulates central charges.
    Lambda,
    /// Quadrature points; tabulates the cocycle defect.
    Resolution,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Central charge of the transgression at a scale, or of `p1hat`.
    CentralCharge {
        #[arg(allow_hyphen_values = true)]
        scale: String,
    },
    /// Tabulate a quantity across parameter values.
    Sweep {
        #[arg(value_enum)]
        parameter: SweepParameter,
        /// Comma-separated values.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        values: Vec<f64>,
        /// CSV output; defaults to the report path with a `.csv` extension.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

fn parse_tolerance(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let value = value
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad tolerance value `{value}`: {e}"))?;
    Ok((name.trim().to_string(), value))
}

fn config_record(command: String, cfg: &RunConfig) -> ConfigRecord {
    ConfigRecord {
        command,
        fourier_order: cfg.fourier_order,
        quadrature_points: cfg.quadrature_points,
        fd_step: cfg.fd_step,
        seed: cfg.seed,
        tolerances: cfg.tolerances.as_map().clone(),
    }
}

fn finish(command: String, cfg: &RunConfig, checks: Vec<Check>, start: Instant) -> Report {
    let timing = cfg.timestamps.then(|| {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        (now, start.elapsed().as_secs_f64() * 1e3)
    });
    Report::new(config_record(command, cfg), checks, timing)
}

pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let checks = match suite {
        Suite::Cocycle => cocycle_suite(cfg),
        Suite::Lemma => lemma_suite(cfg),
        Suite::Algebra => algebra_suite(cfg),
        Suite::Whitney => whitney_suite(cfg),
        Suite::All => {
            let mut all = cocycle_suite(cfg);
            all.extend(lemma_suite(cfg));
            all.extend(algebra_suite(cfg));
            all.extend(whitney_suite(cfg));
            all
        }
    };
    let name = suite
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    Ok(finish(format!("verify {name}"), cfg, checks, start))
}

pub fn cmd_central_charge(scale: ScaleArg, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let label = match scale {
        ScaleArg::P1Hat => "p1hat".to_string(),
        ScaleArg::Value(v) => v.to_string(),
    };
    let checks = vec![central_charge_check("central_charge", scale, cfg)];
    Ok(finish(
        format!("central-charge {label}"),
        cfg,
        checks,
        start,
    ))
}

/// A sweep report with its CSV table.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub report: Report,
    pub csv: String,
}

fn csv_number(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "NaN".into())
}

pub fn cmd_sweep(
    parameter: SweepParameter,
    values: &[f64],
    cfg: &RunConfig,
) -> Result<SweepOutput> {
    cfg.validate()?;
    if values.is_empty() {
        return Err(Error::Usage("sweep needs at least one value".into()));
    }
    let start = Instant::now();
    let joined = values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let (checks, csv) = match parameter {
        SweepParameter::Lambda => sweep_lambda(values, cfg)?,
        SweepParameter::Resolution => sweep_resolution(values, cfg)?,
    };
    let name = parameter
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    Ok(SweepOutput {
        report: finish(format!("sweep {name} {joined}"), cfg, checks, start),
        csv,
    })
}

fn sweep_lambda(values: &[f64], cfg: &RunConfig) -> Result<(Vec<Check>, String)> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Usage(format!("scales must be finite, got {v}")));
    }
    let mut checks = Vec::new();
    let mut csv = String::from("scale,central_charge,expected,passed\n");
    let mut slopes = Vec::new();
    for (i, &s) in values.iter().enumerate() {
        let scale = ScaleArg::Value(s);
        let check = central_charge_check(&format!("central_charge.{i:03}"), scale, cfg);
        csv.push_str(&format!(
            "{s},{},{},{}\n",
            csv_number(check.computed),
            scale.expected_charge(),
            check.passed
        ));
        if let (Some(c), true) = (check.computed, s != 0.0) {
            slopes.push(c / s);
        }
        checks.push(check);
    }
    if slopes.len() >= 2 {
        let tol = cfg.tolerances.get("central_charge");
        checks.push(Check::run(
            "linearity",
            "pipeline-linearity",
            Criterion::at_most(tol),
            cfg.timestamps,
            || {
                let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
                Ok(slopes
                    .iter()
                    .map(|k| ((k - mean) / mean).abs())
                    .fold(0.0, f64::max))
            },
        ));
    }
    Ok((checks, csv))
}

fn sweep_resolution(values: &[f64], cfg: &RunConfig) -> Result<(Vec<Check>, String)> {
    let ms = values
        .iter()
        .map(|&v| {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(Error::Usage(format!(
                    "quadrature points must be positive integers, got {v}"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let triples = suites::random_triples(cfg.seed, suites::COCYCLE_TRIPLES);
    let mut checks = Vec::new();
    let mut csv = String::from("quadrature_points,max_defect\n");
    let mut defects = Vec::new();
    for (i, &m) in ms.iter().enumerate() {
        let check = Check::run(
            format!("defect.{i:03}"),
            "group-cocycle-identity",
            Criterion::info(),
            cfg.timestamps,
            || max_cocycle_defect(&triples, m),
        );
        csv.push_str(&format!("{m},{}\n", csv_number(check.computed)));
        defects.push(check.computed);
        checks.push(check);
    }
    if ms.len() >= 2 {
        checks.push(Check::run(
            "monotone",
            "trapezoid-spectral-accuracy",
            Criterion::at_least(1.0),
            cfg.timestamps,
            || {
                let mut worst = f64::INFINITY;
                for (w, d) in ms.windows(2).zip(defects.windows(2)) {
                    let (Some(prev), Some(next)) = (d[0], d[1]) else {
                        return Err(Error::Numeric("a defect evaluation failed".into()));
                    };
                    if w[1] > w[0] && prev > DEFECT_FLOOR {
                        worst = worst.min(prev / next);
                    }
                }
                Ok(worst)
            },
        ));
    }
    Ok((checks, csv))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    let o = cli.options;
    let mut tolerances = Tolerances::default();
    for (name, value) in &o.tolerances {
        tolerances.set(name, *value)?;
    }
    let cfg = RunConfig {
        fourier_order: o.fourier_order,
        quadrature_points: o.quadrature_points,
        fd_step: o.fd_step,
        seed: o.seed,
        tolerances,
        timestamps: !o.no_timestamp,
    };
    let (report, csv) = match cli.command {
        Command::Verify { suite } => (cmd_verify(suite, &cfg)?, None),
        Command::CentralCharge { scale } => {
            (cmd_central_charge(ScaleArg::parse(&scale)?, &cfg)?, None)
        }
        Command::Sweep {
            parameter,
            values,
            csv,
        } => {
            let sweep = cmd_sweep(parameter, &values, &cfg)?;
            let path = csv.or_else(|| o.report.as_ref().map(|p| p.with_extension("csv")));
            (sweep.report, path.map(|p| (p, sweep.csv)))
        }
    };
    let json = report.to_json();
    if let Some(path) = &o.report {
        write_file(path, &json)?;
    }
    if let Some((path, table)) = csv {
        write_file(&path, &table)?;
    }
    out.write_all(json.as_bytes())
        .map_err(|e| Error::Usage(format!("cannot write report: {e}")))?;
    Ok(report.passed())
}

/// Parses `args` (program name first), runs the command, prints the JSON
/// report to `out` and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "virasoro: {e}");
            match e {
                Error::Usage(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            }
        }
    }
}
