//! `exponentia`: rate curves, asymptote reports and self-verification for
//! error-exponent-constrained wideband signaling.
//!
//! Exit status is 0 on success, 1 when `verify` finds a failing criterion and
//! 2 for usage or runtime errors. `EXPONENTIA_THREADS` caps the worker pool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use exponentia::fading::{exponent_curve_infinite, fading_asymptotes, fading_rate_curve, FadingAsymptotes, FadingSpec};
use exponentia::output::{exponent_curve_csv, fading_curve_csv, rate_curve_csv, se_csv, to_json};
use exponentia::verify::{run_all, VerifyConfig};
use exponentia::wideband::{awgn_asymptotes, rate_curve, spectral_efficiency_from_curve, Asymptotes};
use exponentia::Quadrature;

use config::{Flags, RunConfig, AWGN_DEFAULTS, FADING_DEFAULTS};

#[derive(Debug, Parser)]
#[command(name = "exponentia", version, about = "Error-exponent-constrained rates of wideband signaling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Unit-noise complex AWGN channel.
    Awgn {
        #[command(subcommand)]
        command: AwgnCommand,
    },
    /// Coherent Rayleigh block-fading channel.
    Fading {
        #[command(subcommand)]
        command: FadingCommand,
    },
    /// Run the numerical acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum AwgnCommand {
    /// Rate against inverse bandwidth, with a JSON sidecar of fitted and
    /// closed-form limits.
    RateCurve {
        #[command(flatten)]
        flags: Flags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Spectral efficiency against Eb/N0.
    Se {
        #[command(flatten)]
        flags: Flags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed-form infinite-bandwidth rate, slope and ρ*.
    Asymptotes {
        #[command(flatten)]
        flags: Flags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum FadingCommand {
    /// Asymptote JSON, finite-W_c rate curve and infinite-bandwidth
    /// exponent curve, written into a directory.
    Report {
        #[command(flatten)]
        flags: Flags,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Rate against coherence bandwidth, with a JSON sidecar.
    RateCurve {
        #[command(flatten)]
        flags: Flags,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    flags: Flags,
    /// Print the machine-readable report instead of the table.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct AwgnSidecar {
    scheme: String,
    power: f64,
    z: f64,
    r0_fit: Option<f64>,
    slope_fit: Option<f64>,
    asymptotes: Asymptotes,
}

#[derive(Serialize)]
struct SeSidecar {
    scheme: String,
    power: f64,
    z: f64,
    limit_ebn0_db: Option<f64>,
    /// Eb/N0 of the unconstrained (z = 0) wideband limit.
    reference_ebn0_db: f64,
    skipped_zero_rate: usize,
}

#[derive(Serialize)]
struct FadingSidecar {
    scheme: String,
    power: f64,
    z: f64,
    t_c: f64,
    blocks: u32,
    r0_fit: Option<f64>,
    slope_fit: Option<f64>,
    saturated_samples: usize,
    asymptotes: FadingAsymptotes,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("EXPONENTIA_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .with_context(|| format!("EXPONENTIA_THREADS must be a positive integer, got {value:?}"))?;
    if n == 0 {
        bail!("EXPONENTIA_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the worker pool")?;
    Ok(())
}

/// Returns whether the command succeeded in the verification sense.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Awgn { command } => match command {
            AwgnCommand::RateCurve { flags, out } => awgn_rate_curve(&RunConfig::resolve(&flags, AWGN_DEFAULTS)?, &out)?,
            AwgnCommand::Se { flags, out } => awgn_se(&RunConfig::resolve(&flags, AWGN_DEFAULTS)?, &out)?,
            AwgnCommand::Asymptotes { flags, out } => {
                let cfg = RunConfig::resolve(&flags, AWGN_DEFAULTS)?;
                emit(out.as_deref(), &to_json(&awgn_asymptotes(cfg.power, cfg.z)?)?)?
            }
        },
        Command::Fading { command } => match command {
            FadingCommand::Report { flags, out_dir } => {
                fading_report(&RunConfig::resolve(&flags, FADING_DEFAULTS)?, &out_dir)?
            }
            FadingCommand::RateCurve { flags, out } => fading_curve(&RunConfig::resolve(&flags, FADING_DEFAULTS)?, &out)?,
        },
        Command::Verify(args) => return verify(args),
    }
    Ok(true)
}

fn quadrature(cfg: &RunConfig) -> Result<Quadrature> {
    Ok(Quadrature::new(cfg.quad_order, cfg.laguerre_order)?)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

fn inverse_bandwidths(cfg: &RunConfig) -> Vec<f64> {
    cfg.grid().into_iter().map(|b| 1.0 / b).collect()
}

fn awgn_rate_curve(cfg: &RunConfig, out: &Path) -> Result<()> {
    let scheme = cfg.signaling_scheme()?;
    let asymptotes = awgn_asymptotes(cfg.power, cfg.z)?;
    let curve = rate_curve(&scheme, cfg.power, cfg.z, &inverse_bandwidths(cfg), &quadrature(cfg)?)?;
    write(out, &rate_curve_csv(&curve))?;
    write(
        &sidecar_path(out),
        &to_json(&AwgnSidecar {
            scheme: scheme.name(),
            power: cfg.power,
            z: cfg.z,
            r0_fit: curve.r0_extrapolated,
            slope_fit: curve.slope_extrapolated,
            asymptotes,
        })?,
    )
}

fn awgn_se(cfg: &RunConfig, out: &Path) -> Result<()> {
    let scheme = cfg.signaling_scheme()?;
    let curve = rate_curve(&scheme, cfg.power, cfg.z, &inverse_bandwidths(cfg), &quadrature(cfg)?)?;
    let se = spectral_efficiency_from_curve(&curve, cfg.power);
    write(out, &se_csv(&se))?;
    write(
        &sidecar_path(out),
        &to_json(&SeSidecar {
            scheme: scheme.name(),
            power: cfg.power,
            z: cfg.z,
            limit_ebn0_db: se.limit_ebn0_db,
            reference_ebn0_db: se.reference_ebn0_db,
            skipped_zero_rate: se.skipped,
        })?,
    )
}

fn fading_spec(cfg: &RunConfig, grid: &[f64]) -> Result<FadingSpec> {
    let Some(&w_c) = grid.first() else {
        bail!("coherence-bandwidth grid is empty");
    };
    let spec = FadingSpec::new(cfg.power, cfg.tc, cfg.blocks, w_c, cfg.z)?;
    let z_star = spec.z_star();
    if !(cfg.z > 0.0 && cfg.z < z_star) {
        bail!(
            "z = {} is outside the regime 0 < z < z* = {z_star} where the rate is determined by the random-coding exponent",
            cfg.z
        );
    }
    Ok(spec)
}

fn fading_curve(cfg: &RunConfig, out: &Path) -> Result<()> {
    let grid = cfg.grid();
    let spec = fading_spec(cfg, &grid)?;
    let scheme = cfg.signaling_scheme()?;
    let curve = fading_rate_curve(&scheme, &spec, &grid, &quadrature(cfg)?)?;
    write(out, &fading_curve_csv(&curve))?;
    write(
        &sidecar_path(out),
        &to_json(&FadingSidecar {
            scheme: scheme.name(),
            power: cfg.power,
            z: cfg.z,
            t_c: cfg.tc,
            blocks: cfg.blocks,
            r0_fit: curve.r0_extrapolated,
            slope_fit: curve.slope_extrapolated,
            saturated_samples: curve.samples.iter().filter(|s| s.saturated).count(),
            asymptotes: fading_asymptotes(&spec)?,
        })?,
    )
}

fn fading_report(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let grid = cfg.grid();
    let spec = fading_spec(cfg, &grid)?;
    let asymptotes = fading_asymptotes(&spec)?;
    let curve = fading_rate_curve(&cfg.signaling_scheme()?, &spec, &grid, &quadrature(cfg)?)?;
    let exponents = exponent_curve_infinite(&spec, cfg.exponent_points)?;
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write(&out_dir.join("asymptotes.json"), &to_json(&asymptotes)?)?;
    write(&out_dir.join("rate_curve.csv"), &fading_curve_csv(&curve))?;
    write(&out_dir.join("exponent_curve.csv"), &exponent_curve_csv(&exponents))
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let cfg = RunConfig::resolve(&args.flags, AWGN_DEFAULTS)?;
    let config = VerifyConfig {
        hermite_order: cfg.quad_order,
        laguerre_order: cfg.laguerre_order,
        seed: cfg.seed,
    };
    let threads = rayon::current_num_threads().max(2);
    let report = run_all(config, threads)?;
    let json = report.to_json()?;
    if let Some(path) = &args.out {
        write(path, &json)?;
    }
    if args.json {
        print!("{json}");
    } else {
        print!("{}", report.render_table());
    }
    Ok(report.pass)
}
