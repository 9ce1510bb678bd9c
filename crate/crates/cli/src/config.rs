//! Run configuration: command-line flags layered over an optional JSON file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Deserialize;

use exponentia::{Constellation, SchemeKind, SignalingScheme};

/// Flags shared by every computing subcommand. Anything left unset falls back
/// to the `--config` file, then to the command's default.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON file with default values for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `bpsk`, `qpsk`, or a path to a constellation JSON file.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Total power P (joules/s).
    #[arg(long)]
    pub power: Option<f64>,
    /// Exponent constraint: normalized for AWGN, per second for fading.
    #[arg(long)]
    pub z: Option<f64>,
    /// Coherence time T_c (s).
    #[arg(long)]
    pub tc: Option<f64>,
    /// Number of independent blocks B.
    #[arg(long)]
    pub blocks: Option<u32>,
    /// First grid value (bandwidth B for AWGN, W_c for fading).
    #[arg(long)]
    pub grid_start: Option<f64>,
    /// Last grid value, inclusive.
    #[arg(long)]
    pub grid_stop: Option<f64>,
    /// Ratio between consecutive grid values.
    #[arg(long)]
    pub grid_ratio: Option<f64>,
    /// Gauss–Hermite order per axis.
    #[arg(long)]
    pub quad_order: Option<usize>,
    /// Gauss–Laguerre order for fading expectations.
    #[arg(long)]
    pub laguerre_order: Option<usize>,
    /// Seed for the Monte Carlo oracle.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points on the infinite-bandwidth exponent curve.
    #[arg(long)]
    pub exponent_points: Option<usize>,
}

/// Same fields as [`Flags`], read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scheme: Option<String>,
    pub power: Option<f64>,
    pub z: Option<f64>,
    pub tc: Option<f64>,
    pub blocks: Option<u32>,
    pub grid_start: Option<f64>,
    pub grid_stop: Option<f64>,
    pub grid_ratio: Option<f64>,
    pub quad_order: Option<usize>,
    pub laguerre_order: Option<usize>,
    pub seed: Option<u64>,
    pub exponent_points: Option<usize>,
}

/// Per-command defaults.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub z: f64,
    pub grid_start: f64,
    pub grid_stop: f64,
}

pub const AWGN_DEFAULTS: Defaults = Defaults {
    z: 0.1,
    grid_start: 64.0,
    grid_stop: 16384.0,
};

pub const FADING_DEFAULTS: Defaults = Defaults {
    z: 0.05,
    grid_start: 64.0,
    grid_stop: 1024.0,
};

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scheme: String,
    pub power: f64,
    pub z: f64,
    pub tc: f64,
    pub blocks: u32,
    pub grid_start: f64,
    pub grid_stop: f64,
    pub grid_ratio: f64,
    pub quad_order: usize,
    pub laguerre_order: usize,
    pub seed: u64,
    pub exponent_points: usize,
}

impl RunConfig {
    pub fn resolve(flags: &Flags, defaults: Defaults) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str::<FileConfig>(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let cfg = RunConfig {
            scheme: flags.scheme.clone().or(file.scheme).unwrap_or_else(|| "qpsk".into()),
            power: flags.power.or(file.power).unwrap_or(1.0),
            z: flags.z.or(file.z).unwrap_or(defaults.z),
            tc: flags.tc.or(file.tc).unwrap_or(1.0),
            blocks: flags.blocks.or(file.blocks).unwrap_or(1),
            grid_start: flags.grid_start.or(file.grid_start).unwrap_or(defaults.grid_start),
            grid_stop: flags.grid_stop.or(file.grid_stop).unwrap_or(defaults.grid_stop),
            grid_ratio: flags.grid_ratio.or(file.grid_ratio).unwrap_or(2.0),
            quad_order: flags
                .quad_order
                .or(file.quad_order)
                .unwrap_or(exponentia::quadrature::DEFAULT_HERMITE_ORDER),
            laguerre_order: flags
                .laguerre_order
                .or(file.laguerre_order)
                .unwrap_or(exponentia::quadrature::DEFAULT_LAGUERRE_ORDER),
            seed: flags.seed.or(file.seed).unwrap_or(1),
            exponent_points: flags.exponent_points.or(file.exponent_points).unwrap_or(101),
        };
        for (name, v) in [("power", cfg.power), ("tc", cfg.tc)] {
            if !(v > 0.0) || !v.is_finite() {
                bail!("--{name} must be positive, got {v}");
            }
        }
        if !(cfg.grid_ratio > 1.0) || !cfg.grid_ratio.is_finite() {
            bail!("--grid-ratio must exceed 1, got {}", cfg.grid_ratio);
        }
        if !(cfg.grid_start > 0.0) {
            bail!("--grid-start must be positive, got {}", cfg.grid_start);
        }
        Ok(cfg)
    }

    /// Geometric grid `start·ratio^k ≤ stop`, ascending. Empty when
    /// `start > stop`.
    pub fn grid(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0;
        loop {
            let v = self.grid_start * self.grid_ratio.powi(k);
            if v > self.grid_stop * (1.0 + 1e-12) {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }

    pub fn signaling_scheme(&self) -> Result<SignalingScheme> {
        Ok(match self.scheme.as_str() {
            "bpsk" => SignalingScheme::bpsk(),
            "qpsk" => SignalingScheme::qpsk(),
            path => SignalingScheme::new(SchemeKind::Scaled(load_constellation(Path::new(path))?)),
        })
    }
}

fn load_constellation(path: &Path) -> Result<Constellation> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("scheme is not bpsk/qpsk and {} is not readable", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing constellation {}", path.display()))
}
