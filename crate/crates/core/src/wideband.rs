//! Largest rate meeting an error-exponent constraint on the wideband AWGN
//! channel, as a function of inverse bandwidth `b = 1/B`.
//!
//! With `p = P/B` the energy per complex symbol and `r` the rate per symbol,
//! the constraint `E(R) ≥ Pz` in the random-coding regime is equivalent to
//!
//! ```text
//! r(p) = sup_{0<ρ≤1} (−pz + E_o(p, ρ)) / ρ,      R(b) = r(P·b) / b.
//! ```
//!
//! As `b → 0`, `R(b) → P(1−√z)²` with slope `−P²(1−√z)³/2` for
//! second-order optimal families (QPSK); BPSK reaches the same limit with
//! twice the slope.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::LN_2;

use crate::constellation::{Constellation, SignalingScheme};
use crate::error::{Error, Result};
use crate::extrapolate::fit_limit_and_slope;
use crate::gallager::eo;
use crate::optimize::{bisect_decreasing, maximize};
use crate::quadrature::Quadrature;

/// Tolerance of [`first_order_optimality_check`] on `lim E_o/p`.
pub const FIRST_ORDER_TOL: f64 = 1e-3;

/// Operating point of the scalar channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    pub power_p_total: f64,
    pub bandwidth_b: f64,
    pub z_normalized: f64,
}

impl ChannelParams {
    pub fn new(power: f64, bandwidth: f64, z: f64) -> Result<Self> {
        if !(power > 0.0) || !power.is_finite() {
            return Err(Error::Domain(format!("power must be positive, got {power}")));
        }
        if !(bandwidth >= 1.0) || !bandwidth.is_finite() {
            return Err(Error::Domain(format!("bandwidth must be ≥ 1, got {bandwidth}")));
        }
        validate_z(z)?;
        Ok(ChannelParams {
            power_p_total: power,
            bandwidth_b: bandwidth,
            z_normalized: z,
        })
    }

    pub fn inverse_bandwidth(&self) -> f64 {
        1.0 / self.bandwidth_b
    }

    /// `p = P/B`.
    pub fn per_symbol_power(&self) -> f64 {
        self.power_p_total / self.bandwidth_b
    }
}

/// The exponent constraint `E ≥ Pz` is only pinned down by the
/// random-coding exponent for `0 < z < 1/4`.
pub fn validate_z(z: f64) -> Result<()> {
    if z > 0.0 && z < 0.25 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "normalized exponent z must lie in (0, 1/4), got {z}"
        )))
    }
}

/// Maximal per-symbol rate and the optimizing `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolRate {
    pub rate: f64,
    pub rho_opt: f64,
}

/// `sup_{0<ρ≤1} (−pz + E_o(p, ρ))/ρ`, clamped at zero when the constraint
/// cannot be met at any positive rate.
pub fn rate_per_symbol(c: &Constellation, z: f64, quad: &Quadrature) -> Result<SymbolRate> {
    validate_z(z)?;
    let pz = c.power() * z;
    let best = maximize(
        |rho| {
            if rho == 0.0 {
                Ok(f64::NEG_INFINITY)
            } else {
                Ok((-pz + eo(c, rho, quad)?.value) / rho)
            }
        },
        0.0,
        1.0,
    )?;
    Ok(SymbolRate {
        rate: best.value.max(0.0),
        rho_opt: best.arg,
    })
}

/// The same rate from the root form: the `r` solving `E_r(r) = pz`, found by
/// bisection on `[0, p]` (`E_r(p) ≤ 0` by the `pρ/(1+ρ)` bound).
pub fn rate_per_symbol_root(c: &Constellation, z: f64, quad: &Quadrature) -> Result<f64> {
    validate_z(z)?;
    let pz = c.power() * z;
    // E_r(r) = sup_ρ −ρr + E_o(ρ); E_o values are shared across bisection
    // steps since the coarse ρ grid is the same for every r.
    let mut cache: HashMap<u64, f64> = HashMap::new();
    let mut gap = |r: f64| -> Result<f64> {
        let best = maximize(
            |rho| {
                let e = match cache.get(&rho.to_bits()) {
                    Some(&e) => e,
                    None => {
                        let e = eo(c, rho, quad)?.value;
                        cache.insert(rho.to_bits(), e);
                        e
                    }
                };
                Ok(-rho * r + e)
            },
            0.0,
            1.0,
        )?;
        Ok(best.value - pz)
    };
    if gap(0.0)? < 0.0 {
        return Ok(0.0);
    }
    bisect_decreasing(gap, 0.0, c.power(), 1e-15 * c.power().max(1e-300))
}

/// One point of a rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidebandSample {
    /// Inverse bandwidth `b = 1/B`.
    pub b: f64,
    pub rate_nats_per_sec: f64,
    pub rho_opt: f64,
}

/// Rates on a grid of inverse bandwidths with their `b → 0` extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidebandCurve {
    pub samples: Vec<WidebandSample>,
    /// Absent when the grid is too short or not geometric.
    pub r0_extrapolated: Option<f64>,
    pub slope_extrapolated: Option<f64>,
}

fn validate_descending_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Validation(format!("{what} grid is empty")));
    }
    if grid.iter().any(|b| !(*b > 0.0) || !b.is_finite()) {
        return Err(Error::Validation(format!("{what} grid must be strictly positive")));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Validation(format!("{what} grid must be strictly descending")));
    }
    Ok(())
}

/// `R(b) = r(P·b)/b` on each grid point, samples computed in parallel and
/// collected in grid order.
pub fn rate_curve(
    scheme: &SignalingScheme,
    power: f64,
    z: f64,
    b_grid: &[f64],
    quad: &Quadrature,
) -> Result<WidebandCurve> {
    validate_z(z)?;
    if !(power > 0.0) {
        return Err(Error::Domain(format!("power must be positive, got {power}")));
    }
    validate_descending_grid(b_grid, "inverse-bandwidth")?;
    let samples = b_grid
        .par_iter()
        .map(|&b| {
            let c = scheme.constellation(power * b)?;
            let r = rate_per_symbol(&c, z, quad)?;
            Ok(WidebandSample {
                b,
                rate_nats_per_sec: r.rate / b,
                rho_opt: r.rho_opt,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(f64, f64)> = samples.iter().map(|s| (s.b, s.rate_nats_per_sec)).collect();
    let fit = fit_limit_and_slope(&pairs).ok();
    Ok(WidebandCurve {
        samples,
        r0_extrapolated: fit.map(|f| f.limit),
        slope_extrapolated: fit.map(|f| f.slope),
    })
}

/// Closed-form wideband limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptotes {
    /// `P(1−√z)²`.
    pub r0: f64,
    /// `−P²(1−√z)³/2`.
    pub rdot0: f64,
    /// `√z/(1−√z)`.
    pub rho_star: f64,
}

pub fn awgn_asymptotes(power: f64, z: f64) -> Result<Asymptotes> {
    validate_z(z)?;
    if !(power > 0.0) {
        return Err(Error::Domain(format!("power must be positive, got {power}")));
    }
    let s = 1.0 - z.sqrt();
    Ok(Asymptotes {
        r0: power * s * s,
        rdot0: -power * power * s * s * s / 2.0,
        rho_star: z.sqrt() / s,
    })
}

/// One point of the spectral-efficiency / energy-per-bit trade-off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SePoint {
    pub ebn0_db: f64,
    pub se_bits_s_hz: f64,
    pub bandwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeCurve {
    pub points: Vec<SePoint>,
    /// Samples with zero rate (constraint unachievable), left out of `points`.
    pub skipped: usize,
    /// `Eb/N0` at the extrapolated `B → ∞` rate.
    pub limit_ebn0_db: Option<f64>,
    /// The unconstrained (`z → 0`) wideband limit `10·log10(ln 2)`.
    pub reference_ebn0_db: f64,
}

/// `Eb/N0` in dB for rate `R` nats/s at power `P` (`N0 = 1`).
pub fn ebn0_db(power: f64, rate_nats: f64) -> f64 {
    10.0 * (power * LN_2 / rate_nats).log10()
}

/// Converts a rate curve to `(Eb/N0, spectral efficiency)` pairs.
///
/// The sampled channel at `B` complex samples per second occupies `B` Hz, so
/// `SE = (R/ln 2)/B` bits/s/Hz and `Eb/N0 = P/(R/ln 2)`.
pub fn spectral_efficiency_from_curve(curve: &WidebandCurve, power: f64) -> SeCurve {
    let mut points = Vec::with_capacity(curve.samples.len());
    let mut skipped = 0;
    for s in &curve.samples {
        if !(s.rate_nats_per_sec > 0.0) {
            skipped += 1;
            continue;
        }
        let bandwidth = 1.0 / s.b;
        let rate_bits = s.rate_nats_per_sec / LN_2;
        points.push(SePoint {
            ebn0_db: ebn0_db(power, s.rate_nats_per_sec),
            se_bits_s_hz: rate_bits / bandwidth,
            bandwidth,
        });
    }
    SeCurve {
        points,
        skipped,
        limit_ebn0_db: curve.r0_extrapolated.filter(|r| *r > 0.0).map(|r| ebn0_db(power, r)),
        reference_ebn0_db: 10.0 * LN_2.log10(),
    }
}

pub fn spectral_efficiency_curve(
    scheme: &SignalingScheme,
    power: f64,
    z: f64,
    b_grid: &[f64],
    quad: &Quadrature,
) -> Result<SeCurve> {
    let curve = rate_curve(scheme, power, z, b_grid, quad)?;
    Ok(spectral_efficiency_from_curve(&curve, power))
}

/// Outcome of the small-`p` test `E_o(p, q_p, ρ*)/p → ρ*/(1+ρ*)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstOrderReport {
    pub rho_star: f64,
    /// `ρ*/(1+ρ*)`.
    pub target: f64,
    /// `(p, E_o(p, ρ*)/p)` per grid point.
    pub ratios: Vec<(f64, f64)>,
    pub limit: f64,
    pub symmetric: bool,
    pub pass: bool,
}

/// Estimates `lim_{p→0} E_o(p, q_p, ρ*)/p` on a descending power grid
/// (Richardson when the grid is geometric, finest sample otherwise).
pub fn first_order_optimality_check(
    scheme: &SignalingScheme,
    z: f64,
    p_grid: &[f64],
    quad: &Quadrature,
) -> Result<FirstOrderReport> {
    validate_z(z)?;
    validate_descending_grid(p_grid, "power")?;
    let finest = *p_grid.last().expect("nonempty grid");
    if finest > 1e-3 {
        return Err(Error::Validation(format!(
            "power grid must reach p ≤ 1e-3, finest is {finest}"
        )));
    }
    let rho_star = z.sqrt() / (1.0 - z.sqrt());
    let ratios = p_grid
        .par_iter()
        .map(|&p| {
            let c = scheme.constellation(p)?;
            Ok((p, eo(&c, rho_star, quad)?.value / p))
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = fit_limit_and_slope(&ratios)
        .map(|f| f.limit)
        .unwrap_or(ratios.last().expect("nonempty").1);
    let target = rho_star / (1.0 + rho_star);
    let symmetric = scheme.constellation(finest)?.is_symmetric(1e-12);
    Ok(FirstOrderReport {
        rho_star,
        target,
        ratios,
        limit,
        symmetric,
        pass: (limit - target).abs() <= FIRST_ORDER_TOL,
    })
}
