//! Error exponents and exponent-constrained rates on the coherent Rayleigh
//! doubly-block-fading channel.
//!
//! The channel is split into `B` independent blocks of power `P/B`. Inside a
//! block, fading is constant over tiles of `T_c` seconds by `W_c` Hz, each
//! tile carrying `D = W_c·T_c` complex symbols. With `p = P/(B·W_c)` and
//! `t = |H|² ~ Exp(1)`,
//!
//! ```text
//! E_o(ρ, W_c) = (B/T_c) · (−ln E_t[exp(−D · E_o^NF(p·t, ρ))])
//!            → (B/T_c) · ln(1 + ρPT_c/(B(1+ρ)))      as W_c → ∞.
//! ```
//!
//! Exponents `z` here are per second and not normalized by `P`.

use rayon::prelude::*;
use serde::Serialize;

use crate::constellation::{Constellation, SignalingScheme};
use crate::error::{Error, Result};
use crate::extrapolate::{fit_limit_and_slope, LimitSlope};
use crate::gallager::{eo_fixed_beta, EQUAL_ENERGY_TOL};
use crate::optimize::maximize;
use crate::quadrature::Quadrature;

/// Parameters of the block-fading channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingSpec {
    pub power: f64,
    pub t_c: f64,
    pub blocks: u32,
    pub w_c: f64,
    /// Per-second exponent constraint.
    pub z: f64,
}

impl FadingSpec {
    pub fn new(power: f64, t_c: f64, blocks: u32, w_c: f64, z: f64) -> Result<Self> {
        for (name, v) in [("power", power), ("T_c", t_c), ("W_c", w_c)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if blocks == 0 {
            return Err(Error::Domain("blocks must be at least 1".into()));
        }
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::Domain(format!("z must be nonnegative, got {z}")));
        }
        let spec = FadingSpec { power, t_c, blocks, w_c, z };
        if spec.d() < 1.0 {
            return Err(Error::Domain(format!(
                "coherence dimension W_c·T_c must be ≥ 1, got {}",
                spec.d()
            )));
        }
        Ok(spec)
    }

    /// Same channel at a different coherence bandwidth.
    pub fn with_w_c(&self, w_c: f64) -> Result<Self> {
        FadingSpec::new(self.power, self.t_c, self.blocks, w_c, self.z)
    }

    /// Coherence dimension `D = W_c·T_c`.
    pub fn d(&self) -> f64 {
        self.w_c * self.t_c
    }

    fn b(&self) -> f64 {
        f64::from(self.blocks)
    }

    pub fn per_block_energy(&self) -> f64 {
        self.power * self.t_c / self.b()
    }

    /// `p = P/(B·W_c)`.
    pub fn per_symbol_power(&self) -> f64 {
        self.power / (self.b() * self.w_c)
    }

    /// `E_o` in the `W_c → ∞` limit: `(B/T_c)·ln(1 + ρPT_c/(B(1+ρ)))`.
    pub fn eo_limit(&self, rho: f64) -> f64 {
        self.b() / self.t_c * (rho * self.per_block_energy() / (1.0 + rho)).ln_1p()
    }

    /// Coefficient `c(ρ)` in `E_o(W_c) ≈ E_o(∞) + c(ρ)/W_c` for QPSK:
    /// `−ρP²/(B(1+ρ)(1+ρ+ρPT_c/B)²)`.
    pub fn eo_second_order(&self, rho: f64) -> f64 {
        let a = 1.0 + rho + rho * self.per_block_energy();
        -rho * self.power * self.power / (self.b() * (1.0 + rho) * a * a)
    }

    /// Largest exponent for which the rate is fixed by the `ρ ≤ 1` branch:
    /// `(B/T_c)ln(1+PT_c/(2B)) − P/(4+2PT_c/B)`.
    pub fn z_star(&self) -> f64 {
        self.eo_limit(1.0) - self.r_crit()
    }

    /// `P/(4+2PT_c/B)`.
    pub fn r_crit(&self) -> f64 {
        self.power / (4.0 + 2.0 * self.per_block_energy())
    }
}

/// `E_o` of an equal-energy alphabet used i.i.d. over every dimension of a
/// fading block. `c` must sit at the per-symbol power `P/(B·W_c)`.
pub fn eo_fading_iid(c: &Constellation, spec: &FadingSpec, rho: f64, quad: &Quadrature) -> Result<f64> {
    if !c.is_equal_energy(EQUAL_ENERGY_TOL) {
        return Err(Error::Unsupported(
            "fading exponents need an equal-energy alphabet".into(),
        ));
    }
    let p = spec.per_symbol_power();
    if (c.power() - p).abs() > 1e-12 * p.max(1.0) {
        return Err(Error::Validation(format!(
            "constellation power {} differs from P/(B·W_c) = {p}",
            c.power()
        )));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho must lie in [0, 1], got {rho}")));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let d = spec.d();
    let rule = &quad.laguerre;
    let mut expectation = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w == 0.0 {
            continue;
        }
        let e = eo_fixed_beta(&c.scaled(t.sqrt()), rho, 0.0, quad)?;
        let term = w * (-d * e).exp();
        if !term.is_finite() {
            return Err(Error::Integration { re: t, im: 0.0, value: term });
        }
        expectation += term;
    }
    Ok((spec.b() / spec.t_c * -expectation.ln()).max(0.0))
}

/// Rate meeting the exponent target, with its optimizing `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingRate {
    pub rate: f64,
    pub rho_opt: f64,
    /// The optimizer sits on the `ρ = 1` boundary.
    pub saturated: bool,
}

fn check_regime(spec: &FadingSpec) -> Result<()> {
    let z_star = spec.z_star();
    if !(spec.z > 0.0) || spec.z >= z_star {
        return Err(Error::Domain(format!(
            "exponent target z = {} is outside the random-coding regime (0, z* = {z_star})",
            spec.z
        )));
    }
    Ok(())
}

/// `sup_{ρ ∈ [z/P, 1]} (−z + E_o(ρ, W_c))/ρ`.
pub fn fading_rate(scheme: &SignalingScheme, spec: &FadingSpec, quad: &Quadrature) -> Result<FadingRate> {
    check_regime(spec)?;
    let c = scheme.constellation(spec.per_symbol_power())?;
    let lo = (spec.z / spec.power).min(1.0);
    let best = maximize(|rho| Ok((-spec.z + eo_fading_iid(&c, spec, rho, quad)?) / rho), lo, 1.0)?;
    Ok(FadingRate {
        rate: best.value.max(0.0),
        rho_opt: best.arg,
        saturated: best.arg >= 1.0 - 1e-6,
    })
}

/// One point of a finite-`W_c` rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingSample {
    pub w_c: f64,
    pub rate_nats_per_sec: f64,
    pub rho_opt: f64,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FadingCurve {
    pub samples: Vec<FadingSample>,
    pub r0_extrapolated: Option<f64>,
    pub slope_extrapolated: Option<f64>,
}

/// Rates over an ascending grid of coherence bandwidths.
pub fn fading_rate_curve(
    scheme: &SignalingScheme,
    spec: &FadingSpec,
    wc_grid: &[f64],
    quad: &Quadrature,
) -> Result<FadingCurve> {
    if wc_grid.is_empty() {
        return Err(Error::Validation("coherence-bandwidth grid is empty".into()));
    }
    if wc_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation("coherence-bandwidth grid must be strictly ascending".into()));
    }
    check_regime(spec)?;
    let samples = wc_grid
        .par_iter()
        .map(|&w_c| {
            let s = spec.with_w_c(w_c)?;
            let r = fading_rate(scheme, &s, quad)?;
            Ok(FadingSample {
                w_c,
                rate_nats_per_sec: r.rate,
                rho_opt: r.rho_opt,
                saturated: r.saturated,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fading_slope_fit(
        &samples
            .iter()
            .map(|s| (1.0 / s.w_c, s.rate_nats_per_sec))
            .collect::<Vec<_>>(),
    )
    .ok();
    Ok(FadingCurve {
        samples,
        r0_extrapolated: fit.map(|f| f.limit),
        slope_extrapolated: fit.map(|f| f.slope),
    })
}

/// Limit and slope at `1/W_c → 0` from `(1/W_c, R)` samples, finest last.
pub fn fading_slope_fit(samples: &[(f64, f64)]) -> Result<LimitSlope> {
    fit_limit_and_slope(samples)
}

/// Closed-form `W_c → ∞` quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingAsymptotes {
    pub z_star: f64,
    pub r0: f64,
    pub rdot0: f64,
    pub rho_star: f64,
    pub r_crit: f64,
    pub c_infinity: f64,
}

/// `R(0)` maximizes `(−z + E_o(∞, ρ))/ρ`; the slope is
/// `−P²/(B(1+ρ*)(1+ρ*+ρ*PT_c/B)²)` evaluated at that maximizer.
pub fn fading_asymptotes(spec: &FadingSpec) -> Result<FadingAsymptotes> {
    let z = spec.z;
    let best = maximize(
        |rho| {
            Ok(if rho > 0.0 {
                (-z + spec.eo_limit(rho)) / rho
            } else if z > 0.0 {
                f64::NEG_INFINITY
            } else {
                spec.power
            })
        },
        0.0,
        1.0,
    )?;
    let rho_star = best.arg;
    let a = 1.0 + rho_star + rho_star * spec.per_block_energy();
    Ok(FadingAsymptotes {
        z_star: spec.z_star(),
        r0: best.value.max(0.0),
        rdot0: -spec.power * spec.power / (spec.b() * (1.0 + rho_star) * a * a),
        rho_star,
        r_crit: spec.r_crit(),
        c_infinity: spec.power,
    })
}

/// `B·W_c·E_t[ln(1 + t·P/(B·W_c))]` nats/s.
pub fn ergodic_capacity(spec: &FadingSpec, quad: &Quadrature) -> Result<f64> {
    let n = spec.b() * spec.w_c;
    let snr = spec.power / n;
    Ok(n * quad.expect_unit_exponential(|t| (t * snr).ln_1p())?)
}

/// A point of the infinite-bandwidth exponent curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPoint {
    pub rate: f64,
    pub exponent: f64,
    pub rho_opt: f64,
}

/// `E(R) = sup_{0≤ρ≤1} −ρR + E_o(∞, ρ)` for `W_c → ∞`.
pub fn exponent_infinite(spec: &FadingSpec, rate: f64) -> Result<ExponentPoint> {
    if !(rate >= 0.0) {
        return Err(Error::Domain(format!("rate must be nonnegative, got {rate}")));
    }
    let best = maximize(|rho| Ok(-rho * rate + spec.eo_limit(rho)), 0.0, 1.0)?;
    Ok(ExponentPoint {
        rate,
        exponent: best.value.max(0.0),
        rho_opt: best.arg,
    })
}

/// `E(R)` on `points` evenly spaced rates from `r_crit` to `C∞ = P`.
pub fn exponent_curve_infinite(spec: &FadingSpec, points: usize) -> Result<Vec<ExponentPoint>> {
    if points < 2 {
        return Err(Error::Validation("exponent curve needs at least 2 points".into()));
    }
    let lo = spec.r_crit();
    let hi = spec.power;
    (0..points)
        .map(|i| {
            let rate = if i + 1 == points {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (points - 1) as f64
            };
            exponent_infinite(spec, rate)
        })
        .collect()
}
