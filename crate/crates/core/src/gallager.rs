//! Gallager's `E_o` function and the exponents built on it, for a finite
//! constellation on the scalar complex AWGN channel `y = x + w`,
//! `w ~ CN(0, 1)`.
//!
//! With `f_w` the noise density, the tilted output measure is
//!
//! ```text
//! α(y) = Σ_k q_k e^{β(|x_k|² − p)} f_w(y − x_k)^{1/(1+ρ)}
//!      = f_w(y)^{1/(1+ρ)} · M(y),
//! M(y) = Σ_k q_k exp(β(|x_k|² − p) + (2 Re(y x̄_k) − |x_k|²)/(1+ρ)),
//! ```
//!
//! so `∫ α^{1+ρ} dy = E_w[M^{1+ρ}]` is an expectation against the noise law
//! and is evaluated with the tensor Gauss–Hermite rule. `M − 1` and
//! `M^{1+ρ} − 1` are carried through `expm1`/`ln_1p` because at small `p`
//! the exponent is a tiny perturbation of zero.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::optimize::{maximize, Maximum};
use crate::quadrature::Quadrature;

/// Energies equal within this relative tolerance count as equal-energy.
pub const EQUAL_ENERGY_TOL: f64 = 1e-12;
/// Step for finite differences in `ρ`.
pub const RHO_STEP: f64 = 1e-5;

/// An optimized exponent with its optimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentResult {
    /// Nats per channel symbol.
    pub value: f64,
    pub rho_opt: f64,
    pub beta_opt: f64,
    /// Spread of the Kuhn–Tucker residuals at the optimizer.
    pub kt_spread: f64,
}

/// Per-symbol terms of `ln M(y) = ln Σ_k q_k exp(a·Re y + b·Im y + c)`.
#[derive(Debug, Clone)]
pub struct AlphaKernel {
    rho: f64,
    terms: Vec<Term>,
}

#[derive(Debug, Clone, Copy)]
struct Term {
    q: f64,
    a: f64,
    b: f64,
    c: f64,
}

impl AlphaKernel {
    pub fn new(constellation: &Constellation, rho: f64, beta: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::Domain(format!("ρ must be ≥ 0, got {rho}")));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("β must be ≥ 0, got {beta}")));
        }
        let p = constellation.power();
        let s = 1.0 / (1.0 + rho);
        let terms = constellation
            .points()
            .iter()
            .zip(constellation.probs())
            .map(|(x, &q)| Term {
                q,
                a: 2.0 * x.re * s,
                b: 2.0 * x.im * s,
                c: beta * (x.norm_sqr() - p) - x.norm_sqr() * s,
            })
            .collect();
        Ok(AlphaKernel { rho, terms })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Exponent of symbol `k`'s term in `M(y)` (without its mass).
    #[inline]
    fn exponent(&self, k: usize, y: Complex64) -> f64 {
        let t = &self.terms[k];
        t.a * y.re + t.b * y.im + t.c
    }

    /// `ln M(y)`.
    #[inline]
    pub fn ln_m(&self, y: Complex64) -> f64 {
        ln_weighted_sum_exp(self.terms.iter().map(|t| (t.q, t.a * y.re + t.b * y.im + t.c)))
    }

    /// `M(y) = α(y) / f_w(y)^{1/(1+ρ)}`.
    pub fn m(&self, y: Complex64) -> f64 {
        self.ln_m(y).exp()
    }

    /// `T(y) = M(y) − 1`.
    pub fn t(&self, y: Complex64) -> f64 {
        self.ln_m(y).exp_m1()
    }

    /// `α(y)` itself.
    pub fn alpha(&self, y: Complex64) -> f64 {
        let ln_fw = -y.norm_sqr() - PI.ln();
        (self.ln_m(y) + ln_fw / (1.0 + self.rho)).exp()
    }
}

/// `ln Σ q_k e^{c_k}` for masses summing to one. Uses `ln_1p(Σ q expm1(c))`
/// while all exponents are small, log-sum-exp otherwise.
#[inline]
pub(crate) fn ln_weighted_sum_exp<I: Iterator<Item = (f64, f64)> + Clone>(terms: I) -> f64 {
    let mut small = true;
    let mut max = f64::NEG_INFINITY;
    for (q, c) in terms.clone() {
        if q > 0.0 {
            if c.abs() > 0.5 {
                small = false;
            }
            max = max.max(c);
        }
    }
    if small {
        let s: f64 = terms.map(|(q, c)| q * c.exp_m1()).sum();
        s.ln_1p()
    } else {
        let s: f64 = terms.filter(|(q, _)| *q > 0.0).map(|(q, c)| q * (c - max).exp()).sum();
        max + s.ln()
    }
}

/// `E_o` at fixed `(ρ, β)`: `−ln ∫ α(y)^{1+ρ} dy`.
pub fn eo_fixed_beta(c: &Constellation, rho: f64, beta: f64, quad: &Quadrature) -> Result<f64> {
    if c.max_abs() > RECENTER_AMPLITUDE {
        return eo_recentered(c, rho, beta, quad);
    }
    let kernel = AlphaKernel::new(c, rho, beta)?;
    let power = 1.0 + rho;
    let excess = quad.expect_complex_gaussian(|y| (power * kernel.ln_m(y)).exp_m1())?;
    if excess <= -1.0 {
        return Err(Error::Integration { re: f64::NAN, im: f64::NAN, value: excess });
    }
    Ok(-excess.ln_1p())
}

/// Above this amplitude the integrand of [`eo_fixed_beta`] is a Gaussian
/// bump far from the origin that a fixed Hermite rule cannot resolve, so the
/// integral is recentred on each transmitted symbol instead.
pub const RECENTER_AMPLITUDE: f64 = 6.0;

/// `E_o` written as an average over the transmitted symbol `x_j` with the
/// noise `w = y − x_j` integrated:
///
/// ```text
/// ∫ α^{1+ρ} dy = Σ_j q_j e^{βc_j} E_w[(Σ_k q_k e^{βc_k} e^{(−2Re(w·conj(d_jk)) − |d_jk|²)/(1+ρ)})^ρ]
/// ```
///
/// with `d_jk = x_j − x_k` and `c_k = |x_k|² − p`. The inner sum tends to
/// `q_j e^{βc_j}` for well-separated symbols, so the integrand stays bounded.
fn eo_recentered(c: &Constellation, rho: f64, beta: f64, quad: &Quadrature) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("ρ must be ≥ 0, got {rho}")));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("β must be ≥ 0, got {beta}")));
    }
    let p = c.power();
    let s = 1.0 / (1.0 + rho);
    let tilt: Vec<f64> = c.points().iter().map(|x| beta * (x.norm_sqr() - p)).collect();
    let mut total = 0.0;
    for (j, (xj, &qj)) in c.points().iter().zip(c.probs()).enumerate() {
        if qj == 0.0 {
            continue;
        }
        let terms: Vec<(f64, f64, f64, f64)> = c
            .points()
            .iter()
            .zip(c.probs())
            .zip(&tilt)
            .map(|((xk, &qk), &tk)| {
                let d = xj - xk;
                (qk, -2.0 * d.re * s, -2.0 * d.im * s, tk - d.norm_sqr() * s)
            })
            .collect();
        let e = quad.expect_complex_gaussian(|w| {
            let ln_inner = ln_weighted_sum_exp(terms.iter().map(|&(q, a, b, k)| (q, a * w.re + b * w.im + k)));
            (rho * ln_inner).exp()
        })?;
        total += qj * tilt[j].exp() * e;
    }
    if !(total > 0.0) {
        return Err(Error::Integration { re: f64::NAN, im: f64::NAN, value: total });
    }
    Ok(-total.ln())
}

/// Default upper end of the `β` search.
pub fn default_beta_max(p: f64) -> f64 {
    4.0 / (1.0 + p)
}

/// `E_o(ρ) = sup_{β ≥ 0} eo_fixed_beta`, searched on `[0, 4/(1+p)]`.
pub fn eo(c: &Constellation, rho: f64, quad: &Quadrature) -> Result<ExponentResult> {
    eo_with_beta_max(c, rho, default_beta_max(c.power()), quad)
}

/// [`eo`] with an explicit `β` search range. Equal-energy alphabets skip the
/// search: `β` multiplies `|x|² − p = 0` on the support.
pub fn eo_with_beta_max(
    c: &Constellation,
    rho: f64,
    beta_max: f64,
    quad: &Quadrature,
) -> Result<ExponentResult> {
    let best = if c.is_equal_energy(EQUAL_ENERGY_TOL) || beta_max <= 0.0 {
        Maximum { arg: 0.0, value: eo_fixed_beta(c, rho, 0.0, quad)? }
    } else {
        maximize(|beta| eo_fixed_beta(c, rho, beta, quad), 0.0, beta_max)?
    };
    let residuals = kuhn_tucker_residual(c, rho, best.arg, quad)?;
    Ok(ExponentResult {
        value: best.value.max(0.0),
        rho_opt: rho,
        beta_opt: best.arg,
        kt_spread: kt_spread(c, &residuals),
    })
}

/// Per-symbol Kuhn–Tucker residuals
/// `∫ α^ρ e^{β(|x_k|²−p)} f(y|x_k)^{1/(1+ρ)} dy − ∫ α^{1+ρ} dy`.
///
/// All residuals on the support vanish at an `E_o`-optimal `(q, β)`; symbols
/// outside the support must have nonnegative residuals.
pub fn kuhn_tucker_residual(c: &Constellation, rho: f64, beta: f64, quad: &Quadrature) -> Result<Vec<f64>> {
    let kernel = AlphaKernel::new(c, rho, beta)?;
    let n = c.len();
    let mut per_symbol = vec![0.0; n];
    let mut total = 0.0;
    for &(y, w) in quad.complex_grid() {
        let ln_m = kernel.ln_m(y);
        let m_full = ((1.0 + rho) * ln_m).exp_m1();
        if !m_full.is_finite() {
            return Err(Error::Integration { re: y.re, im: y.im, value: m_full });
        }
        total += w * m_full;
        for (k, acc) in per_symbol.iter_mut().enumerate() {
            // M^ρ e^{e_k} − 1, offset by one like the total.
            *acc += w * (rho * ln_m + kernel.exponent(k, y)).exp_m1();
        }
    }
    Ok(per_symbol.into_iter().map(|a| a - total).collect())
}

/// Spread of the residuals: range over the support, or the largest negative
/// residual off the support if that is larger.
pub fn kt_spread(c: &Constellation, residuals: &[f64]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut off = 0.0f64;
    for (&r, &q) in residuals.iter().zip(c.probs()) {
        if q > 0.0 {
            lo = lo.min(r);
            hi = hi.max(r);
        } else {
            off = off.max(-r);
        }
    }
    (hi - lo).max(off)
}

/// Random-coding exponent `sup_{0≤ρ≤1} −ρr + E_o(ρ)`.
pub fn random_coding_exponent(c: &Constellation, r: f64, quad: &Quadrature) -> Result<ExponentResult> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("rate must be ≥ 0, got {r}")));
    }
    optimize_over_rho(c, r, 1.0, quad)
}

/// Sphere-packing exponent with `ρ` capped at `rho_cap`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePacking {
    pub exponent: ExponentResult,
    /// The supremum sits at the cap, so the true exponent may be larger.
    pub saturated: bool,
}

/// `sup_{0≤ρ≤rho_cap} −ρr + E_o(ρ)`, flagging saturation at the cap.
pub fn sphere_packing_exponent(
    c: &Constellation,
    r: f64,
    rho_cap: f64,
    quad: &Quadrature,
) -> Result<SpherePacking> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("sphere-packing rate must be > 0, got {r}")));
    }
    if !(rho_cap >= 1.0) || !rho_cap.is_finite() {
        return Err(Error::Domain(format!("ρ cap must be ≥ 1, got {rho_cap}")));
    }
    let exponent = optimize_over_rho(c, r, rho_cap, quad)?;
    Ok(SpherePacking {
        saturated: rho_cap - exponent.rho_opt < 1e-6,
        exponent,
    })
}

fn optimize_over_rho(c: &Constellation, r: f64, rho_max: f64, quad: &Quadrature) -> Result<ExponentResult> {
    let best = maximize(|rho| Ok(-rho * r + eo(c, rho, quad)?.value), 0.0, rho_max)?;
    let at = eo(c, best.arg, quad)?;
    Ok(ExponentResult {
        value: best.value.max(0.0),
        rho_opt: best.arg,
        beta_opt: at.beta_opt,
        kt_spread: at.kt_spread,
    })
}

/// `∂E_o/∂ρ` by central differences with one Richardson step.
pub fn eo_rho_derivative(c: &Constellation, rho: f64, quad: &Quadrature) -> Result<f64> {
    let h = RHO_STEP;
    let central = |h: f64| -> Result<f64> {
        Ok((eo(c, rho + h, quad)?.value - eo(c, rho - h, quad)?.value) / (2.0 * h))
    };
    if rho < h {
        return Err(Error::Domain(format!("central difference needs ρ ≥ {h}, got {rho}")));
    }
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Critical rate and the exponent there, normalized by `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalRate {
    /// `∂E_o/∂ρ` at `ρ = 1`, nats per symbol.
    pub r_crit: f64,
    /// `(E_o(1) − r_crit)/p`.
    pub z_crit_normalized: f64,
}

pub fn critical_rate(c: &Constellation, quad: &Quadrature) -> Result<CriticalRate> {
    let r_crit = eo_rho_derivative(c, 1.0, quad)?;
    let e1 = eo(c, 1.0, quad)?.value;
    Ok(CriticalRate {
        r_crit,
        z_crit_normalized: (e1 - r_crit) / c.power(),
    })
}

/// `I(X; Y)` in nats per symbol.
///
/// With `y = x_k + w`, the log-likelihood ratio against `x_j` is
/// `−2 Re(w d̄) − |d|²`, `d = x_k − x_j`.
pub fn mutual_information(c: &Constellation, quad: &Quadrature) -> Result<f64> {
    let pts = c.points();
    let probs = c.probs();
    let mut total = 0.0;
    for (&xk, &qk) in pts.iter().zip(probs) {
        if qk == 0.0 {
            continue;
        }
        let diffs: Vec<(f64, Complex64)> = pts.iter().zip(probs).map(|(&xj, &qj)| (qj, xk - xj)).collect();
        let inner = quad.expect_complex_gaussian(|w| {
            -ln_weighted_sum_exp(
                diffs
                    .iter()
                    .map(|&(q, d)| (q, -2.0 * (w.re * d.re + w.im * d.im) - d.norm_sqr())),
            )
        })?;
        total += qk * inner;
    }
    Ok(total)
}

/// Reliability function of the infinite-bandwidth AWGN channel, with both
/// rate and exponent normalized by `C∞ = P`: `1/2 − x` on `[0, 1/4]`,
/// `(1 − √x)²` on `[1/4, 1]`.
pub fn infinite_bandwidth_reliability(r_over_p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r_over_p) {
        return Err(Error::Domain(format!(
            "normalized rate must lie in [0, 1], got {r_over_p}"
        )));
    }
    Ok(if r_over_p <= 0.25 {
        0.5 - r_over_p
    } else {
        (1.0 - r_over_p.sqrt()).powi(2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{oracle_expect_complex_gaussian, OracleGrid};

    fn quad() -> Quadrature {
        Quadrature::default()
    }

    fn onoff() -> Constellation {
        Constellation::custom(
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![0.75, 0.25],
        )
        .unwrap()
    }

    #[test]
    fn eo_vanishes_at_rho_zero() {
        let q = quad();
        for c in [Constellation::psk(4, 0.1).unwrap(), Constellation::psk(2, 0.7).unwrap(), onoff()] {
            assert!(eo_fixed_beta(&c, 0.0, 0.0, &q).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn qpsk_eo_against_oracle_grid() {
        let q = quad();
        let c = Constellation::psk(4, 0.1).unwrap();
        let v = eo_fixed_beta(&c, 1.0, 0.0, &q).unwrap();
        let kernel = AlphaKernel::new(&c, 1.0, 0.0).unwrap();
        let oracle = -oracle_expect_complex_gaussian(|y| kernel.m(y).powi(2), &OracleGrid::for_peak(c.max_abs())).ln();
        assert!((v - oracle).abs() < 1e-10, "{v} vs {oracle}");
        assert!((v - 0.04938).abs() < 5e-4);
    }

    #[test]
    fn bpsk_small_power_limit() {
        let c = Constellation::psk(2, 1e-3).unwrap();
        let v = eo_fixed_beta(&c, 1.0, 0.0, &quad()).unwrap();
        assert!((v - 5.0e-4).abs() < 2e-6);
    }

    #[test]
    fn alpha_kernel_consistency() {
        let c = onoff();
        let k = AlphaKernel::new(&c, 0.5, 0.3).unwrap();
        let y = Complex64::new(0.4, -1.1);
        let direct: f64 = c
            .points()
            .iter()
            .zip(c.probs())
            .map(|(x, q)| {
                let fw = (-(y - x).norm_sqr()).exp() / PI;
                q * (0.3 * (x.norm_sqr() - c.power())).exp() * fw.powf(1.0 / 1.5)
            })
            .sum();
        assert!((k.alpha(y) - direct).abs() < 1e-14 * direct);
        assert!((k.t(y) - (k.m(y) - 1.0)).abs() < 1e-14);
        assert!(AlphaKernel::new(&c, -0.1, 0.0).is_err());
        assert!(AlphaKernel::new(&c, 0.1, -1.0).is_err());
    }

    #[test]
    fn equal_energy_skips_beta() {
        let q = quad();
        let c = Constellation::psk(4, 0.2).unwrap();
        let r = eo(&c, 0.5, &q).unwrap();
        assert_eq!(r.beta_opt, 0.0);
        assert_eq!(r.value, eo_fixed_beta(&c, 0.5, 0.0, &q).unwrap());
    }

    #[test]
    fn beta_search_dominates_fixed_beta() {
        let q = quad();
        let c = onoff();
        let r = eo(&c, 1.0, &q).unwrap();
        assert!(r.value >= eo_fixed_beta(&c, 1.0, 0.0, &q).unwrap());
        assert!(r.beta_opt > 0.0);
    }

    #[test]
    fn kt_flags_onoff_through_probe_points() {
        // With two support points the β-stationarity condition already forces
        // equal residuals, so non-optimality only shows at zero-mass probes.
        let q = quad();
        let r = eo(&onoff(), 1.0, &q).unwrap();
        assert!(r.kt_spread < 1e-6, "on-support spread {}", r.kt_spread);
        let probed = Constellation::custom(
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(-2.0, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(3.0, 0.0),
            ],
            vec![0.75, 0.25, 0.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        let residuals = kuhn_tucker_residual(&probed, 1.0, r.beta_opt, &q).unwrap();
        assert!(kt_spread(&probed, &residuals) > 1e-3, "{residuals:?}");
    }

    #[test]
    fn recentred_form_matches_direct_form() {
        let q = quad();
        for p in [0.5, 4.0, 16.0, 36.0] {
            for c in [Constellation::psk(4, p).unwrap(), Constellation::psk(2, p).unwrap()] {
                for rho in [0.0, 0.3, 1.0, 2.0] {
                    let kernel = AlphaKernel::new(&c, rho, 0.0).unwrap();
                    let direct = -q
                        .expect_complex_gaussian(|y| ((1.0 + rho) * kernel.ln_m(y)).exp())
                        .unwrap()
                        .ln();
                    let recentred = eo_recentered(&c, rho, 0.0, &q).unwrap();
                    assert!((direct - recentred).abs() < 1e-7, "p={p} ρ={rho}: {direct} vs {recentred}");
                }
            }
        }
        let c = onoff();
        for beta in [0.0, 0.2, 0.7] {
            let direct = eo_fixed_beta(&c, 0.8, beta, &q).unwrap();
            let recentred = eo_recentered(&c, 0.8, beta, &q).unwrap();
            assert!((direct - recentred).abs() < 1e-10, "β={beta}");
        }
    }

    #[test]
    fn large_power_saturates_at_alphabet_entropy() {
        let q = quad();
        let c = Constellation::psk(4, 400.0).unwrap();
        for rho in [0.5, 1.0] {
            let v = eo_fixed_beta(&c, rho, 0.0, &q).unwrap();
            assert!((v - rho * 4f64.ln()).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn upper_bound_example() {
        let c = Constellation::psk(4, 0.1).unwrap();
        assert!(eo(&c, 1.0, &quad()).unwrap().value <= 0.05);
    }

    #[test]
    fn singleton_has_zero_exponent() {
        let q = quad();
        let c = Constellation::custom(vec![Complex64::new(0.8, 0.1)], vec![1.0]).unwrap();
        for rho in [0.0, 0.5, 1.0, 3.0] {
            assert!(eo(&c, rho, &q).unwrap().value.abs() < 1e-12);
        }
        assert!(mutual_information(&c, &q).unwrap().abs() < 1e-12);
    }

    #[test]
    fn kt_symmetric_constellations() {
        let q = quad();
        for c in [Constellation::psk(4, 0.37).unwrap(), Constellation::psk(2, 1.3).unwrap()] {
            for rho in [0.2, 1.0] {
                let r = kuhn_tucker_residual(&c, rho, 0.0, &q).unwrap();
                let spread = kt_spread(&c, &r);
                assert!(spread < 1e-10, "spread {spread}");
            }
        }
    }

    #[test]
    fn kt_onoff_is_not_optimal_on_two_point_family() {
        // Grid search over two-point distributions {0, a} with fixed power 1
        // finds a better E_o at ρ = 1 than q = 0.25, confirming the nonzero
        // residual spread is meaningful.
        let q = quad();
        let base = eo(&onoff(), 1.0, &q).unwrap().value;
        let best = [0.1f64, 0.15, 0.2, 0.3, 0.4, 0.5]
            .iter()
            .map(|&on| {
                let c = Constellation::custom(
                    vec![Complex64::new(0.0, 0.0), Complex64::new((1.0 / on).sqrt(), 0.0)],
                    vec![1.0 - on, on],
                )
                .unwrap();
                eo(&c, 1.0, &q).unwrap().value
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(best > base);
    }

    #[test]
    fn random_coding_endpoints() {
        let q = quad();
        let c = Constellation::psk(4, 0.1).unwrap();
        let at_zero = random_coding_exponent(&c, 0.0, &q).unwrap();
        assert_eq!(at_zero.rho_opt, 1.0);
        assert_eq!(at_zero.value, eo(&c, 1.0, &q).unwrap().value);

        let i = mutual_information(&c, &q).unwrap();
        let at_cap = random_coding_exponent(&c, i, &q).unwrap();
        assert!(at_cap.value.abs() < 1e-6);
        assert!(at_cap.rho_opt < 1e-2);
        assert!(random_coding_exponent(&c, -0.1, &q).is_err());
    }

    #[test]
    fn random_coding_interior_matches_dense_grid() {
        let q = quad();
        let c = Constellation::psk(4, 0.1).unwrap();
        let r = 0.04;
        let got = random_coding_exponent(&c, r, &q).unwrap();
        let (mut best_v, mut best_rho) = (f64::NEG_INFINITY, 0.0);
        for i in 0..=10_000 {
            let rho = i as f64 * 1e-4;
            let v = -rho * r + eo_fixed_beta(&c, rho, 0.0, &q).unwrap();
            if v > best_v {
                best_v = v;
                best_rho = rho;
            }
        }
        assert!(got.value > 0.0);
        assert!(got.rho_opt > 0.0 && got.rho_opt < 1.0);
        assert!((got.rho_opt - best_rho).abs() < 2e-4);
        assert!((got.value - best_v).abs() < 1e-10);
    }

    #[test]
    fn sphere_packing_cases() {
        let q = quad();
        let c = Constellation::psk(4, 0.1).unwrap();
        let crit = critical_rate(&c, &q).unwrap();
        let r = 1.5 * crit.r_crit;
        let er = random_coding_exponent(&c, r, &q).unwrap();
        let esp = sphere_packing_exponent(&c, r, 8.0, &q).unwrap();
        assert!(!esp.saturated);
        assert!((er.value - esp.exponent.value).abs() < 1e-9);

        let low = sphere_packing_exponent(&c, 0.001, 8.0, &q).unwrap();
        assert!(low.saturated);
        assert_eq!(low.exponent.rho_opt, 8.0);

        let i = mutual_information(&c, &q).unwrap();
        assert!(sphere_packing_exponent(&c, i, 8.0, &q).unwrap().exponent.value.abs() < 1e-6);
        assert!(sphere_packing_exponent(&c, 0.0, 8.0, &q).is_err());
        assert!(sphere_packing_exponent(&c, 0.01, 0.5, &q).is_err());
    }

    #[test]
    fn critical_rate_small_power() {
        let q = quad();
        let c = Constellation::psk(4, 1e-3).unwrap();
        let crit = critical_rate(&c, &q).unwrap();
        assert!((crit.r_crit / c.power() - 0.25).abs() < 0.01);
        assert!((crit.z_crit_normalized - 0.25).abs() < 0.01);

        let c = Constellation::psk(4, 0.5).unwrap();
        let crit = critical_rate(&c, &q).unwrap();
        let i = mutual_information(&c, &q).unwrap();
        assert!(crit.r_crit > 0.0 && crit.r_crit < i);
    }

    #[test]
    fn mutual_information_properties() {
        let q = quad();
        let tiny = Constellation::psk(4, 1e-10).unwrap();
        assert!(mutual_information(&tiny, &q).unwrap().abs() < 1e-9);
        for p in [0.1, 1.0, 10.0, 100.0] {
            let c = Constellation::psk(4, p).unwrap();
            assert!(mutual_information(&c, &q).unwrap() <= 4f64.ln() + 1e-12);
        }
        let c = Constellation::psk(4, 0.3).unwrap();
        let i = mutual_information(&c, &q).unwrap();
        let h = 1e-4;
        let fd = eo(&c, h, &q).unwrap().value / h;
        assert!((fd - i).abs() < 1e-3, "{fd} vs {i}");
        // Below the Gaussian-input capacity ln(1 + p).
        assert!(i < 1.3f64.ln());
    }

    #[test]
    fn infinite_bandwidth_curve() {
        assert_eq!(infinite_bandwidth_reliability(0.0).unwrap(), 0.5);
        assert_eq!(infinite_bandwidth_reliability(0.25).unwrap(), 0.25);
        assert_eq!(infinite_bandwidth_reliability(1.0).unwrap(), 0.0);
        assert!(infinite_bandwidth_reliability(1.1).is_err());
        assert!(infinite_bandwidth_reliability(-0.1).is_err());
    }

    #[test]
    fn qpsk_second_order_coefficient() {
        // E_o = pρ/(1+ρ) − ρp²/(2(1+ρ)³) + O(p³)
        let q = quad();
        let p = 1e-3;
        let c = Constellation::psk(4, p).unwrap();
        for rho in [0.25, 0.5, 1.0] {
            let e = eo(&c, rho, &q).unwrap().value;
            let coeff = (e / (p * rho) - 1.0 / (1.0 + rho)) / p;
            let want = -1.0 / (2.0 * (1.0 + rho).powi(3));
            assert!((coeff / want - 1.0).abs() < 0.05, "ρ={rho}: {coeff} vs {want}");
        }
    }

    #[test]
    fn bpsk_second_order_coefficient_from_series() {
        // Series of E[cosh(a u)^{1+ρ}] with u ~ N(0,1/2), a = 2√p/(1+ρ):
        //   E = 1 + p/(1+ρ) + p²(1+3ρ)/(2(1+ρ)³) + O(p³)
        //   E_o = p − ln E = pρ/(1+ρ) − p²ρ/(1+ρ)³ + O(p³)
        let q = quad();
        let p = 1e-3;
        let c = Constellation::psk(2, p).unwrap();
        for rho in [0.25, 0.5, 1.0] {
            let e = eo(&c, rho, &q).unwrap().value;
            let coeff = (e / (p * rho) - 1.0 / (1.0 + rho)) / p;
            let want = -1.0 / (1.0 + rho).powi(3);
            assert!((coeff / want - 1.0).abs() < 0.05, "ρ={rho}: {coeff} vs {want}");
        }
    }
}
