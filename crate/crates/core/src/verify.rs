//! Self-verification suite: numbered checks of the engine against closed
//! forms and independent oracles.
//!
//! Reports contain only computed values, never timings, so two runs with the
//! same configuration serialize to identical bytes regardless of thread count.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::constellation::{Constellation, SchemeKind, SignalingScheme};
use crate::error::{Error, Result};
use crate::fading::{eo_fading_iid, exponent_infinite, fading_asymptotes, fading_rate_curve, FadingCurve, FadingSpec};
use crate::gallager::{eo, kt_spread, kuhn_tucker_residual, AlphaKernel};
use crate::output::to_json;
use crate::quadrature::{
    oracle_expect_complex_gaussian, GaussQuadratureRule, OracleGrid, Quadrature, DEFAULT_HERMITE_ORDER,
    DEFAULT_LAGUERRE_ORDER,
};
use crate::wideband::{
    awgn_asymptotes, rate_curve, rate_per_symbol, rate_per_symbol_root, spectral_efficiency_from_curve,
    WidebandCurve,
};

/// Number of Monte Carlo draws for the fading-integrand oracle.
pub const MC_SAMPLES: usize = 1_000_000;

/// Criterion ids and names, in run order.
pub const CRITERIA: [(u8, &str); 13] = [
    (1, "AWGN first-order limit"),
    (2, "AWGN second-order slope"),
    (3, "rho* convergence"),
    (4, "Gallager upper-bound battery"),
    (5, "second-order E_o law"),
    (6, "constraint-form equivalence"),
    (7, "Kuhn-Tucker spread"),
    (8, "spectral efficiency"),
    (9, "fading closed forms"),
    (10, "fading convergence"),
    (11, "fading near-optimality"),
    (12, "oracle equivalence"),
    (13, "determinism"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub hermite_order: usize,
    pub laguerre_order: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            hermite_order: DEFAULT_HERMITE_ORDER,
            laguerre_order: DEFAULT_LAGUERRE_ORDER,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tolerance {
    /// `|value − target| ≤ tol`.
    Absolute,
    /// `|value/target − 1| ≤ tol`.
    Relative,
    /// `value ≤ target + tol`.
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub mode: Tolerance,
    pub pass: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, value: f64, target: f64, tolerance: f64, mode: Tolerance) -> Self {
        let pass = match mode {
            Tolerance::Absolute => (value - target).abs() <= tolerance,
            Tolerance::Relative => (value / target - 1.0).abs() <= tolerance,
            Tolerance::AtMost => value <= target + tolerance,
        };
        Check {
            label: label.into(),
            value,
            target,
            tolerance,
            mode,
            pass,
        }
    }

    pub fn abs(label: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Check::new(label, value, target, tol, Tolerance::Absolute)
    }

    pub fn rel(label: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Check::new(label, value, target, tol, Tolerance::Relative)
    }

    pub fn at_most(label: impl Into<String>, value: f64, bound: f64) -> Self {
        Check::new(label, value, bound, 0.0, Tolerance::AtMost)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CriterionReport {
    fn from_checks(id: u8, checks: Result<Vec<Check>>) -> Self {
        let name = criterion_name(id).to_string();
        match checks {
            Ok(checks) => CriterionReport {
                id,
                name,
                pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
                checks,
                error: None,
            },
            Err(e) => CriterionReport {
                id,
                name,
                pass: false,
                checks: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    }

    /// `"[PASS]  1 AWGN first-order limit"`.
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {:>2} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub pass: bool,
    pub criteria: Vec<CriterionReport>,
}

impl VerifyReport {
    fn new(config: VerifyConfig, criteria: Vec<CriterionReport>) -> Self {
        VerifyReport {
            config,
            pass: criteria.iter().all(|c| c.pass),
            criteria,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    /// Human-readable table: one summary line per criterion, then its checks.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            out.push_str(&c.summary_line());
            out.push('\n');
            for k in &c.checks {
                let mode = match k.mode {
                    Tolerance::Absolute => "abs",
                    Tolerance::Relative => "rel",
                    Tolerance::AtMost => "max",
                };
                out.push_str(&format!(
                    "        {:<4} {:<44} value {:<24e} target {:<24e} {mode} tol {:e}\n",
                    if k.pass { "ok" } else { "FAIL" },
                    k.label,
                    k.value,
                    k.target,
                    k.tolerance
                ));
            }
            if let Some(e) = &c.error {
                out.push_str(&format!("        error: {e}\n"));
            }
        }
        let passed = self.criteria.iter().filter(|c| c.pass).count();
        out.push_str(&format!("{passed}/{} criteria passed\n", self.criteria.len()));
        out
    }
}

pub fn criterion_name(id: u8) -> &'static str {
    CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .unwrap_or("unknown")
}

const AWGN_POWER: f64 = 1.0;
const AWGN_Z: f64 = 0.1;
const FADING_Z: f64 = 0.05;

struct AwgnRuns {
    qpsk: WidebandCurve,
    bpsk: WidebandCurve,
}

/// Shared state for one verification run; curves reused across criteria are
/// computed once.
pub struct Suite {
    config: VerifyConfig,
    quad: Quadrature,
    awgn: OnceLock<std::result::Result<AwgnRuns, Error>>,
}

fn dyadic_b_grid() -> Vec<f64> {
    (6..=14).map(|k| 2f64.powi(-k)).collect()
}

fn unit_fading(w_c: f64, z: f64) -> Result<FadingSpec> {
    FadingSpec::new(1.0, 1.0, 1, w_c, z)
}

impl Suite {
    pub fn new(config: VerifyConfig) -> Result<Self> {
        Ok(Suite {
            config,
            quad: Quadrature::new(config.hermite_order, config.laguerre_order)?,
            awgn: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    fn awgn(&self) -> Result<&AwgnRuns> {
        self.awgn
            .get_or_init(|| {
                let grid = dyadic_b_grid();
                let (qpsk, bpsk) = rayon::join(
                    || rate_curve(&SignalingScheme::qpsk(), AWGN_POWER, AWGN_Z, &grid, &self.quad),
                    || rate_curve(&SignalingScheme::bpsk(), AWGN_POWER, AWGN_Z, &grid, &self.quad),
                );
                Ok(AwgnRuns { qpsk: qpsk?, bpsk: bpsk? })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Runs one of criteria 1–12. Criterion 13 needs whole-suite reruns; see
    /// [`determinism`].
    pub fn criterion(&self, id: u8) -> CriterionReport {
        let checks = match id {
            1 => self.c1_first_order(),
            2 => self.c2_second_order(),
            3 => self.c3_rho_star(),
            4 => self.c4_upper_bound(),
            5 => self.c5_second_order_eo(),
            6 => self.c6_equivalence(),
            7 => self.c7_kuhn_tucker(),
            8 => self.c8_spectral_efficiency(),
            9 => self.c9_fading_closed_forms(),
            10 => self.c10_fading_convergence(),
            11 => self.c11_fading_slopes(),
            12 => self.c12_oracles(),
            _ => Err(Error::Validation(format!("criterion {id} is not a single-run check"))),
        };
        CriterionReport::from_checks(id, checks)
    }

    fn c1_first_order(&self) -> Result<Vec<Check>> {
        let a = awgn_asymptotes(AWGN_POWER, AWGN_Z)?;
        let r0 = self.awgn()?.qpsk.r0_extrapolated.unwrap_or(f64::NAN);
        Ok(vec![Check::abs("QPSK extrapolated R0", r0, a.r0, 1e-3)])
    }

    fn c2_second_order(&self) -> Result<Vec<Check>> {
        let a = awgn_asymptotes(AWGN_POWER, AWGN_Z)?;
        let runs = self.awgn()?;
        let q = runs.qpsk.slope_extrapolated.unwrap_or(f64::NAN);
        let b = runs.bpsk.slope_extrapolated.unwrap_or(f64::NAN);
        Ok(vec![
            Check::rel("QPSK extrapolated slope", q, a.rdot0, 0.05),
            Check::rel("BPSK extrapolated slope", b, 2.0 * a.rdot0, 0.05),
            Check::abs("BPSK/QPSK slope ratio", b / q, 2.0, 0.05),
        ])
    }

    fn c3_rho_star(&self) -> Result<Vec<Check>> {
        let a = awgn_asymptotes(AWGN_POWER, AWGN_Z)?;
        let runs = self.awgn()?;
        let last = |c: &WidebandCurve| c.samples.last().map(|s| s.rho_opt).unwrap_or(f64::NAN);
        Ok(vec![
            Check::abs("QPSK rho_opt at b = 2^-14", last(&runs.qpsk), a.rho_star, 0.01),
            Check::abs("BPSK rho_opt at b = 2^-14", last(&runs.bpsk), a.rho_star, 0.01),
        ])
    }

    fn c4_upper_bound(&self) -> Result<Vec<Check>> {
        let schemes = [
            SignalingScheme::bpsk(),
            SignalingScheme::qpsk(),
            SignalingScheme::new(SchemeKind::OnOff { on_prob: 0.25 }),
            SignalingScheme::new(SchemeKind::Psk(8)),
        ];
        let powers: Vec<f64> = (0..8).map(|k| 10f64.powf(-3.0 + 3.0 * k as f64 / 7.0)).collect();
        let cases: Vec<(&SignalingScheme, f64)> = schemes
            .iter()
            .flat_map(|s| powers.iter().map(move |&p| (s, p)))
            .collect();
        let excesses = cases
            .par_iter()
            .map(|&(scheme, p)| {
                let c = scheme.constellation(p)?;
                (0..=20)
                    .map(|i| {
                        let rho = i as f64 / 20.0;
                        Ok(eo(&c, rho, &self.quad)?.value - p * rho / (1.0 + rho))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let all: Vec<f64> = excesses.into_iter().flatten().collect();
        let violations = all.iter().filter(|&&e| e > 1e-9).count();
        let worst = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(vec![
            Check::at_most(format!("violations in {} evaluations", all.len()), violations as f64, 0.0),
            Check::new("max E_o − pρ/(1+ρ)", worst, 0.0, 1e-9, Tolerance::AtMost),
        ])
    }

    fn c5_second_order_eo(&self) -> Result<Vec<Check>> {
        let p = 1e-3;
        let qpsk = Constellation::psk(4, p)?;
        let bpsk = Constellation::psk(2, p)?;
        let coefficient = |c: &Constellation, rho: f64| -> Result<f64> {
            let e = eo(c, rho, &self.quad)?.value;
            Ok((e / (p * rho) - 1.0 / (1.0 + rho)) / p)
        };
        let mut checks = Vec::new();
        for rho in [0.25f64, 0.5, 1.0] {
            let cube = (1.0 + rho).powi(3);
            checks.push(Check::rel(
                format!("QPSK coefficient, rho = {rho}"),
                coefficient(&qpsk, rho)?,
                -1.0 / (2.0 * cube),
                0.05,
            ));
        }
        for rho in [0.25f64, 0.5, 1.0] {
            let cube = (1.0 + rho).powi(3);
            checks.push(Check::rel(
                format!("BPSK coefficient, rho = {rho}"),
                coefficient(&bpsk, rho)?,
                -2.0 / cube,
                0.05,
            ));
        }
        Ok(checks)
    }

    fn c6_equivalence(&self) -> Result<Vec<Check>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let pairs: Vec<(f64, f64)> = (0..20)
            .map(|_| {
                let p = 10f64.powf(rng.random_range(-3.0..0.0));
                let z = rng.random_range(0.01..0.24);
                (p, z)
            })
            .collect();
        let diffs = pairs
            .par_iter()
            .map(|&(p, z)| {
                let c = Constellation::psk(4, p)?;
                let sup = rate_per_symbol(&c, z, &self.quad)?.rate;
                let root = rate_per_symbol_root(&c, z, &self.quad)?;
                Ok((sup - root).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        let worst = diffs.iter().copied().fold(0.0, f64::max);
        Ok(vec![Check::at_most("max |sup form − root form| over 20 pairs", worst, 1e-9)])
    }

    fn c7_kuhn_tucker(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        for order in [2usize, 4] {
            let mut worst = 0.0f64;
            for p in [1e-3, 1e-2, 0.1, 1.0, 10.0] {
                let c = Constellation::psk(order, p)?;
                for rho in [0.25, 0.5, 1.0, 2.0] {
                    let r = kuhn_tucker_residual(&c, rho, 0.0, &self.quad)?;
                    worst = worst.max(kt_spread(&c, &r));
                }
            }
            let name = if order == 2 { "BPSK" } else { "QPSK" };
            checks.push(Check::new(format!("{name} max residual spread"), worst, 0.0, 1e-8, Tolerance::AtMost));
        }
        Ok(checks)
    }

    fn c8_spectral_efficiency(&self) -> Result<Vec<Check>> {
        let se = spectral_efficiency_from_curve(&self.awgn()?.qpsk, AWGN_POWER);
        let limit = se.limit_ebn0_db.unwrap_or(f64::NAN);
        Ok(vec![
            Check::abs("min Eb/N0 (dB)", limit, 1.710, 0.02),
            Check::abs("gap to unconstrained limit (dB)", limit - se.reference_ebn0_db, 3.30, 0.05),
            Check::abs("unconstrained limit 10·log10(ln 2) (dB)", se.reference_ebn0_db, 10.0 * LN_2.log10(), 1e-12),
        ])
    }

    fn c9_fading_closed_forms(&self) -> Result<Vec<Check>> {
        let spec = FadingSpec::new(100.0, 1.0, 1, 1.0, 1.0)?;
        let a = fading_asymptotes(&spec)?;
        let z_star = 51f64.ln() - 100.0 / 204.0;
        let r_crit = 100.0 / 204.0;
        let at_capacity = exponent_infinite(&spec, a.c_infinity)?.exponent;
        let at_crit = exponent_infinite(&spec, a.r_crit)?.exponent;
        Ok(vec![
            Check::abs("z* vs ln 51 − 100/204", a.z_star, z_star, 1e-9),
            Check::abs("z* vs quoted 3.44163", a.z_star, 3.44163, 5e-6),
            Check::abs("r_crit vs 100/204", a.r_crit, r_crit, 1e-9),
            Check::abs("r_crit vs quoted 0.490196", a.r_crit, 0.490196, 5e-7),
            Check::abs("C_inf", a.c_infinity, 100.0, 0.0),
            Check::abs("E(C_inf)", at_capacity, 0.0, 1e-9),
            Check::abs("E(r_crit) − z*", at_crit - a.z_star, 0.0, 1e-9),
        ])
    }

    fn c10_fading_convergence(&self) -> Result<Vec<Check>> {
        let w_c = 1024.0;
        let spec = unit_fading(w_c, FADING_Z)?;
        let c = Constellation::psk(4, spec.per_symbol_power())?;
        let rhos = [0.25, 0.5, 1.0];
        let values = rhos
            .par_iter()
            .map(|&rho| eo_fading_iid(&c, &spec, rho, &self.quad))
            .collect::<Result<Vec<f64>>>()?;
        let mut checks = Vec::new();
        for (&rho, &v) in rhos.iter().zip(&values) {
            let limit = (1.0 + rho / (1.0 + rho)).ln();
            checks.push(Check::rel(format!("E_o vs limit, rho = {rho}"), v, limit, 0.01));
        }
        for (&rho, &v) in rhos.iter().zip(&values) {
            let limit = (1.0 + rho / (1.0 + rho)).ln();
            let target = -rho / ((1.0 + rho) * (1.0 + 2.0 * rho).powi(2));
            checks.push(Check::rel(format!("W_c·(E_o − limit), rho = {rho}"), w_c * (v - limit), target, 0.10));
        }
        Ok(checks)
    }

    fn fading_curves(&self) -> Result<(FadingCurve, FadingCurve)> {
        let spec = unit_fading(64.0, FADING_Z)?;
        let grid: Vec<f64> = (6..=10).map(|k| 2f64.powi(k)).collect();
        let (q, b) = rayon::join(
            || fading_rate_curve(&SignalingScheme::qpsk(), &spec, &grid, &self.quad),
            || fading_rate_curve(&SignalingScheme::bpsk(), &spec, &grid, &self.quad),
        );
        Ok((q?, b?))
    }

    fn c11_fading_slopes(&self) -> Result<Vec<Check>> {
        let a = fading_asymptotes(&unit_fading(64.0, FADING_Z)?)?;
        let (q, b) = self.fading_curves()?;
        let qs = q.slope_extrapolated.unwrap_or(f64::NAN);
        let bs = b.slope_extrapolated.unwrap_or(f64::NAN);
        Ok(vec![
            Check::rel("QPSK fitted slope", qs, a.rdot0, 0.10),
            Check::rel("BPSK/QPSK slope ratio", bs / qs, 2.0, 0.10),
        ])
    }

    fn c12_oracles(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let c = Constellation::psk(4, 0.1)?;
        let grid = OracleGrid::for_peak(c.max_abs());
        for rho in [0.5, 1.0] {
            let kernel = AlphaKernel::new(&c, rho, 0.0)?;
            let g = |y| ((1.0 + rho) * kernel.ln_m(y)).exp();
            let gh = self.quad.expect_complex_gaussian(g)?;
            let oracle = oracle_expect_complex_gaussian(g, &grid);
            checks.push(Check::abs(format!("Gauss-Hermite vs grid, rho = {rho}"), gh, oracle, 1e-8));
        }

        let spec = unit_fading(32.0, FADING_Z)?;
        let rho = 1.0;
        let c = Constellation::psk(4, spec.per_symbol_power())?;
        let gl = (-eo_fading_iid(&c, &spec, rho, &self.quad)? * spec.t_c).exp();
        let (mean, std_err) = monte_carlo_fading_integrand(&spec, rho, self.config.seed)?;
        let diff = (gl - mean).abs();
        checks.push(Check::new(
            "|Gauss-Laguerre − Monte Carlo| vs 3σ",
            diff,
            0.0,
            3.0 * std_err,
            Tolerance::AtMost,
        ));
        Ok(checks)
    }
}

/// Monte Carlo estimate of `E_t[exp(−D·E_o^NF(p·t, ρ))]` for QPSK with
/// `t ~ Exp(1)`, returning the mean and its standard error.
///
/// Each draw uses the per-axis factorization
/// `E[M^{1+ρ}] = e^{−p}·(E_u[cosh(2su/(1+ρ))^{1+ρ}])²`, `s = √(p/2)`,
/// `u ~ N(0, 1/2)`, integrated with a fixed 1-D rule, so the 2-D engine is
/// not involved.
pub fn monte_carlo_fading_integrand(spec: &FadingSpec, rho: f64, seed: u64) -> Result<(f64, f64)> {
    if spec.blocks != 1 {
        return Err(Error::Unsupported("Monte Carlo oracle covers a single block".into()));
    }
    let rule = GaussQuadratureRule::hermite(64)?;
    let half: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .filter(|(u, _)| **u > 0.0)
        .map(|(&u, &w)| (u, 2.0 * w))
        .collect();
    let p = spec.per_symbol_power();
    let d = spec.d();
    let a = 1.0 + rho;
    let eo_nf = |pt: f64| {
        let s = (pt / 2.0).sqrt();
        let inner: f64 = half.iter().map(|&(u, w)| w * (2.0 * s * u / a).cosh().powf(a)).sum();
        pt - 2.0 * inner.ln()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..MC_SAMPLES {
        let t: f64 = Exp1.sample(&mut rng);
        let g = (-d * eo_nf(p * t)).exp();
        sum += g;
        sum_sq += g * g;
    }
    let n = MC_SAMPLES as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Criteria 1–12 in order.
pub fn run_core(config: VerifyConfig) -> Result<VerifyReport> {
    let suite = Suite::new(config)?;
    let criteria = (1..=12).map(|id| suite.criterion(id)).collect();
    Ok(VerifyReport::new(config, criteria))
}

/// Criterion 13: runs criteria 1–12 under each thread count and compares the
/// serialized reports byte for byte.
pub fn determinism(config: VerifyConfig, thread_counts: &[usize]) -> CriterionReport {
    let checks = (|| {
        if thread_counts.len() < 2 {
            return Err(Error::Validation("need at least two thread counts".into()));
        }
        let mut reports = Vec::new();
        for &n in thread_counts {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
            reports.push(pool.install(|| run_core(config))?.to_json()?);
        }
        Ok(thread_counts[1..]
            .iter()
            .zip(&reports[1..])
            .map(|(n, r)| {
                let same = r.as_bytes() == reports[0].as_bytes();
                Check::abs(
                    format!("report bytes identical, {} vs {n} threads", thread_counts[0]),
                    f64::from(u8::from(same)),
                    1.0,
                    0.0,
                )
            })
            .collect())
    })();
    CriterionReport::from_checks(13, checks)
}

/// All thirteen criteria. The determinism check compares a single-threaded
/// run against one on `threads` workers.
pub fn run_all(config: VerifyConfig, threads: usize) -> Result<VerifyReport> {
    let core = run_core(config)?;
    let mut criteria = core.criteria;
    criteria.push(determinism(config, &[1, threads.max(2)]));
    Ok(VerifyReport::new(config, criteria))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_modes() {
        assert!(Check::abs("a", 1.0, 1.05, 0.1).pass);
        assert!(!Check::abs("a", 1.0, 1.2, 0.1).pass);
        assert!(Check::rel("r", -0.33, -0.32, 0.05).pass);
        assert!(!Check::rel("r", 0.0, -0.32, 0.05).pass);
        assert!(!Check::abs("nan", f64::NAN, 0.0, 1.0).pass);
        assert!(Check::at_most("m", 0.0, 0.0).pass);
        assert!(!Check::at_most("m", 1.0, 0.0).pass);
    }

    #[test]
    fn errors_fail_the_criterion() {
        let r = CriterionReport::from_checks(3, Err(Error::Domain("x".into())));
        assert!(!r.pass);
        assert_eq!(r.name, "rho* convergence");
        assert!(r.summary_line().starts_with("[FAIL]"));
    }

    #[test]
    fn fast_criteria_pass() {
        let suite = Suite::new(VerifyConfig::default()).unwrap();
        for id in [7, 9] {
            let r = suite.criterion(id);
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let spec = unit_fading(32.0, FADING_Z).unwrap();
        let a = monte_carlo_fading_integrand(&spec, 1.0, 7).unwrap();
        let b = monte_carlo_fading_integrand(&spec, 1.0, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.0 > 0.0 && a.0 < 1.0 && a.1 > 0.0);
    }
}
