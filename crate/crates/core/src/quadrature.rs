//! Expectation engines for the two densities that appear in every exponent:
//! the unit circularly-symmetric complex Gaussian (channel noise) and the
//! unit-mean exponential (Rayleigh power gain `|H|²`).
//!
//! Rules are Gauss–Hermite / Gauss–Laguerre, obtained from the Jacobi matrix
//! of the three-term recurrence (Golub–Welsch), with the nodes polished by
//! Newton's method on the recurrence and the weights recomputed from the
//! Christoffel function. Weights are normalized to the probability measure,
//! so a rule integrates `E[g]` directly.
//!
//! [`oracle_expect_complex_gaussian`] is a brute-force midpoint rule over a
//! truncated square. It shares no code with the Gaussian rules and serves as
//! the independent reference for the quadrature-based engines.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const DEFAULT_HERMITE_ORDER: usize = 48;
pub const DEFAULT_LAGUERRE_ORDER: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleFamily {
    /// Real part of a unit complex Gaussian: `N(0, 1/2)`, weight `e^{-x²}/√π`.
    Hermite,
    /// Unit-mean exponential on `[0, ∞)`, weight `e^{-t}`.
    Laguerre,
}

/// A Gauss rule whose weights sum to one (probability measure).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussQuadratureRule {
    pub family: RuleFamily,
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussQuadratureRule {
    /// Gauss–Hermite rule for `N(0, 1/2)`, i.e. one real axis of `CN(0, 1)`.
    pub fn hermite(order: usize) -> Result<Self> {
        Self::build(RuleFamily::Hermite, order)
    }

    /// Gauss–Laguerre rule for the unit exponential law.
    pub fn laguerre(order: usize) -> Result<Self> {
        Self::build(RuleFamily::Laguerre, order)
    }

    fn build(family: RuleFamily, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Validation(format!("quadrature order must be ≥ 2, got {order}")));
        }
        let (diag, off) = recurrence(family, order);
        let n = order;
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            jacobi[(i, i)] = diag[i];
            if i + 1 < n {
                jacobi[(i, i + 1)] = off[i];
                jacobi[(i + 1, i)] = off[i];
            }
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let step = newton_step(*x, &diag, &off);
                if !step.is_finite() {
                    break;
                }
                *x -= step;
                if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                    break;
                }
            }
        }
        let weights = nodes.iter().map(|&x| christoffel_weight(x, &diag, &off)).collect();
        Ok(GaussQuadratureRule {
            family,
            order,
            nodes,
            weights,
        })
    }

    /// `Σ wᵢ g(xᵢ)`, failing on the first non-finite integrand value.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> Result<f64> {
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = g(x);
            if !v.is_finite() {
                return Err(Error::Integration { re: x, im: 0.0, value: v });
            }
            acc += w * v;
        }
        Ok(acc)
    }
}

/// Diagonal and off-diagonal of the Jacobi matrix of the orthonormal family.
fn recurrence(family: RuleFamily, n: usize) -> (Vec<f64>, Vec<f64>) {
    match family {
        RuleFamily::Hermite => (vec![0.0; n], (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect()),
        RuleFamily::Laguerre => (
            (0..n).map(|k| 2.0 * k as f64 + 1.0).collect(),
            (1..n).map(|k| k as f64).collect(),
        ),
    }
}

/// Newton correction `p_n(x)/p_n'(x)` for the degree-`n` polynomial of the
/// recurrence. Values are rescaled on the fly; the ratio is scale-free.
fn newton_step(x: f64, diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..n {
        let b_k = if k == 0 { 0.0 } else { off[k - 1] };
        let b_next = if k + 1 < n { off[k] } else { 1.0 };
        let p_next = ((x - diag[k]) * p - b_k * p_prev) / b_next;
        let d_next = (p + (x - diag[k]) * d - b_k * d_prev) / b_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let scale = p.abs().max(d.abs());
        if scale > 1e150 {
            p_prev /= scale;
            p /= scale;
            d_prev /= scale;
            d /= scale;
        }
    }
    p / d
}

/// `1 / Σ_{k<n} p_k(x)²` for the orthonormal polynomials. Overflow of the
/// sum yields a zero weight, which is the correct value to double precision.
fn christoffel_weight(x: f64, diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let (mut p_prev, mut p) = (0.0, 1.0);
    let mut sum = 1.0;
    for k in 0..n - 1 {
        let b_k = if k == 0 { 0.0 } else { off[k - 1] };
        let p_next = ((x - diag[k]) * p - b_k * p_prev) / off[k];
        p_prev = p;
        p = p_next;
        sum += p * p;
    }
    1.0 / sum
}

/// The rules used by the exponent engines, with the tensor-product grid for
/// the complex plane precomputed.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub hermite: GaussQuadratureRule,
    pub laguerre: GaussQuadratureRule,
    grid: Vec<(Complex64, f64)>,
}

impl Quadrature {
    pub fn new(hermite_order: usize, laguerre_order: usize) -> Result<Self> {
        let hermite = GaussQuadratureRule::hermite(hermite_order)?;
        let laguerre = GaussQuadratureRule::laguerre(laguerre_order)?;
        let grid = tensor_grid(&hermite);
        Ok(Quadrature { hermite, laguerre, grid })
    }

    /// Nodes `y` and weights of the 2-D rule for `y ~ CN(0, 1)`.
    pub fn complex_grid(&self) -> &[(Complex64, f64)] {
        &self.grid
    }

    pub fn expect_complex_gaussian<F: Fn(Complex64) -> f64>(&self, g: F) -> Result<f64> {
        sum_over_grid(&self.grid, g)
    }

    pub fn expect_unit_exponential<F: Fn(f64) -> f64>(&self, g: F) -> Result<f64> {
        self.laguerre.integrate(g)
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::new(DEFAULT_HERMITE_ORDER, DEFAULT_LAGUERRE_ORDER)
            .expect("default quadrature orders are valid")
    }
}

fn tensor_grid(rule: &GaussQuadratureRule) -> Vec<(Complex64, f64)> {
    let mut grid = Vec::with_capacity(rule.order * rule.order);
    for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
        for (&v, &wv) in rule.nodes.iter().zip(&rule.weights) {
            grid.push((Complex64::new(u, v), wu * wv));
        }
    }
    grid
}

fn sum_over_grid<F: Fn(Complex64) -> f64>(grid: &[(Complex64, f64)], g: F) -> Result<f64> {
    let mut acc = 0.0;
    for &(y, w) in grid {
        let v = g(y);
        if !v.is_finite() {
            return Err(Error::Integration { re: y.re, im: y.im, value: v });
        }
        acc += w * v;
    }
    Ok(acc)
}

/// `E[g(y)]` for `y ~ CN(0, 1)` with a tensor Gauss–Hermite rule.
pub fn expect_complex_gaussian<F: Fn(Complex64) -> f64>(
    g: F,
    rule: &GaussQuadratureRule,
) -> Result<f64> {
    if rule.family != RuleFamily::Hermite {
        return Err(Error::Validation("complex Gaussian expectation needs a Hermite rule".into()));
    }
    let mut acc = 0.0;
    for (&u, &wu) in rule.nodes.iter().zip(&rule.weights) {
        let mut row = 0.0;
        for (&v, &wv) in rule.nodes.iter().zip(&rule.weights) {
            let val = g(Complex64::new(u, v));
            if !val.is_finite() {
                return Err(Error::Integration { re: u, im: v, value: val });
            }
            row += wv * val;
        }
        acc += wu * row;
    }
    Ok(acc)
}

/// `E[g(t)]` for `t ~ Exp(1)` with a Gauss–Laguerre rule of the given order.
pub fn expect_unit_exponential<F: Fn(f64) -> f64>(g: F, order: usize) -> Result<f64> {
    GaussQuadratureRule::laguerre(order)?.integrate(g)
}

/// Truncated square `[-half_width, half_width]²` split into `steps` cells
/// per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    pub half_width: f64,
    pub steps: usize,
}

impl OracleGrid {
    pub fn new(half_width: f64, steps: usize) -> Result<Self> {
        if !(half_width > 0.0) || steps < 64 {
            return Err(Error::Validation(format!(
                "oracle grid needs half_width > 0 and steps ≥ 64, got ({half_width}, {steps})"
            )));
        }
        Ok(OracleGrid { half_width, steps })
    }

    /// Default grid covering `8 + 2·max|x|` with 2048 steps per axis.
    pub fn for_peak(max_abs: f64) -> Self {
        OracleGrid {
            half_width: 8.0 + 2.0 * max_abs,
            steps: 2048,
        }
    }
}

/// Midpoint-rule value of `∫ f_w(y) g(y) dy` over the grid square, where
/// `f_w(y) = e^{-|y|²}/π`. Row sums are accumulated in index order.
pub fn oracle_expect_complex_gaussian<F: Fn(Complex64) -> f64>(g: F, grid: &OracleGrid) -> f64 {
    let h = 2.0 * grid.half_width / grid.steps as f64;
    let coord = |i: usize| -grid.half_width + (i as f64 + 0.5) * h;
    let mut total = 0.0;
    for i in 0..grid.steps {
        let u = coord(i);
        let mut row = 0.0;
        for j in 0..grid.steps {
            let v = coord(j);
            let y = Complex64::new(u, v);
            row += (-(u * u + v * v)).exp() * g(y);
        }
        total += row;
    }
    total * h * h / PI
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial_moment(k: u32) -> f64 {
        // E[u^{2k}] for u ~ N(0, 1/2) is (2k-1)!! / 2^k.
        (1..=k).map(|i| (2 * i - 1) as f64 / 2.0).product()
    }

    #[test]
    fn hermite_weights_normalized() {
        for n in [2, 5, 16, 48, 64] {
            let r = GaussQuadratureRule::hermite(n).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn laguerre_weights_normalized() {
        for n in [2, 7, 32, 96, 256] {
            let r = GaussQuadratureRule::laguerre(n).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn order_below_two_rejected() {
        assert!(GaussQuadratureRule::hermite(1).is_err());
        assert!(Quadrature::new(48, 0).is_err());
    }

    #[test]
    fn complex_gaussian_basic_moments() {
        let q = Quadrature::default();
        assert!((q.expect_complex_gaussian(|_| 1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((q.expect_complex_gaussian(|y| y.norm_sqr()).unwrap() - 1.0).abs() < 1e-12);
        // E|y|⁴ = 2 for CN(0,1).
        assert!((q.expect_complex_gaussian(|y| y.norm_sqr().powi(2)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_gaussian_mgf() {
        // E[exp(2 Re(y c̄))] = exp(|c|²).
        let q = Quadrature::default();
        let c = Complex64::new(0.3, 0.0);
        let v = q.expect_complex_gaussian(|y| (2.0 * (y * c.conj()).re).exp()).unwrap();
        assert!((v - 0.09f64.exp()).abs() < 1e-13);
        assert!((v - 1.0941743).abs() < 1e-7);
        let oracle = oracle_expect_complex_gaussian(
            |y| (2.0 * (y * c.conj()).re).exp(),
            &OracleGrid::for_peak(0.3),
        );
        assert!((v - oracle).abs() < 1e-10);
    }

    #[test]
    fn polynomial_exactness() {
        let n = 8;
        let rule = GaussQuadratureRule::hermite(n).unwrap();
        // total degree up to 2n-1 = 15 in each axis; separable monomials.
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let got = expect_complex_gaussian(|y| y.re.powi(2 * a as i32) * y.im.powi(2 * b as i32), &rule)
                    .unwrap();
                let want = double_factorial_moment(a) * double_factorial_moment(b);
                assert!((got - want).abs() <= 1e-12 * want.max(1.0), "a={a} b={b}: {got} vs {want}");
                let odd = expect_complex_gaussian(|y| y.re.powi(2 * a as i32 + 1) * y.im.powi(2 * b as i32), &rule)
                    .unwrap();
                assert!(odd.abs() <= 1e-12 * want.max(1.0));
            }
        }
    }

    #[test]
    fn laguerre_basic_moments() {
        assert!((expect_unit_exponential(|_| 1.0, 96).unwrap() - 1.0).abs() < 1e-13);
        assert!((expect_unit_exponential(|t| t, 96).unwrap() - 1.0).abs() < 1e-12);
        assert!((expect_unit_exponential(|t| (-t).exp(), 96).unwrap() - 0.5).abs() < 1e-12);
        // E[t^k] = k!
        let r = GaussQuadratureRule::laguerre(12).unwrap();
        let mut fact = 1.0;
        for k in 0..24 {
            if k > 0 {
                fact *= k as f64;
            }
            let got = r.integrate(|t| t.powi(k)).unwrap();
            assert!((got - fact).abs() <= 1e-11 * fact, "k={k}");
        }
    }

    #[test]
    fn laguerre_reproduces_laplace_transform() {
        for order in [64, 96] {
            for a in [0.1, 1.0, 10.0] {
                let got = expect_unit_exponential(|t| (-a * t).exp(), order).unwrap();
                assert!((got - 1.0 / (1.0 + a)).abs() < 1e-10, "order {order} a {a}: {got}");
            }
        }
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let q = Quadrature::new(4, 4).unwrap();
        let err = q.expect_complex_gaussian(|y| if y.re > 0.0 { f64::NAN } else { 1.0 }).unwrap_err();
        assert!(matches!(err, Error::Integration { re, .. } if re > 0.0));
        let err = q.expect_unit_exponential(|t| 1.0 / (t - t)).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }

    #[test]
    fn oracle_basics() {
        let grid = OracleGrid::new(8.0, 2048).unwrap();
        assert!((oracle_expect_complex_gaussian(|_| 1.0, &grid) - 1.0).abs() < 1e-10);
        assert!((oracle_expect_complex_gaussian(|y| y.norm_sqr(), &grid) - 1.0).abs() < 1e-8);
        assert!(OracleGrid::new(8.0, 32).is_err());
        assert!(OracleGrid::new(0.0, 128).is_err());
    }

    #[test]
    fn oracle_refinement_is_monotone() {
        let c = Complex64::new(0.2, -0.4);
        let g = |y: Complex64| (2.0 * (y * c.conj()).re).exp();
        let coarse = oracle_expect_complex_gaussian(g, &OracleGrid::new(9.0, 1024).unwrap());
        let fine = oracle_expect_complex_gaussian(g, &OracleGrid::new(9.0, 2048).unwrap());
        assert!((coarse - fine).abs() < 1e-9);
        assert!((fine - c.norm_sqr().exp()).abs() < 1e-10);
    }
}
