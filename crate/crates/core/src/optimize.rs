//! One-dimensional maximization and root bracketing.
//!
//! The objectives in this crate (`−ρR + E_o(ρ)`, `−pz/ρ + E_o(ρ)/ρ`,
//! `E_o` in `β`) are concave or unimodal on their intervals. A coarse grid
//! locates the best cell, then golden-section search refines inside the two
//! neighbouring cells.

use crate::error::{Error, Result};

pub const GRID_POINTS: usize = 33;
pub const ARG_TOL: f64 = 1e-10;
const MAX_ITER: usize = 200;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
}

/// Maximizes `f` on `[lo, hi]`. Values of `−∞` are allowed (e.g. at an
/// excluded endpoint); NaN is an error.
pub fn maximize<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64) -> Result<Maximum> {
    if !(lo <= hi) {
        return Err(Error::Optimizer {
            lo,
            hi,
            iterations: 0,
            reason: "empty interval".into(),
        });
    }
    if lo == hi {
        return Ok(Maximum { arg: lo, value: f(lo)? });
    }
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_nan() {
            return Err(Error::Optimizer {
                lo,
                hi,
                iterations: 0,
                reason: format!("objective is NaN at {x}"),
            });
        }
        Ok(v)
    };

    let n = GRID_POINTS;
    let step = (hi - lo) / (n - 1) as f64;
    let mut best = Maximum { arg: lo, value: f64::NEG_INFINITY };
    let mut best_idx = 0;
    for i in 0..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let v = eval(x)?;
        if v > best.value {
            best = Maximum { arg: x, value: v };
            best_idx = i;
        }
    }
    if best.value == f64::NEG_INFINITY {
        return Err(Error::Optimizer {
            lo,
            hi,
            iterations: n,
            reason: "objective is -inf on the whole grid".into(),
        });
    }

    let mut a = lo + step * best_idx.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_idx + 1) as f64).min(hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut iterations = 0;
    while (b - a) > ARG_TOL * (1.0 + a.abs().max(b.abs())) {
        if iterations >= MAX_ITER {
            return Err(Error::Optimizer {
                lo: a,
                hi: b,
                iterations,
                reason: "bracket did not shrink below tolerance".into(),
            });
        }
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.value {
            best = Maximum { arg: x, value: v };
        }
    }
    Ok(best)
}

/// Root of a decreasing function on `[lo, hi]` by bisection, to absolute
/// width `tol`. Requires `f(lo) ≥ 0 ≥ f(hi)`.
pub fn bisect_decreasing<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(f_lo >= 0.0 && f_hi <= 0.0) {
        return Err(Error::Optimizer {
            lo,
            hi,
            iterations: 0,
            reason: format!("root not bracketed: f(lo) = {f_lo}, f(hi) = {f_hi}"),
        });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations >= MAX_ITER {
            return Err(Error::Optimizer {
                lo,
                hi,
                iterations,
                reason: "bisection did not converge".into(),
            });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concave_parabola() {
        let m = maximize(|x| Ok(-(x - 0.3) * (x - 0.3) + 2.0), 0.0, 1.0).unwrap();
        assert!((m.arg - 0.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn boundary_maximum_is_exact() {
        let m = maximize(Ok, 0.0, 1.0).unwrap();
        assert_eq!(m.arg, 1.0);
        let m = maximize(|x| Ok(-x), 0.0, 1.0).unwrap();
        assert_eq!(m.arg, 0.0);
    }

    #[test]
    fn excluded_endpoint() {
        // −0.1/ρ + 1/(1+ρ) peaks at √z/(1−√z).
        let z: f64 = 0.1;
        let m = maximize(
            |r| Ok(if r == 0.0 { f64::NEG_INFINITY } else { -z / r + 1.0 / (1.0 + r) }),
            0.0,
            1.0,
        )
        .unwrap();
        assert!((m.arg - z.sqrt() / (1.0 - z.sqrt())).abs() < 1e-6);
        assert!((m.value - (1.0 - z.sqrt()).powi(2)).abs() < 1e-13);
    }

    #[test]
    fn nan_is_reported() {
        assert!(maximize(|x| Ok(if x > 0.5 { f64::NAN } else { x }), 0.0, 1.0).is_err());
        assert!(maximize(|_| Ok(1.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn bisection() {
        let r = bisect_decreasing(|x| Ok(0.25 - x * x), 0.0, 1.0, 1e-14).unwrap();
        assert!((r - 0.5).abs() < 1e-13);
        assert!(bisect_decreasing(Ok, 0.0, 1.0, 1e-9).is_err());
    }
}
