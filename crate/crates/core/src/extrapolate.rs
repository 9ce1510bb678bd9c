//! Limit and slope at zero of a function sampled on a geometric grid.

use crate::error::{Error, Result};

/// Order of the Richardson tableau used for the limit.
pub const RICHARDSON_ORDER: usize = 3;
const GRID_REL_TOL: f64 = 1e-9;

/// Richardson estimates of `f(0)` and `f'(0)` from samples `(b, f(b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSlope {
    pub limit: f64,
    pub slope: f64,
}

/// Extrapolates `f(b) = A + C·b + D·b² + …` to `b = 0`.
///
/// Samples must be strictly positive, strictly decreasing in `b`, with a
/// constant ratio, and at least four of them. The limit comes from an
/// order-3 tableau; the slope from an order-2 tableau applied to
/// `(f(b) − A)/b`. Both use the finest samples.
pub fn fit_limit_and_slope(samples: &[(f64, f64)]) -> Result<LimitSlope> {
    if samples.len() < RICHARDSON_ORDER + 1 {
        return Err(Error::Validation(format!(
            "need at least {} samples, got {}",
            RICHARDSON_ORDER + 1,
            samples.len()
        )));
    }
    if samples.iter().any(|(b, f)| !(*b > 0.0) || !f.is_finite()) {
        return Err(Error::Validation("samples must have b > 0 and finite values".into()));
    }
    let ratio = samples[0].0 / samples[1].0;
    if !(ratio > 1.0) {
        return Err(Error::Validation("grid must be strictly decreasing in b".into()));
    }
    for w in samples.windows(2) {
        let r = w[0].0 / w[1].0;
        if (r - ratio).abs() > GRID_REL_TOL * ratio {
            return Err(Error::Validation(format!(
                "grid is not geometric: ratio {r} differs from {ratio}"
            )));
        }
    }
    let values: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let limit = richardson(&values, ratio, RICHARDSON_ORDER);
    let quotients: Vec<f64> = samples.iter().map(|(b, f)| (f - limit) / b).collect();
    let slope = richardson(&quotients, ratio, RICHARDSON_ORDER - 1);
    Ok(LimitSlope { limit, slope })
}

/// Richardson tableau entry `T[n-1][order]` for values ordered coarse to
/// fine with step ratio `ratio`, assuming an error expansion in integer
/// powers of the step.
pub fn richardson(values: &[f64], ratio: f64, order: usize) -> f64 {
    let order = order.min(values.len() - 1);
    let start = values.len() - 1 - order;
    let mut column: Vec<f64> = values[start..].to_vec();
    for k in 1..=order {
        let factor = ratio.powi(k as i32);
        column = column
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
    }
    column[0]
}
