//! CSV and JSON serialization of curves and reports.
//!
//! Floats are written with Rust's shortest round-trip representation, so
//! identical inputs give byte-identical files.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fading::{ExponentPoint, FadingCurve};
use crate::wideband::{SeCurve, WidebandCurve};

pub const RATE_CURVE_HEADER: &str = "b,inv_b,B,rate_nats_per_s,rho_opt";
pub const SE_HEADER: &str = "ebn0_db,se_bits_s_hz,B";
pub const FADING_CURVE_HEADER: &str = "inv_wc,wc,rate_nats_per_s,rho_opt";
pub const EXPONENT_CURVE_HEADER: &str = "rate_nats_per_s,exponent,rho_opt";

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn csv<const N: usize>(header: &str, rows: impl Iterator<Item = [f64; N]>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

pub fn rate_curve_csv(curve: &WidebandCurve) -> String {
    csv(
        RATE_CURVE_HEADER,
        curve.samples.iter().map(|s| {
            let inv = 1.0 / s.b;
            [s.b, inv, inv, s.rate_nats_per_sec, s.rho_opt]
        }),
    )
}

pub fn se_csv(curve: &SeCurve) -> String {
    csv(
        SE_HEADER,
        curve.points.iter().map(|p| [p.ebn0_db, p.se_bits_s_hz, p.bandwidth]),
    )
}

pub fn fading_curve_csv(curve: &FadingCurve) -> String {
    csv(
        FADING_CURVE_HEADER,
        curve
            .samples
            .iter()
            .map(|s| [1.0 / s.w_c, s.w_c, s.rate_nats_per_sec, s.rho_opt]),
    )
}

pub fn exponent_curve_csv(points: &[ExponentPoint]) -> String {
    csv(
        EXPONENT_CURVE_HEADER,
        points.iter().map(|p| [p.rate, p.exponent, p.rho_opt]),
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Validation(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}
