//! Error exponents of finite-alphabet signaling over wideband channels.
//!
//! The crate evaluates Gallager's `E_o` function for discrete constellations
//! on the unit-noise complex AWGN channel and on the coherent Rayleigh
//! doubly-block-fading channel, and builds on it:
//!
//! * [`gallager`]: `E_o` with power-constraint parameter optimization, the
//!   random-coding and sphere-packing exponents, critical rate, Kuhn–Tucker
//!   diagnostics and mutual information.
//! * [`wideband`]: the largest rate meeting an exponent constraint `E ≥ Pz`
//!   as a function of inverse bandwidth, its `B → ∞` limit and slope, and the
//!   spectral-efficiency / energy-per-bit trade-off.
//! * [`fading`]: the same questions for block fading with coherence
//!   dimension `D = W_c·T_c`, plus the closed-form wideband limits.
//! * [`verify`]: the numerical acceptance suite used by the `verify` CLI
//!   command and by the `acceptance` test target.
//!
//! All quantities use natural logarithms and a noise spectral density of 1.

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constellation;
pub mod error;
pub mod extrapolate;
pub mod fading;
pub mod gallager;
pub mod optimize;
pub mod output;
pub mod quadrature;
pub mod verify;
pub mod wideband;

pub use constellation::{Constellation, PeakConstraint, SchemeKind, SignalingScheme};
pub use error::{Error, Result};
pub use quadrature::{GaussQuadratureRule, OracleGrid, Quadrature};
