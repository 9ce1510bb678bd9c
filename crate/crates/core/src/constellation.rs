//! Finite input alphabets and the bandwidth-parameterized families built
//! from them.
//!
//! Amplitudes are noise-normalized (`N0 = 1`), so a constellation with
//! average energy `p` operates at per-symbol SNR `p`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ q = 1` and on the stored power.
pub const PROB_TOL: f64 = 1e-12;
/// Minimum Euclidean distance between two user-supplied points.
pub const DUPLICATE_TOL: f64 = 1e-12;

/// A discrete input distribution on the complex plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConstellationRepr", into = "ConstellationRepr")]
pub struct Constellation {
    points: Vec<Complex64>,
    probs: Vec<f64>,
    power: f64,
}

/// On-disk form: `{"points": [[re, im], ...], "probs": [...], "power": p}`.
#[derive(Serialize, Deserialize)]
struct ConstellationRepr {
    points: Vec<[f64; 2]>,
    probs: Vec<f64>,
    power: f64,
}

impl TryFrom<ConstellationRepr> for Constellation {
    type Error = Error;

    fn try_from(repr: ConstellationRepr) -> Result<Self> {
        let points = repr
            .points
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let c = Constellation::custom(points, repr.probs)?;
        if (c.power - repr.power).abs() > PROB_TOL * c.power.max(1.0) {
            return Err(Error::Validation(format!(
                "stored power {} disagrees with Σ q|x|² = {}",
                repr.power, c.power
            )));
        }
        Ok(c)
    }
}

impl From<Constellation> for ConstellationRepr {
    fn from(c: Constellation) -> Self {
        ConstellationRepr {
            points: c.points.iter().map(|x| [x.re, x.im]).collect(),
            probs: c.probs,
            power: c.power,
        }
    }
}

impl Constellation {
    /// Equiprobable phase-shift keying with energy `p` per symbol.
    ///
    /// Order 2 is `±√p`; order 4 is `√(p/2)(±1 ± j)`; higher orders place
    /// the points at `√p·e^{2πik/M}`.
    pub fn psk(order: usize, p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("PSK power must be positive, got {p}")));
        }
        let points: Vec<Complex64> = match order {
            2 => {
                let a = p.sqrt();
                vec![Complex64::new(a, 0.0), Complex64::new(-a, 0.0)]
            }
            4 => {
                let a = (p / 2.0).sqrt();
                vec![
                    Complex64::new(a, a),
                    Complex64::new(a, -a),
                    Complex64::new(-a, a),
                    Complex64::new(-a, -a),
                ]
            }
            m if m >= 3 => (0..m)
                .map(|k| Complex64::from_polar(p.sqrt(), 2.0 * PI * k as f64 / m as f64))
                .collect(),
            _ => return Err(Error::Domain(format!("PSK order must be ≥ 2, got {order}"))),
        };
        let n = points.len();
        Ok(Constellation {
            points,
            probs: vec![1.0 / n as f64; n],
            power: p,
        })
    }

    /// Validated constellation from explicit points and probabilities; the
    /// power is computed as `Σ q|x|²`.
    pub fn custom(points: Vec<Complex64>, probs: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Validation("alphabet is empty".into()));
        }
        if points.len() != probs.len() {
            return Err(Error::Validation(format!(
                "{} points but {} probabilities",
                points.len(),
                probs.len()
            )));
        }
        if let Some(x) = points.iter().find(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::Validation(format!("non-finite point {x}")));
        }
        if let Some(q) = probs.iter().find(|q| !(**q >= 0.0) || !q.is_finite()) {
            return Err(Error::Validation(format!("invalid probability {q}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::Validation(format!("probabilities sum to {total}, not 1")));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if (points[i] - points[j]).norm() <= DUPLICATE_TOL {
                    return Err(Error::Validation(format!(
                        "duplicate points {} and {} (indices {i}, {j})",
                        points[i], points[j]
                    )));
                }
            }
        }
        let power = points.iter().zip(&probs).map(|(x, q)| q * x.norm_sqr()).sum();
        Ok(Constellation { points, probs, power })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Average energy per complex symbol.
    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest symbol modulus.
    pub fn max_abs(&self) -> f64 {
        self.points.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// True when every symbol in the support has energy `p` (relative `tol`).
    pub fn is_equal_energy(&self, tol: f64) -> bool {
        let scale = self.power.max(f64::MIN_POSITIVE);
        self.points
            .iter()
            .zip(&self.probs)
            .filter(|(_, &q)| q > 0.0)
            .all(|(x, _)| (x.norm_sqr() - self.power).abs() <= tol * scale)
    }

    /// The same distribution with every amplitude multiplied by `gain`
    /// (power scales by `gain²`). Used for fading gains and family scaling.
    pub fn scaled(&self, gain: f64) -> Constellation {
        Constellation {
            points: self.points.iter().map(|x| x * gain).collect(),
            probs: self.probs.clone(),
            power: self.power * gain * gain,
        }
    }

    /// True iff every point `x` with mass `q` has a mirror `−x` carrying the
    /// same mass, both within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.points.iter().zip(&self.probs).all(|(x, q)| {
            self.points
                .iter()
                .zip(&self.probs)
                .any(|(y, r)| (x + y).norm() <= tol && (q - r).abs() <= tol)
        })
    }

    /// `E[exp(2 Re(x₁ x̄₂)/(1+ρ)²)]` for i.i.d. `x₁, x₂` drawn from the
    /// constellation, as an exact double sum.
    pub fn pairwise_moment(&self, rho: f64) -> f64 {
        let scale = 2.0 / ((1.0 + rho) * (1.0 + rho));
        let mut total = 0.0;
        for (x1, q1) in self.points.iter().zip(&self.probs) {
            for (x2, q2) in self.points.iter().zip(&self.probs) {
                total += q1 * q2 * (scale * (x1 * x2.conj()).re).exp();
            }
        }
        total
    }
}

/// Peak-amplitude envelope `max|x| ≤ k_m·p^peak_exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakConstraint {
    pub k_m: f64,
    pub peak_exponent: f64,
}

impl PeakConstraint {
    pub fn new(k_m: f64, peak_exponent: f64) -> Result<Self> {
        if !(k_m > 0.0) || !(peak_exponent > 0.0) {
            return Err(Error::Validation(format!(
                "peak constraint needs k_m > 0 and exponent > 0, got ({k_m}, {peak_exponent})"
            )));
        }
        Ok(PeakConstraint { k_m, peak_exponent })
    }

    /// Largest admissible amplitude at per-symbol power `p`.
    pub fn bound(&self, p: f64) -> f64 {
        self.k_m * p.powf(self.peak_exponent)
    }
}

impl Default for PeakConstraint {
    fn default() -> Self {
        PeakConstraint {
            k_m: 10.0,
            peak_exponent: 0.25,
        }
    }
}

/// Generator signature for [`SchemeKind::Generator`].
pub type ConstellationFn = Arc<dyn Fn(f64) -> Result<Constellation> + Send + Sync>;

/// How a signaling family produces its alphabet at a given per-symbol power.
#[derive(Clone)]
pub enum SchemeKind {
    Bpsk,
    Qpsk,
    /// Equiprobable `M`-point ring.
    Psk(usize),
    /// `{0, √(p/on_prob)}` with mass `on_prob` on the nonzero point.
    OnOff { on_prob: f64 },
    /// A fixed template rescaled to power `p`.
    Scaled(Constellation),
    /// Arbitrary user rule; must return a constellation of power `p`.
    Generator(ConstellationFn),
}

impl fmt::Debug for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::Bpsk => write!(f, "Bpsk"),
            SchemeKind::Qpsk => write!(f, "Qpsk"),
            SchemeKind::Psk(m) => write!(f, "Psk({m})"),
            SchemeKind::OnOff { on_prob } => write!(f, "OnOff {{ on_prob: {on_prob} }}"),
            SchemeKind::Scaled(c) => write!(f, "Scaled({} points)", c.len()),
            SchemeKind::Generator(_) => write!(f, "Generator(..)"),
        }
    }
}

/// A rule producing a constellation for every per-symbol power `p = P/B`.
#[derive(Debug, Clone)]
pub struct SignalingScheme {
    pub kind: SchemeKind,
    pub peak: PeakConstraint,
}

impl SignalingScheme {
    pub fn new(kind: SchemeKind) -> Self {
        SignalingScheme {
            kind,
            peak: PeakConstraint::default(),
        }
    }

    pub fn bpsk() -> Self {
        Self::new(SchemeKind::Bpsk)
    }

    pub fn qpsk() -> Self {
        Self::new(SchemeKind::Qpsk)
    }

    pub fn with_peak(mut self, peak: PeakConstraint) -> Self {
        self.peak = peak;
        self
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SchemeKind::Bpsk => "bpsk".into(),
            SchemeKind::Qpsk => "qpsk".into(),
            SchemeKind::Psk(m) => format!("psk{m}"),
            SchemeKind::OnOff { on_prob } => format!("onoff({on_prob})"),
            SchemeKind::Scaled(_) => "custom".into(),
            SchemeKind::Generator(_) => "generator".into(),
        }
    }

    /// The alphabet used at per-symbol power `p`.
    pub fn constellation(&self, p: f64) -> Result<Constellation> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("per-symbol power must be positive, got {p}")));
        }
        match &self.kind {
            SchemeKind::Bpsk => Constellation::psk(2, p),
            SchemeKind::Qpsk => Constellation::psk(4, p),
            SchemeKind::Psk(m) => Constellation::psk(*m, p),
            SchemeKind::OnOff { on_prob } => {
                let q = *on_prob;
                if !(q > 0.0 && q < 1.0) {
                    return Err(Error::Validation(format!("on-off mass must be in (0,1), got {q}")));
                }
                Ok(Constellation {
                    points: vec![Complex64::new(0.0, 0.0), Complex64::new((p / q).sqrt(), 0.0)],
                    probs: vec![1.0 - q, q],
                    power: p,
                })
            }
            SchemeKind::Scaled(template) => {
                if !(template.power() > 0.0) {
                    return Err(Error::Validation("template constellation has zero power".into()));
                }
                let mut c = template.scaled((p / template.power()).sqrt());
                c.power = p;
                Ok(c)
            }
            SchemeKind::Generator(f) => {
                let c = f(p)?;
                if (c.power() - p).abs() > PROB_TOL * p.max(1.0) {
                    return Err(Error::Validation(format!(
                        "generator returned power {} for p = {p}",
                        c.power()
                    )));
                }
                Ok(c)
            }
        }
    }

    /// Whether the alphabet at power `p` respects the peak envelope.
    pub fn check_peak(&self, p: f64) -> bool {
        match self.constellation(p) {
            Ok(c) => c.max_abs() <= self.peak.bound(p) * (1.0 + 1e-12),
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpsk_unit_power() {
        let c = Constellation::psk(2, 1.0).unwrap();
        assert_eq!(c.points(), &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert_eq!(c.probs(), &[0.5, 0.5]);
        assert_eq!(c.power(), 1.0);
    }

    #[test]
    fn qpsk_moduli_and_power() {
        let c = Constellation::psk(4, 0.5).unwrap();
        for x in c.points() {
            assert!((x.norm() - 0.5f64.sqrt()).abs() < 1e-15);
        }
        let c = Constellation::psk(4, 2.0).unwrap();
        let e: f64 = c.points().iter().zip(c.probs()).map(|(x, q)| q * x.norm_sqr()).sum();
        assert!((e - 2.0).abs() < 1e-15);
    }

    #[test]
    fn psk_rejects_bad_power() {
        assert!(matches!(Constellation::psk(2, 0.0), Err(Error::Domain(_))));
        assert!(matches!(Constellation::psk(4, -1.0), Err(Error::Domain(_))));
        assert!(Constellation::psk(1, 1.0).is_err());
    }

    #[test]
    fn custom_power() {
        let c = Constellation::custom(
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![0.75, 0.25],
        )
        .unwrap();
        assert!((c.power() - 1.0).abs() < 1e-15);

        let single = Constellation::custom(vec![Complex64::new(1.0, 0.0)], vec![1.0]).unwrap();
        assert_eq!(single.power(), 1.0);
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn custom_validation() {
        let pm = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        assert!(matches!(
            Constellation::custom(pm.clone(), vec![0.6, 0.6]),
            Err(Error::Validation(_))
        ));
        assert!(Constellation::custom(pm.clone(), vec![1.5, -0.5]).is_err());
        assert!(Constellation::custom(pm, vec![1.0]).is_err());
        assert!(Constellation::custom(vec![], vec![]).is_err());
        let dup = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 1e-13)];
        assert!(Constellation::custom(dup, vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn symmetry_predicate() {
        assert!(Constellation::psk(2, 1.0).unwrap().is_symmetric(1e-12));
        assert!(Constellation::psk(4, 0.3).unwrap().is_symmetric(1e-12));
        let onoff = Constellation::custom(
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![0.75, 0.25],
        )
        .unwrap();
        assert!(!onoff.is_symmetric(1e-12));
    }

    #[test]
    fn peak_checks() {
        let qpsk = SignalingScheme::qpsk().with_peak(PeakConstraint::new(2.0, 0.5).unwrap());
        assert!(qpsk.check_peak(0.25));
        let bpsk = SignalingScheme::bpsk().with_peak(PeakConstraint::new(1.0, 1.0).unwrap());
        assert!(!bpsk.check_peak(0.25));
        let edge = SignalingScheme::bpsk().with_peak(PeakConstraint::new(1.0, 0.5).unwrap());
        for p in [1e-6, 1e-3, 0.37, 1.0, 42.0] {
            assert!(edge.check_peak(p), "p = {p}");
        }
        assert!(PeakConstraint::new(0.0, 1.0).is_err());
        assert!(PeakConstraint::new(1.0, -1.0).is_err());
    }

    #[test]
    fn pairwise_moment_values() {
        let bpsk = Constellation::psk(2, 0.5).unwrap();
        assert!((bpsk.pairwise_moment(1.0) - 0.25f64.cosh()).abs() < 1e-15);
        assert!((bpsk.pairwise_moment(1.0) - 1.0314131).abs() < 1e-7);

        // Re(x₁x̄₂) over the 16 QPSK pairs takes ±p four times each and 0 eight times.
        let qpsk = Constellation::psk(4, 0.5).unwrap();
        let enumerated = (4.0 * (0.25f64).exp() + 4.0 * (-0.25f64).exp() + 8.0) / 16.0;
        assert!((qpsk.pairwise_moment(1.0) - enumerated).abs() < 1e-15);
        assert!((qpsk.pairwise_moment(1.0) - 1.0157065).abs() < 1e-7);

        let tiny = Constellation::psk(4, 1e-14).unwrap();
        assert!((tiny.pairwise_moment(0.3) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn scheme_families() {
        let onoff = SignalingScheme::new(SchemeKind::OnOff { on_prob: 0.25 });
        let c = onoff.constellation(0.1).unwrap();
        assert!((c.power() - 0.1).abs() < 1e-15);
        assert!(!c.is_symmetric(1e-12));
        assert!(!c.is_equal_energy(1e-9));

        let template = Constellation::psk(8, 3.0).unwrap();
        let scaled = SignalingScheme::new(SchemeKind::Scaled(template));
        let c = scaled.constellation(0.2).unwrap();
        assert!((c.max_abs() - 0.2f64.sqrt()).abs() < 1e-15);
        assert!(c.is_equal_energy(1e-12));

        let bad = SignalingScheme::new(SchemeKind::Generator(Arc::new(|_p| Constellation::psk(2, 1.0))));
        assert!(bad.constellation(0.5).is_err());
        assert!(bad.constellation(1.0).is_ok());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let c = Constellation::psk(4, 0.7).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.starts_with("{\"points\":[["));
        let back: Constellation = serde_json::from_str(&text).unwrap();
        assert_eq!(back.points(), c.points());
        assert_eq!(back.probs(), c.probs());

        let wrong_power = r#"{"points": [[0,0],[2,0]], "probs": [0.75, 0.25], "power": 2.0}"#;
        assert!(serde_json::from_str::<Constellation>(wrong_power).is_err());
        let ok = r#"{"points": [[0,0],[2,0]], "probs": [0.75, 0.25], "power": 1.0}"#;
        assert_eq!(serde_json::from_str::<Constellation>(ok).unwrap().power(), 1.0);
    }
}
