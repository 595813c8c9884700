use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance of the constraint invariant checks.
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// Magnitudes below this are treated as zero by [`normalize`].
pub const ZERO_TOL: f64 = 1e-12;

/// Relay power constraint imposed on the beamforming weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintKind {
    /// Total relay power fixed: `||w||^2 = 1`.
    SumPower,
    /// Every relay transmits at full power: `|w_i|^2 = 1`.
    PerRelay,
}

impl ConstraintKind {
    pub fn is_satisfied(self, w: &[Complex64]) -> bool {
        match self {
            ConstraintKind::SumPower => (w.iter().map(|x| x.norm_sqr()).sum::<f64>() - 1.0).abs() < CONSTRAINT_TOL,
            ConstraintKind::PerRelay => w.iter().all(|x| (x.norm_sqr() - 1.0).abs() < CONSTRAINT_TOL),
        }
    }
}

/// Complex relay weights `w` together with the constraint they satisfy.
///
/// Relay `i` scales its forwarded signal by `conj(w_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamVector {
    weights: Vec<Complex64>,
    constraint: ConstraintKind,
}

impl BeamVector {
    pub fn new(weights: Vec<Complex64>, constraint: ConstraintKind) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("beam vector must not be empty".into()));
        }
        if !constraint.is_satisfied(&weights) {
            return Err(Error::InvalidArgument(format!(
                "weights violate the {constraint:?} constraint"
            )));
        }
        Ok(Self { weights, constraint })
    }

    pub(crate) fn new_unchecked(weights: Vec<Complex64>, constraint: ConstraintKind) -> Self {
        debug_assert!(constraint.is_satisfied(&weights));
        Self { weights, constraint }
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn constraint(&self) -> ConstraintKind {
        self.constraint
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Inner product `w^H x`.
    pub fn inner(&self, x: &[Complex64]) -> Complex64 {
        debug_assert_eq!(self.weights.len(), x.len());
        self.weights.iter().zip(x).map(|(w, x)| w.conj() * x).sum()
    }

    /// Same vector multiplied by `exp(j phi)`.
    pub fn rotated(&self, phi: f64) -> Self {
        let r = Complex64::from_polar(1.0, phi);
        Self {
            weights: self.weights.iter().map(|w| w * r).collect(),
            constraint: self.constraint,
        }
    }
}

/// Projects `raw` onto the constraint set.
///
/// Sum power divides by the Euclidean norm; per-relay divides each entry by
/// its modulus. Where the divisor vanishes the corresponding entries of
/// `fallback` are used instead (the whole vector for sum power, single
/// entries for per-relay).
pub fn normalize(raw: &[Complex64], constraint: ConstraintKind, fallback: &BeamVector) -> BeamVector {
    debug_assert_eq!(raw.len(), fallback.len());
    debug_assert_eq!(constraint, fallback.constraint());
    let weights = match constraint {
        ConstraintKind::SumPower => {
            let norm = raw.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm < ZERO_TOL {
                return fallback.clone();
            }
            raw.iter().map(|x| x / norm).collect()
        }
        ConstraintKind::PerRelay => raw
            .iter()
            .zip(fallback.weights())
            .map(|(x, fb)| {
                let m = x.norm();
                if m < ZERO_TOL {
                    *fb
                } else {
                    x / m
                }
            })
            .collect(),
    };
    BeamVector::new_unchecked(weights, constraint)
}

/// Initial weights: `[1 ... 1]/sqrt(R)` under sum power, all ones per relay.
pub fn init_weights(num_relays: usize, constraint: ConstraintKind) -> BeamVector {
    assert!(num_relays >= 1, "at least one relay required");
    let v = match constraint {
        ConstraintKind::SumPower => 1.0 / (num_relays as f64).sqrt(),
        ConstraintKind::PerRelay => 1.0,
    };
    BeamVector::new_unchecked(vec![Complex64::new(v, 0.0); num_relays], constraint)
}
