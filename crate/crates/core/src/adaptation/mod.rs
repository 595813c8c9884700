//! Beamforming weights, deterministic perturbation sets and the two
//! feedback-driven adaptation rules.
//!
//! Every frame the relays forward training symbols with perturbed weights
//! and data symbols with the current weights. The destination answers with
//! one feedback bit, from which every relay can recompute the next weight
//! vector on its own because the perturbation set is deterministic and
//! shared.

mod beam;
mod perturbation;
mod plus_minus;
mod state;
mod take_reject;

pub use beam::{init_weights, normalize, BeamVector, ConstraintKind, CONSTRAINT_TOL, ZERO_TOL};
pub use perturbation::{dft_matrix, PerturbationSet, Scheme};
pub use plus_minus::{pm_training, PmState};
pub use state::{AdaptationRule, AdaptationState, Training, TrainingObjectives};
pub use take_reject::{tr_training, TrState};

use num_complex::Complex64;

/// One bit of feedback from the destination.
///
/// For take/reject a set bit means "take the tested vector"; for
/// plus/minus it means "the minus perturbation won".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FeedbackBit(pub bool);

impl FeedbackBit {
    pub fn is_set(self) -> bool {
        self.0
    }
}

impl From<FeedbackBit> for u8 {
    fn from(b: FeedbackBit) -> u8 {
        b.0 as u8
    }
}

/// `normalize(w + scale * q)` with `w` as fallback.
pub(crate) fn perturb(w: &BeamVector, scale: f64, q: &[Complex64]) -> BeamVector {
    debug_assert_eq!(w.len(), q.len());
    let raw: Vec<Complex64> = w.weights().iter().zip(q).map(|(w, q)| w + q * scale).collect();
    normalize(&raw, w.constraint(), w)
}

fn check_step(beta: f64) {
    assert!(
        beta.is_finite() && beta >= 0.0,
        "step size must be finite and nonnegative, got {beta}"
    );
}
