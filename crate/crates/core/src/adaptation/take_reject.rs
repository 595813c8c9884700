use crate::error::{Error, Result};

use super::{check_step, perturb, BeamVector, FeedbackBit, PerturbationSet, Scheme};

/// Tested vector of frame `k`: `normalize(w_k + beta q_{k mod N})`.
pub fn tr_training(w_data: &BeamVector, frame_index: u64, beta: f64, pset: &PerturbationSet) -> BeamVector {
    check_step(beta);
    assert_eq!(
        pset.scheme(),
        Scheme::TakeReject,
        "take/reject needs a take/reject perturbation set"
    );
    perturb(w_data, beta, pset.column(frame_index))
}

/// Destination-side take/reject state.
#[derive(Debug, Clone, PartialEq)]
pub struct TrState {
    pub w_data: BeamVector,
    /// Objective value of `w_data` as last measured, decayed by the
    /// forgetting factor every frame.
    pub best_objective: f64,
    pub frame_index: u64,
    pub forgetting_factor: f64,
}

impl TrState {
    /// Fresh state with stored objective 0.
    pub fn new(w0: BeamVector, forgetting_factor: f64) -> Result<Self> {
        if !(forgetting_factor > 0.0 && forgetting_factor <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "forgetting factor {forgetting_factor} must lie in (0, 1]"
            )));
        }
        Ok(Self {
            w_data: w0,
            best_objective: 0.0,
            frame_index: 0,
            forgetting_factor,
        })
    }

    pub fn perturb(&self, beta: f64, pset: &PerturbationSet) -> BeamVector {
        tr_training(&self.w_data, self.frame_index, beta, pset)
    }

    /// Compares the tested objective `j1` against the (decayed) stored one.
    ///
    /// The bit is set iff `j1` is strictly larger; ties reject.
    pub fn step(&self, w_tilde: BeamVector, j1: f64) -> Result<(Self, FeedbackBit)> {
        if j1.is_nan() || j1 < 0.0 {
            return Err(Error::InvalidArgument(format!("objective {j1} must be nonnegative")));
        }
        let stored = self.forgetting_factor * self.best_objective;
        let take = j1 > stored;
        let next = if take {
            Self {
                w_data: w_tilde,
                best_objective: j1,
                frame_index: self.frame_index + 1,
                forgetting_factor: self.forgetting_factor,
            }
        } else {
            Self {
                w_data: self.w_data.clone(),
                best_objective: stored,
                frame_index: self.frame_index + 1,
                forgetting_factor: self.forgetting_factor,
            }
        };
        Ok((next, FeedbackBit(take)))
    }
}
