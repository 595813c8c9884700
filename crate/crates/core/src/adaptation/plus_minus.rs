use crate::error::{Error, Result};

use super::{check_step, perturb, BeamVector, FeedbackBit, PerturbationSet, Scheme};

/// Pair `(w+, w-) = normalize(w_k +- beta q_{k mod N})`.
pub fn pm_training(
    w_data: &BeamVector,
    frame_index: u64,
    beta: f64,
    pset: &PerturbationSet,
) -> (BeamVector, BeamVector) {
    check_step(beta);
    assert_eq!(
        pset.scheme(),
        Scheme::PlusMinus,
        "plus/minus needs a plus/minus perturbation set"
    );
    let q = pset.column(frame_index);
    (perturb(w_data, beta, q), perturb(w_data, -beta, q))
}

/// Plus/minus state: the current data weights and the frame counter.
#[derive(Debug, Clone, PartialEq)]
pub struct PmState {
    pub w_data: BeamVector,
    pub frame_index: u64,
}

impl PmState {
    pub fn new(w0: BeamVector) -> Self {
        Self {
            w_data: w0,
            frame_index: 0,
        }
    }

    pub fn perturb(&self, beta: f64, pset: &PerturbationSet) -> (BeamVector, BeamVector) {
        pm_training(&self.w_data, self.frame_index, beta, pset)
    }

    /// Keeps the better half; the bit is set iff minus is strictly better.
    /// The previous data vector is dropped either way.
    pub fn step(
        &self,
        w_plus: BeamVector,
        w_minus: BeamVector,
        j_plus: f64,
        j_minus: f64,
    ) -> Result<(Self, FeedbackBit)> {
        if !(j_plus >= 0.0 && j_minus >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "objectives ({j_plus}, {j_minus}) must be nonnegative"
            )));
        }
        let minus = j_minus > j_plus;
        let next = Self {
            w_data: if minus { w_minus } else { w_plus },
            frame_index: self.frame_index + 1,
        };
        Ok((next, FeedbackBit(minus)))
    }
}
