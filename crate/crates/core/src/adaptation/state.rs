use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{init_weights, BeamVector, ConstraintKind, FeedbackBit, PerturbationSet, PmState, Scheme, TrState};

/// Everything the nodes agree on before adaptation starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptationRule {
    pub scheme: Scheme,
    pub constraint: ConstraintKind,
    pub beta: f64,
    /// Per-frame decay of the stored take/reject objective; 1 disables it.
    pub forgetting_factor: f64,
}

impl AdaptationRule {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step size {} must be nonnegative",
                self.beta
            )));
        }
        if !(self.forgetting_factor > 0.0 && self.forgetting_factor <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "forgetting factor {} must lie in (0, 1]",
                self.forgetting_factor
            )));
        }
        Ok(())
    }

    pub fn perturbation_set(&self, num_relays: usize) -> PerturbationSet {
        PerturbationSet::dft(num_relays, self.scheme)
    }
}

/// Weights used for the training part of a frame.
#[derive(Debug, Clone, PartialEq)]
pub enum Training {
    /// Take/reject: one tested vector for the whole training interval.
    Single(BeamVector),
    /// Plus/minus: `plus` in the first half, `minus` in the second.
    Pair { plus: BeamVector, minus: BeamVector },
}

/// Objective values measured for a [`Training`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainingObjectives {
    Single(f64),
    Pair { plus: f64, minus: f64 },
}

/// Adaptation state of either scheme.
#[derive(Debug, Clone, PartialEq)]
pub enum AdaptationState {
    TakeReject(TrState),
    PlusMinus(PmState),
}

impl AdaptationState {
    /// Starts from `init_weights` with stored objective 0.
    pub fn new(rule: &AdaptationRule, num_relays: usize) -> Result<Self> {
        Self::from_weights(rule, init_weights(num_relays, rule.constraint))
    }

    pub fn from_weights(rule: &AdaptationRule, w0: BeamVector) -> Result<Self> {
        rule.validate()?;
        Ok(match rule.scheme {
            Scheme::TakeReject => Self::TakeReject(TrState::new(w0, rule.forgetting_factor)?),
            Scheme::PlusMinus => Self::PlusMinus(PmState::new(w0)),
        })
    }

    pub fn w_data(&self) -> &BeamVector {
        match self {
            Self::TakeReject(s) => &s.w_data,
            Self::PlusMinus(s) => &s.w_data,
        }
    }

    pub fn frame_index(&self) -> u64 {
        match self {
            Self::TakeReject(s) => s.frame_index,
            Self::PlusMinus(s) => s.frame_index,
        }
    }

    pub fn training(&self, beta: f64, pset: &PerturbationSet) -> Training {
        match self {
            Self::TakeReject(s) => Training::Single(s.perturb(beta, pset)),
            Self::PlusMinus(s) => {
                let (plus, minus) = s.perturb(beta, pset);
                Training::Pair { plus, minus }
            }
        }
    }

    pub fn step(&self, training: Training, objectives: TrainingObjectives) -> Result<(Self, FeedbackBit)> {
        match (self, training, objectives) {
            (Self::TakeReject(s), Training::Single(w), TrainingObjectives::Single(j)) => {
                let (next, bit) = s.step(w, j)?;
                Ok((Self::TakeReject(next), bit))
            }
            (Self::PlusMinus(s), Training::Pair { plus, minus }, TrainingObjectives::Pair { plus: jp, minus: jm }) => {
                let (next, bit) = s.step(plus, minus, jp, jm)?;
                Ok((Self::PlusMinus(next), bit))
            }
            _ => Err(Error::InvalidArgument(
                "training does not match the adaptation scheme".into(),
            )),
        }
    }
}
