//! Birth/death handling of relays.
//!
//! Relays never talk to each other. The destination keeps the registry of
//! active relays and broadcasts every change; each relay applies the same
//! broadcast to its own copy of the registry and of the full weight vector,
//! so all nodes stay consistent.
//!
//! Wire format (bits, most significant first):
//!
//! ```text
//! death: 0 | index (ceil(log2 Rmax) bits, big-endian)
//! birth: 1 | activity bitmap (Rmax bits, relay 0 first)
//! ```
//!
//! A death drops the relay's coordinate from the weight vector (sum-power
//! weights are renormalized) and adaptation continues. A birth restarts the
//! adaptation under the sum constraint; under the per-relay constraint the
//! newcomer simply starts with weight 1.

use num_complex::Complex64;

use crate::adaptation::{
    init_weights, normalize, pm_training, tr_training, AdaptationRule, AdaptationState, BeamVector, ConstraintKind,
    FeedbackBit, PerturbationSet, PmState, Scheme, TrState, Training, TrainingObjectives,
};
use crate::error::{Error, Result};

/// Which of the `Rmax` relay slots are active.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelayRegistry {
    active: Vec<bool>,
}

/// Broadcast announcing a membership change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipMessage {
    Death { index: usize },
    Birth { bitmap: Vec<bool> },
}

impl RelayRegistry {
    pub fn new(max_relays: usize, active: &[usize]) -> Result<Self> {
        if max_relays == 0 {
            return Err(Error::InvalidParameter("Rmax must be at least 1".into()));
        }
        let mut bitmap = vec![false; max_relays];
        for &i in active {
            if i >= max_relays {
                return Err(Error::InvalidArgument(format!("relay {i} exceeds Rmax={max_relays}")));
            }
            bitmap[i] = true;
        }
        Self::from_bitmap(bitmap)
    }

    pub fn from_bitmap(active: Vec<bool>) -> Result<Self> {
        if !active.iter().any(|&a| a) {
            return Err(Error::ProtocolViolation("at least one relay must stay active".into()));
        }
        Ok(Self { active })
    }

    pub fn max_relays(&self) -> usize {
        self.active.len()
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active.get(i).copied().unwrap_or(false)
    }

    pub fn num_active(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    /// Active relay indices in increasing order; this is the coordinate
    /// order of every weight vector.
    pub fn active_indices(&self) -> Vec<usize> {
        (0..self.active.len()).filter(|&i| self.active[i]).collect()
    }

    /// Coordinate of relay `i` in the weight vector.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.is_active(i)
            .then(|| self.active[..i].iter().filter(|&&a| a).count())
    }

    pub fn bitmap(&self) -> &[bool] {
        &self.active
    }

    /// Relay `i0` leaves.
    pub fn apply_death(&self, i0: usize) -> Result<(Self, MembershipMessage)> {
        if !self.is_active(i0) {
            return Err(Error::ProtocolViolation(format!("relay {i0} is not active")));
        }
        if self.num_active() < 2 {
            return Err(Error::ProtocolViolation(format!("relay {i0} is the last active relay")));
        }
        let mut active = self.active.clone();
        active[i0] = false;
        Ok((Self { active }, MembershipMessage::Death { index: i0 }))
    }

    /// Relay `i_new` joins.
    pub fn apply_birth(&self, i_new: usize) -> Result<(Self, MembershipMessage)> {
        if i_new >= self.max_relays() {
            return Err(Error::ProtocolViolation(format!(
                "relay {i_new} exceeds Rmax={}",
                self.max_relays()
            )));
        }
        if self.active[i_new] {
            return Err(Error::ProtocolViolation(format!("relay {i_new} is already active")));
        }
        let mut active = self.active.clone();
        active[i_new] = true;
        let msg = MembershipMessage::Birth { bitmap: active.clone() };
        Ok((Self { active }, msg))
    }

    /// Applies a received broadcast.
    pub fn apply_message(&self, msg: &MembershipMessage) -> Result<Self> {
        match msg {
            MembershipMessage::Death { index } => Ok(self.apply_death(*index)?.0),
            MembershipMessage::Birth { bitmap } => {
                if bitmap.len() != self.max_relays() {
                    return Err(Error::ProtocolViolation("bitmap width differs from Rmax".into()));
                }
                Self::from_bitmap(bitmap.clone())
            }
        }
    }
}

/// Width of a relay index field, `ceil(log2(Rmax))`.
pub fn index_width(max_relays: usize) -> usize {
    assert!(max_relays >= 1);
    (usize::BITS - (max_relays - 1).leading_zeros()) as usize
}

pub fn encode_message(msg: &MembershipMessage, max_relays: usize) -> Result<Vec<bool>> {
    match msg {
        MembershipMessage::Death { index } => {
            if *index >= max_relays {
                return Err(Error::InvalidArgument(format!(
                    "index {index} exceeds Rmax={max_relays}"
                )));
            }
            let width = index_width(max_relays);
            let mut bits = Vec::with_capacity(1 + width);
            bits.push(false);
            bits.extend((0..width).rev().map(|b| (index >> b) & 1 == 1));
            Ok(bits)
        }
        MembershipMessage::Birth { bitmap } => {
            if bitmap.len() != max_relays {
                return Err(Error::InvalidArgument(format!(
                    "bitmap of {} bits for Rmax={max_relays}",
                    bitmap.len()
                )));
            }
            let mut bits = Vec::with_capacity(1 + max_relays);
            bits.push(true);
            bits.extend_from_slice(bitmap);
            Ok(bits)
        }
    }
}

pub fn decode_message(bits: &[bool], max_relays: usize) -> Result<MembershipMessage> {
    let (&kind, payload) = bits
        .split_first()
        .ok_or_else(|| Error::Decode("empty message".into()))?;
    if !kind {
        let width = index_width(max_relays);
        if payload.len() != width {
            return Err(Error::Decode(format!(
                "death payload has {} bits, expected {width}",
                payload.len()
            )));
        }
        let index = payload.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        if index >= max_relays {
            return Err(Error::Decode(format!("index {index} exceeds Rmax={max_relays}")));
        }
        Ok(MembershipMessage::Death { index })
    } else {
        if payload.len() != max_relays {
            return Err(Error::Decode(format!(
                "birth payload has {} bits, expected {max_relays}",
                payload.len()
            )));
        }
        if !payload.iter().any(|&b| b) {
            return Err(Error::Decode("birth bitmap has no active relay".into()));
        }
        Ok(MembershipMessage::Birth {
            bitmap: payload.to_vec(),
        })
    }
}

/// Drops coordinate `pos`; sum-power weights are renormalized.
pub fn exclude_coordinate(w: &BeamVector, pos: usize) -> BeamVector {
    let mut raw = w.weights().to_vec();
    raw.remove(pos);
    let fallback = init_weights(raw.len(), w.constraint());
    normalize(&raw, w.constraint(), &fallback)
}

/// Adds a coordinate with weight 1 at `pos` (per-relay constraint only).
pub fn admit_coordinate(w: &BeamVector, pos: usize) -> BeamVector {
    assert_eq!(w.constraint(), ConstraintKind::PerRelay);
    let mut raw = w.weights().to_vec();
    raw.insert(pos, Complex64::new(1.0, 0.0));
    normalize(
        &raw,
        ConstraintKind::PerRelay,
        &init_weights(raw.len(), ConstraintKind::PerRelay),
    )
}

/// Destination side: registry plus the adaptation state driven by the
/// measured objectives.
#[derive(Debug, Clone)]
pub struct DestinationController {
    rule: AdaptationRule,
    registry: RelayRegistry,
    state: AdaptationState,
    pset: PerturbationSet,
}

impl DestinationController {
    pub fn new(rule: AdaptationRule, registry: RelayRegistry) -> Result<Self> {
        let r = registry.num_active();
        Ok(Self {
            state: AdaptationState::new(&rule, r)?,
            pset: rule.perturbation_set(r),
            rule,
            registry,
        })
    }

    pub fn registry(&self) -> &RelayRegistry {
        &self.registry
    }

    pub fn state(&self) -> &AdaptationState {
        &self.state
    }

    pub fn training(&self) -> Training {
        self.state.training(self.rule.beta, &self.pset)
    }

    /// Runs one frame: evaluates the training weights with `evaluate` and
    /// returns the feedback bit to broadcast.
    pub fn run_frame(&mut self, mut evaluate: impl FnMut(&BeamVector) -> f64) -> Result<FeedbackBit> {
        let training = self.training();
        let objectives = match &training {
            Training::Single(w) => TrainingObjectives::Single(evaluate(w)),
            Training::Pair { plus, minus } => TrainingObjectives::Pair {
                plus: evaluate(plus),
                minus: evaluate(minus),
            },
        };
        let (next, bit) = self.state.step(training, objectives)?;
        self.state = next;
        Ok(bit)
    }

    /// Relay `i0` reported that it leaves.
    pub fn relay_died(&mut self, i0: usize) -> Result<MembershipMessage> {
        let pos = self.registry.position(i0);
        let (registry, msg) = self.registry.apply_death(i0)?;
        let pos = pos.expect("active relay has a position");
        self.state = match &self.state {
            AdaptationState::TakeReject(s) => AdaptationState::TakeReject(TrState {
                w_data: exclude_coordinate(&s.w_data, pos),
                ..s.clone()
            }),
            AdaptationState::PlusMinus(s) => AdaptationState::PlusMinus(PmState {
                w_data: exclude_coordinate(&s.w_data, pos),
                frame_index: s.frame_index,
            }),
        };
        self.registry = registry;
        self.pset = self.rule.perturbation_set(self.registry.num_active());
        Ok(msg)
    }

    /// Relay `i_new` asked to join.
    pub fn relay_born(&mut self, i_new: usize) -> Result<MembershipMessage> {
        let (registry, msg) = self.registry.apply_birth(i_new)?;
        let r = registry.num_active();
        self.state = match self.rule.constraint {
            ConstraintKind::SumPower => AdaptationState::new(&self.rule, r)?,
            ConstraintKind::PerRelay => {
                let pos = registry.position(i_new).expect("newborn relay is active");
                // The newcomer cannot know the frame count, so the
                // perturbation cycle restarts everywhere.
                match &self.state {
                    AdaptationState::TakeReject(s) => AdaptationState::TakeReject(TrState {
                        w_data: admit_coordinate(&s.w_data, pos),
                        frame_index: 0,
                        ..s.clone()
                    }),
                    AdaptationState::PlusMinus(s) => AdaptationState::PlusMinus(PmState {
                        w_data: admit_coordinate(&s.w_data, pos),
                        frame_index: 0,
                    }),
                }
            }
        };
        self.registry = registry;
        self.pset = self.rule.perturbation_set(r);
        Ok(msg)
    }
}

/// Relay side: knows its identity, the shared rule and the broadcasts, and
/// reconstructs the full weight vector from feedback bits alone.
#[derive(Debug, Clone)]
pub struct RelayAgent {
    id: usize,
    rule: AdaptationRule,
    registry: RelayRegistry,
    w_data: BeamVector,
    frame_index: u64,
    pset: PerturbationSet,
}

impl RelayAgent {
    /// Agent that is active from the start.
    pub fn new(id: usize, rule: AdaptationRule, registry: RelayRegistry) -> Result<Self> {
        rule.validate()?;
        if !registry.is_active(id) {
            return Err(Error::ProtocolViolation(format!("relay {id} is not active")));
        }
        let r = registry.num_active();
        Ok(Self {
            id,
            w_data: init_weights(r, rule.constraint),
            frame_index: 0,
            pset: rule.perturbation_set(r),
            rule,
            registry,
        })
    }

    /// Agent joining through a birth broadcast.
    pub fn join(id: usize, rule: AdaptationRule, birth: &MembershipMessage) -> Result<Self> {
        match birth {
            MembershipMessage::Birth { bitmap } => Self::new(id, rule, RelayRegistry::from_bitmap(bitmap.clone())?),
            MembershipMessage::Death { .. } => Err(Error::ProtocolViolation("cannot join on a death message".into())),
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn registry(&self) -> &RelayRegistry {
        &self.registry
    }

    /// The agent's copy of the full data weight vector. An agent that joined
    /// under `PerRelay` knows only its own coordinate exactly.
    pub fn weights(&self) -> &BeamVector {
        &self.w_data
    }

    pub fn frame_index(&self) -> u64 {
        self.frame_index
    }

    /// This relay's own data weight.
    pub fn own_weight(&self) -> Complex64 {
        let pos = self.registry.position(self.id).expect("agent is active");
        self.w_data.weights()[pos]
    }

    /// Weights this relay applies to the training part of the frame.
    pub fn training(&self) -> Training {
        match self.rule.scheme {
            Scheme::TakeReject => {
                Training::Single(tr_training(&self.w_data, self.frame_index, self.rule.beta, &self.pset))
            }
            Scheme::PlusMinus => {
                let (plus, minus) = pm_training(&self.w_data, self.frame_index, self.rule.beta, &self.pset);
                Training::Pair { plus, minus }
            }
        }
    }

    pub fn on_feedback(&mut self, bit: FeedbackBit) {
        match self.training() {
            Training::Single(w) => {
                if bit.is_set() {
                    self.w_data = w;
                }
            }
            Training::Pair { plus, minus } => {
                self.w_data = if bit.is_set() { minus } else { plus };
            }
        }
        self.frame_index += 1;
    }

    /// Applies a membership broadcast. Returns `false` when the broadcast
    /// announces this agent's own death.
    pub fn on_message(&mut self, msg: &MembershipMessage) -> Result<bool> {
        let registry = self.registry.apply_message(msg)?;
        match msg {
            MembershipMessage::Death { index } => {
                let pos = self.registry.position(*index).expect("checked by registry");
                self.w_data = exclude_coordinate(&self.w_data, pos);
            }
            MembershipMessage::Birth { bitmap } => {
                let r = registry.num_active();
                match self.rule.constraint {
                    ConstraintKind::SumPower => {
                        self.w_data = init_weights(r, ConstraintKind::SumPower);
                        self.frame_index = 0;
                    }
                    ConstraintKind::PerRelay => {
                        let born: Vec<usize> = (0..bitmap.len())
                            .filter(|&i| bitmap[i] && !self.registry.is_active(i))
                            .collect();
                        if born.len() != 1 {
                            return Err(Error::ProtocolViolation(format!(
                                "birth broadcast must add exactly one relay, adds {}",
                                born.len()
                            )));
                        }
                        let pos = registry.position(born[0]).expect("born relay is active");
                        self.w_data = admit_coordinate(&self.w_data, pos);
                        self.frame_index = 0;
                    }
                }
            }
        }
        self.registry = registry;
        self.pset = self.rule.perturbation_set(self.registry.num_active());
        Ok(self.registry.is_active(self.id))
    }
}
