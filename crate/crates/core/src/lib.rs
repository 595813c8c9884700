//! Adaptive distributed beamforming for two-hop amplify-and-forward relay
//! networks with one bit of feedback per frame.
//!
//! The relays never learn the channel. Each frame they forward the training
//! symbols with perturbed weights and the data with the current weights; the
//! destination compares the measured objective (receive power or SNR) and
//! broadcasts one bit telling the relays which weights to keep. Perturbation
//! vectors come from a shared deterministic DFT set, so every relay can track
//! the full weight vector and normalize it locally.
//!
//! Modules:
//!
//! * [`channel`]: static Rayleigh and Jakes time-varying fading.
//! * [`network`]: the relay signal chain and the two objectives.
//! * [`adaptation`]: weights, perturbation sets, take/reject and plus/minus.
//! * [`oracles`]: closed-form batch designs (EGC, P-SP, S-SP, no BF).
//! * [`estimation`]: pilot-based channel, power and SNR estimates.
//! * [`membership`]: relay birth/death broadcasts and relay-side agents.
//! * [`engine`]: frame loop and the convergence, BER and tracking experiments.

pub mod adaptation;
pub mod channel;
pub mod engine;
pub mod error;
pub mod estimation;
pub mod membership;
pub mod network;
pub mod oracles;
pub mod rng;

pub use adaptation::{AdaptationRule, BeamVector, ConstraintKind, PerturbationSet, Scheme};
pub use channel::{ChannelRealization, PathLoss};

pub use engine::{BeamformerKind, ExperimentConfig, FrameConfig, Scenario};
pub use error::{Error, Result};
pub use network::{CompoundParams, NetworkParams, Objective};
