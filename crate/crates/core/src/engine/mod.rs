//! Frame-level simulation and the three experiment families.
//!
//! Realizations are independent work units. Each one derives its own random
//! sub-streams from the master seed and its index, and results are reduced
//! in realization order, so output does not depend on the worker count.

mod ber;
mod config;
mod convergence;
mod link;
mod modem;
pub mod report;
mod tracking;

pub use ber::{run_ber_experiment, BerPoint};
pub use config::{
    BeamformerKind, BerSettings, ConvergenceSettings, ExperimentConfig, FrameConfig, PmEstimationMode, Scenario,
    TrackingSettings,
};
pub use convergence::{run_convergence_experiment, ConvergenceOutput};
pub use link::{ChannelSource, FrameResult, Link, LinkConfig};
pub use modem::{bpsk_detect, bpsk_modulate, bpsk_symbol};
pub use tracking::{run_tracking_experiment, TrackingPoint};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Maps `f` over `0..n` in parallel, keeping index order.
pub(crate) fn par_map<T, F>(workers: Option<usize>, range: std::ops::Range<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let run = || range.clone().into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match workers {
        None => run(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run),
    }
}
