//! Fixtures shared by the benchmarks.

use pbbf_core::adaptation::ConstraintKind;
use pbbf_core::channel::{sample_static_rayleigh, ChannelRealization, PathLoss, TimeVaryingChannel};
use pbbf_core::engine::{ExperimentConfig, LinkConfig, Scenario};
use pbbf_core::network::{compound_params, ideal_gains, CompoundParams, NetworkParams};
use pbbf_core::rng::{substream, Domain, SimRng};

pub const SEED: u64 = 7;

pub fn path_loss(num_relays: usize) -> PathLoss {
    PathLoss::new((0..num_relays).map(|i| 1.0 + 2.0 * i as f64).collect()).unwrap()
}

pub fn channel(num_relays: usize) -> ChannelRealization {
    sample_static_rayleigh(&mut substream(SEED, Domain::Channel, 0, 0), &path_loss(num_relays))
}

pub fn fading(num_relays: usize, doppler: f64) -> TimeVaryingChannel {
    TimeVaryingChannel::new(
        &mut substream(SEED, Domain::Channel, 0, 0),
        &path_loss(num_relays),
        doppler,
        32,
        50,
    )
    .unwrap()
}

pub fn compound(num_relays: usize) -> CompoundParams {
    let params = NetworkParams::from_nominal_snr(num_relays, 18.0, ConstraintKind::SumPower).unwrap();
    let chan = channel(num_relays);
    compound_params(&params, &chan, &ideal_gains(&params, &chan)).unwrap()
}

pub fn noise() -> SimRng {
    substream(SEED, Domain::Noise, 0, 0)
}

/// Default three-relay link in the given scenario.
pub fn link_config(scenario: Scenario) -> LinkConfig {
    let cfg = ExperimentConfig {
        scenario,
        ..ExperimentConfig::default()
    };
    LinkConfig {
        scenario,
        rule: cfg.rule(),
        objective: cfg.objective,
        params: NetworkParams::from_nominal_snr(3, 18.0, cfg.constraint).unwrap(),
        frame: cfg.frame,
        pm_estimation: cfg.pm_estimation_mode,
    }
}
