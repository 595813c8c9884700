use crate::channel::sample_static_rayleigh;
use crate::error::Result;
use crate::network::{compound_params, ideal_gains, objective_snr, NetworkParams};
use crate::oracles::ssp_weights;
use crate::rng::{substream, Domain};

use super::config::ExperimentConfig;
use super::link::{ChannelSource, Link, LinkConfig};
use super::par_map;
use super::report::{GapCdfRow, TrajectoryRow};

/// Normalized-SNR trajectories and gap distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceOutput {
    /// Rows of the first `trajectory_realizations` realizations.
    pub trajectories: Vec<TrajectoryRow>,
    pub gap_cdf: Vec<GapCdfRow>,
    /// Gap of every realization after each of the configured frame counts.
    pub gaps_at: Vec<(usize, Vec<f64>)>,
}

struct Realization {
    /// `SNR(w_k) / SNR(w_opt)` for `k = 0..=num_frames`.
    normalized: Vec<f64>,
    bits: Vec<u8>,
}

/// Tracks `SNR(w_k)/SNR(w_opt)` with `w_opt` the SNR-optimal batch design.
///
/// Gap after `k` frames is `1 - SNR(w_k)/SNR(w_opt)` where `w_k` are the
/// data weights once `k` feedback bits have been applied.
pub fn run_convergence_experiment(cfg: &ExperimentConfig) -> Result<ConvergenceOutput> {
    cfg.validate_convergence()?;
    let path_loss = cfg.path_loss()?;
    let params = NetworkParams::from_nominal_snr(cfg.num_relays, cfg.snr_db_grid[0], cfg.constraint)?;
    let link_cfg = LinkConfig {
        scenario: cfg.scenario,
        rule: cfg.rule(),
        objective: cfg.objective,
        params,
        frame: cfg.frame,
        pm_estimation: cfg.pm_estimation_mode,
    };

    let runs = par_map(cfg.workers, 0..cfg.num_realizations, |r| {
        let chan = sample_static_rayleigh(&mut substream(cfg.seed, Domain::Channel, 0, r as u64), &path_loss);
        let cp = compound_params(&params, &chan, &ideal_gains(&params, &chan))?;
        let best = objective_snr(&ssp_weights(&cp)?, &cp, params.noise_power);
        let mut link = Link::new(link_cfg)?;
        let mut source = ChannelSource::Static(chan);
        // Idealized frames without payload consume no randomness.
        let mut rng = substream(cfg.seed, Domain::Noise, 0, r as u64);
        let mut normalized = Vec::with_capacity(cfg.num_frames + 1);
        let mut bits = Vec::with_capacity(cfg.num_frames);
        for _ in 0..cfg.num_frames {
            normalized.push(objective_snr(link.w_data(), &cp, params.noise_power) / best);
            let res = link.run_frame(&mut source, None, &mut rng)?;
            bits.push(res.feedback_bit.into());
        }
        normalized.push(objective_snr(link.w_data(), &cp, params.noise_power) / best);
        Ok(Realization { normalized, bits })
    })?;

    let trajectories = runs
        .iter()
        .take(cfg.convergence.trajectory_realizations)
        .enumerate()
        .flat_map(|(r, run)| {
            (0..cfg.num_frames).map(move |k| TrajectoryRow {
                realization: r as u64,
                frame: k as u64,
                snr_normalized: run.normalized[k],
                gap: 1.0 - run.normalized[k],
                feedback_bit: run.bits[k],
            })
        })
        .collect();

    let gaps_at: Vec<(usize, Vec<f64>)> = cfg
        .convergence
        .cdf_frames
        .iter()
        .map(|&k| (k, runs.iter().map(|run| 1.0 - run.normalized[k]).collect()))
        .collect();
    let gap_cdf = gaps_at
        .iter()
        .flat_map(|(k, gaps)| {
            cfg.convergence.gap_thresholds.iter().map(move |&thr| GapCdfRow {
                frames: *k as u64,
                gap_threshold: thr,
                fraction: fraction_below(gaps, thr),
            })
        })
        .collect();
    Ok(ConvergenceOutput {
        trajectories,
        gap_cdf,
        gaps_at,
    })
}

/// Fraction of `values` strictly below `threshold`.
pub(crate) fn fraction_below(values: &[f64], threshold: f64) -> f64 {
    values.iter().filter(|&&g| g < threshold).count() as f64 / values.len() as f64
}
