use rand::Rng;

use crate::channel::TimeVaryingChannel;
use crate::error::Result;
use crate::network::NetworkParams;
use crate::rng::{substream, Domain};

use super::config::{BeamformerKind, ExperimentConfig};
use super::link::{ChannelSource, Link, LinkConfig};
use super::par_map;
use super::report::TrackingRow;

/// Aggregated BER of one scheme, step size and Doppler value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingPoint {
    pub scheme: BeamformerKind,
    pub beta: f64,
    pub normalized_doppler: f64,
    pub bits: u64,
    pub errors: u64,
}

impl TrackingPoint {
    pub fn ber(&self) -> f64 {
        self.errors as f64 / self.bits as f64
    }

    pub fn row(&self) -> TrackingRow {
        TrackingRow {
            scheme: self.scheme.label().to_string(),
            beta: self.beta,
            normalized_doppler: self.normalized_doppler,
            bits: self.bits,
            errors: self.errors,
            ber: self.ber(),
        }
    }
}

/// BER versus normalized Doppler in the realistic scenario.
///
/// Each realization runs its own Jakes channel for `warmup_frames` frames of
/// adaptation followed by `data_frames` counted frames. Channel, noise and
/// payload streams depend only on the realization and Doppler index, so
/// curves for different step sizes and schemes are paired.
pub fn run_tracking_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrackingPoint>> {
    cfg.validate_tracking()?;
    let path_loss = cfg.path_loss()?;
    let t = &cfg.tracking;
    let snr_db = cfg.snr_db_grid[0];
    let mut points = Vec::new();
    for &scheme in &t.schemes {
        let params = NetworkParams::from_nominal_snr(cfg.num_relays, snr_db, scheme.constraint())?;
        for &beta in &t.betas {
            let link_cfg = LinkConfig {
                scenario: cfg.scenario,
                rule: cfg.rule_for(scheme.constraint(), beta),
                objective: scheme.objective(),
                params,
                frame: cfg.frame,
                pm_estimation: cfg.pm_estimation_mode,
            };
            for (di, &doppler) in cfg.normalized_doppler_grid.iter().enumerate() {
                let errors = par_map(cfg.workers, 0..cfg.num_realizations, |r| {
                    let r = r as u64;
                    let key = di as u64;
                    let chan = TimeVaryingChannel::new(
                        &mut substream(cfg.seed, Domain::Channel, 0, r),
                        &path_loss,
                        doppler,
                        t.num_oscillators,
                        cfg.frame.len(),
                    )?;
                    let mut source = ChannelSource::Fading(chan);
                    let mut noise = substream(cfg.seed, Domain::Noise, key, r);
                    let mut payload = substream(cfg.seed, Domain::Payload, key, r);
                    let mut link = Link::new(link_cfg)?;
                    let mut errors = 0u64;
                    for frame in 0..t.warmup_frames + t.data_frames {
                        let bits: Vec<u8> = (0..cfg.frame.num_data).map(|_| payload.random_range(0..2u8)).collect();
                        let res = link.run_frame(&mut source, Some(&bits), &mut noise)?;
                        if frame >= t.warmup_frames {
                            errors += res.bit_errors as u64;
                        }
                    }
                    Ok(errors)
                })?;
                points.push(TrackingPoint {
                    scheme,
                    beta,
                    normalized_doppler: doppler,
                    bits: (cfg.num_realizations * t.data_frames * cfg.frame.num_data) as u64,
                    errors: errors.iter().sum(),
                });
            }
        }
    }
    Ok(points)
}
