use rand::Rng;

use crate::adaptation::BeamVector;
use crate::channel::{sample_static_rayleigh, PathLoss};
use crate::error::Result;
use crate::network::{compound_params, ideal_gains, simulate_symbol, NetworkParams};
use crate::oracles::{egc_weights, nobf_weights, psp_weights, ssp_weights};
use crate::rng::{substream, Domain, SimRng};

use super::config::{BeamformerKind, ExperimentConfig};
use super::link::{ChannelSource, Link, LinkConfig};
use super::modem::{bpsk_detect, bpsk_symbol};
use super::par_map;
use super::report::BerRow;

/// Realizations evaluated between two checks of the stopping rule.
const BATCH: usize = 256;

/// Aggregated result of one scheme at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub scheme: BeamformerKind,
    pub snr_db: f64,
    pub realizations: usize,
    pub bits: u64,
    pub errors: u64,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        self.errors as f64 / self.bits as f64
    }

    pub fn row(&self) -> BerRow {
        BerRow {
            scheme: self.scheme.label().to_string(),
            snr_db: self.snr_db,
            bits: self.bits,
            errors: self.errors,
            ber: self.ber(),
        }
    }
}

/// BER per scheme and SNR in the idealized scenario.
///
/// Every realization draws a static channel (shared by all schemes and SNR
/// points). Adaptive schemes first run `warmup_frames` frames, then the
/// errors of `data_frames` frames are counted. Realizations are added in
/// batches until a point has `min_errors` errors over at least
/// `min_realizations` realizations, `max_bits` bits, or `num_realizations`
/// realizations.
pub fn run_ber_experiment(cfg: &ExperimentConfig) -> Result<Vec<BerPoint>> {
    cfg.validate_ber()?;
    let path_loss = cfg.path_loss()?;
    let mut points = Vec::new();
    for &scheme in &cfg.ber.schemes {
        for (si, &snr_db) in cfg.snr_db_grid.iter().enumerate() {
            points.push(ber_point(cfg, &path_loss, scheme, si as u64, snr_db)?);
        }
    }
    Ok(points)
}

fn ber_point(
    cfg: &ExperimentConfig,
    path_loss: &PathLoss,
    scheme: BeamformerKind,
    snr_key: u64,
    snr_db: f64,
) -> Result<BerPoint> {
    let params = NetworkParams::from_nominal_snr(cfg.num_relays, snr_db, scheme.constraint())?;
    let mut point = BerPoint {
        scheme,
        snr_db,
        realizations: 0,
        bits: 0,
        errors: 0,
    };
    let s = &cfg.ber;
    while point.realizations < cfg.num_realizations {
        let start = point.realizations;
        let end = (start + BATCH).min(cfg.num_realizations);
        let counts = par_map(cfg.workers, start..end, |r| {
            realization_errors(cfg, path_loss, &params, scheme, snr_key, r as u64)
        })?;
        for (bits, errors) in counts {
            point.bits += bits;
            point.errors += errors;
        }
        point.realizations = end;
        let enough_errors = point.errors >= s.min_errors && point.realizations >= s.min_realizations;
        if enough_errors || point.bits >= s.max_bits {
            break;
        }
    }
    Ok(point)
}

fn random_bits(rng: &mut SimRng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

fn realization_errors(
    cfg: &ExperimentConfig,
    path_loss: &PathLoss,
    params: &NetworkParams,
    scheme: BeamformerKind,
    snr_key: u64,
    r: u64,
) -> Result<(u64, u64)> {
    let chan = sample_static_rayleigh(&mut substream(cfg.seed, Domain::Channel, 0, r), path_loss);
    let mut noise = substream(cfg.seed, Domain::Noise, snr_key, r);
    let mut payload = substream(cfg.seed, Domain::Payload, snr_key, r);
    let frames = cfg.ber.data_frames;
    let num_data = cfg.frame.num_data;
    let mut errors = 0u64;

    if scheme.is_adaptive() {
        let mut link = Link::new(LinkConfig {
            scenario: cfg.scenario,
            rule: cfg.rule_for(scheme.constraint(), cfg.beta),
            objective: scheme.objective(),
            params: *params,
            frame: cfg.frame,
            pm_estimation: cfg.pm_estimation_mode,
        })?;
        let mut source = ChannelSource::Static(chan);
        for _ in 0..cfg.ber.warmup_frames {
            link.run_frame(&mut source, None, &mut noise)?;
        }
        for _ in 0..frames {
            let bits = random_bits(&mut payload, num_data);
            errors += link.run_frame(&mut source, Some(&bits), &mut noise)?.bit_errors as u64;
        }
    } else {
        let alphas = ideal_gains(params, &chan);
        let cp = compound_params(params, &chan, &alphas)?;
        let w: BeamVector = match scheme {
            BeamformerKind::NoBf => nobf_weights(cfg.num_relays),
            BeamformerKind::Egc => egc_weights(&cp).weights,
            BeamformerKind::Psp => psp_weights(&cp)?,
            BeamformerKind::Ssp => ssp_weights(&cp)?,
            _ => unreachable!("adaptive schemes handled above"),
        };
        let h_hat = w.inner(cp.hbar());
        for _ in 0..frames {
            for b in random_bits(&mut payload, num_data) {
                let y = simulate_symbol(params, &chan, &alphas, &w, bpsk_symbol(b), &mut noise);
                errors += u64::from(bpsk_detect(y, h_hat) != b);
            }
        }
    }
    Ok(((frames * num_data) as u64, errors))
}
