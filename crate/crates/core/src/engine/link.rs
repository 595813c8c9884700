//! One source-relays-destination link simulated frame by frame.

use num_complex::Complex64;
use rand::Rng;

use crate::adaptation::{
    AdaptationRule, AdaptationState, BeamVector, FeedbackBit, PerturbationSet, Training, TrainingObjectives,
};
use crate::channel::{ChannelRealization, TimeVaryingChannel};
use crate::error::{Error, Result};
use crate::estimation::{default_pilots, estimate_compound_channel, estimate_power, estimate_snr, PilotBlock};
use crate::network::{
    compound_params, destination_receive, draw_noise, ideal_gains, relay_gain, relay_receive, simulate_symbol,
    CompoundParams, GainMode, NetworkParams, Objective,
};

use super::config::{FrameConfig, PmEstimationMode, Scenario};
use super::modem::{bpsk_detect, bpsk_symbol};

/// Fixed parameters of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    pub scenario: Scenario,
    pub rule: AdaptationRule,
    pub objective: Objective,
    pub params: NetworkParams,
    pub frame: FrameConfig,
    pub pm_estimation: PmEstimationMode,
}

/// Where the channel coefficients of a frame come from.
#[derive(Debug, Clone)]
pub enum ChannelSource {
    Static(ChannelRealization),
    Fading(TimeVaryingChannel),
}

impl ChannelSource {
    fn at(&mut self, symbol_index: u64) -> Result<ChannelRealization> {
        match self {
            Self::Static(c) => Ok(c.clone()),
            Self::Fading(c) => c.at(symbol_index),
        }
    }
}

/// Outcome of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameResult {
    pub frame_index: u64,
    /// Perturbation column used for training.
    pub column: usize,
    pub feedback_bit: FeedbackBit,
    /// Objective values the destination used for its decision.
    pub objective_training: TrainingObjectives,
    /// Exact objective of the data weights at the start of the frame.
    pub objective_data: f64,
    pub detected_bits: Vec<u8>,
    pub bit_errors: usize,
    pub h_hat_used: Complex64,
}

/// Adaptation state plus the destination's stored channel estimate.
#[derive(Debug, Clone)]
pub struct Link {
    cfg: LinkConfig,
    state: AdaptationState,
    pset: PerturbationSet,
    pilots: Vec<Complex64>,
    /// Estimate associated with the current data weights (realistic only).
    stored_h_hat: Option<Complex64>,
    frames_run: u64,
}

impl Link {
    pub fn new(cfg: LinkConfig) -> Result<Self> {
        cfg.frame.validate(cfg.rule.scheme)?;
        Ok(Self {
            state: AdaptationState::new(&cfg.rule, cfg.params.num_relays)?,
            pset: cfg.rule.perturbation_set(cfg.params.num_relays),
            pilots: default_pilots(cfg.frame.num_pilots),
            stored_h_hat: None,
            frames_run: 0,
            cfg,
        })
    }

    pub fn config(&self) -> &LinkConfig {
        &self.cfg
    }

    pub fn state(&self) -> &AdaptationState {
        &self.state
    }

    pub fn w_data(&self) -> &BeamVector {
        self.state.w_data()
    }

    /// Runs one frame. With `bits = None` no payload is counted; in the
    /// idealized scenario the frame then reduces to the adaptation step.
    pub fn run_frame<R: Rng + ?Sized>(
        &mut self,
        channel: &mut ChannelSource,
        bits: Option<&[u8]>,
        rng: &mut R,
    ) -> Result<FrameResult> {
        if let Some(b) = bits {
            if b.len() != self.cfg.frame.num_data {
                return Err(Error::InvalidArgument(format!(
                    "{} payload bits for {} data symbols",
                    b.len(),
                    self.cfg.frame.num_data
                )));
            }
        }
        let result = match self.cfg.scenario {
            Scenario::Idealized => self.idealized_frame(channel, bits, rng),
            Scenario::Realistic => self.realistic_frame(channel, bits, rng),
        }?;
        self.frames_run += 1;
        Ok(result)
    }

    fn exact_objective(&self, w: &BeamVector, cp: &CompoundParams) -> f64 {
        self.cfg.objective.evaluate(w, cp, self.cfg.params.noise_power)
    }

    fn idealized_frame<R: Rng + ?Sized>(
        &mut self,
        channel: &mut ChannelSource,
        bits: Option<&[u8]>,
        rng: &mut R,
    ) -> Result<FrameResult> {
        let p = self.cfg.params;
        let chan = channel.at(self.frames_run * self.cfg.frame.len() as u64)?;
        let alphas = ideal_gains(&p, &chan);
        let cp = compound_params(&p, &chan, &alphas)?;
        let column = self.pset.index(self.state.frame_index());
        let training = self.state.training(self.cfg.rule.beta, &self.pset);
        let objectives = match &training {
            Training::Single(w) => TrainingObjectives::Single(self.exact_objective(w, &cp)),
            Training::Pair { plus, minus } => TrainingObjectives::Pair {
                plus: self.exact_objective(plus, &cp),
                minus: self.exact_objective(minus, &cp),
            },
        };
        let w = self.state.w_data();
        let objective_data = self.exact_objective(w, &cp);
        let h_hat = w.inner(cp.hbar());
        let mut detected_bits = Vec::new();
        let mut bit_errors = 0;
        if let Some(bits) = bits {
            detected_bits.reserve(bits.len());
            for &b in bits {
                let y = simulate_symbol(&p, &chan, &alphas, w, bpsk_symbol(b), rng);
                let d = bpsk_detect(y, h_hat);
                bit_errors += usize::from(d != b);
                detected_bits.push(d);
            }
        }
        let frame_index = self.state.frame_index();
        let (next, feedback_bit) = self.state.step(training, objectives)?;
        self.state = next;
        Ok(FrameResult {
            frame_index,
            column,
            feedback_bit,
            objective_training: objectives,
            objective_data,
            detected_bits,
            bit_errors,
            h_hat_used: h_hat,
        })
    }

    fn estimate(&self, block: &PilotBlock) -> Result<(Complex64, f64)> {
        let h = estimate_compound_channel(block)?;
        let j = match self.cfg.objective {
            Objective::Power => estimate_power(h),
            Objective::Snr => estimate_snr(h, block),
        };
        Ok((h, j))
    }

    fn realistic_frame<R: Rng + ?Sized>(
        &mut self,
        channel: &mut ChannelSource,
        bits: Option<&[u8]>,
        rng: &mut R,
    ) -> Result<FrameResult> {
        let p = self.cfg.params;
        let frame = self.cfg.frame;
        let n_relays = p.num_relays;
        let base = self.frames_run * frame.len() as u64;

        let zeros;
        let payload = match bits {
            Some(b) => b,
            None => {
                zeros = vec![0u8; frame.num_data];
                &zeros
            }
        };
        let symbols: Vec<Complex64> = self
            .pilots
            .iter()
            .copied()
            .chain(payload.iter().map(|&b| bpsk_symbol(b)))
            .collect();

        // First hop: relays receive the whole frame and measure its power.
        let mut chans = Vec::with_capacity(frame.len());
        let mut relay_rx = Vec::with_capacity(frame.len());
        let mut dest_noise = Vec::with_capacity(frame.len());
        let mut power = vec![0.0; n_relays];
        for (t, &s) in symbols.iter().enumerate() {
            let chan = channel.at(base + t as u64)?;
            let (n, v) = draw_noise(rng, n_relays, p.noise_power);
            let x = relay_receive(&p, chan.backward(), s, &n);
            for (acc, xi) in power.iter_mut().zip(&x) {
                *acc += xi.norm_sqr();
            }
            chans.push(chan);
            relay_rx.push(x);
            dest_noise.push(v);
        }
        let alphas = power
            .iter()
            .map(|&e| relay_gain(&p, Complex64::new(0.0, 0.0), GainMode::Measured(e / frame.len() as f64)))
            .collect::<Result<Vec<f64>>>()?;

        // Second hop with the weights of each frame section.
        let column = self.pset.index(self.state.frame_index());
        let training = self.state.training(self.cfg.rule.beta, &self.pset);
        let w_data = self.state.w_data().clone();
        let half = frame.half();
        let weights_at = |t: usize| -> &BeamVector {
            if t >= frame.num_pilots {
                return &w_data;
            }
            match &training {
                Training::Single(w) => w,
                Training::Pair { plus, minus } => {
                    if t < half {
                        plus
                    } else {
                        minus
                    }
                }
            }
        };
        let y: Vec<Complex64> = (0..frame.len())
            .map(|t| {
                destination_receive(
                    chans[t].forward(),
                    &alphas,
                    weights_at(t).weights(),
                    &relay_rx[t],
                    dest_noise[t],
                )
            })
            .collect();

        // Destination: estimate, decide, detect.
        let pilot_block = PilotBlock::new(self.pilots.clone(), y[..frame.num_pilots].to_vec())?;
        let (objectives, h_candidates) = match &training {
            Training::Single(_) => {
                let (h, j) = self.estimate(&pilot_block)?;
                (TrainingObjectives::Single(j), (h, h))
            }
            Training::Pair { .. } => {
                let (first, second) = pilot_block.halves()?;
                let (hp, jp) = self.estimate(&first)?;
                let (hm, jm) = self.estimate(&second)?;
                (TrainingObjectives::Pair { plus: jp, minus: jm }, (hp, hm))
            }
        };
        let h_hat_used = match (&training, self.cfg.pm_estimation) {
            (Training::Pair { .. }, PmEstimationMode::Whole) => estimate_compound_channel(&pilot_block)?,
            _ => self.stored_h_hat.unwrap_or_default(),
        };
        let mut detected_bits = Vec::new();
        let mut bit_errors = 0;
        if let Some(bits) = bits {
            for (k, &b) in bits.iter().enumerate() {
                let d = bpsk_detect(y[frame.num_pilots + k], h_hat_used);
                bit_errors += usize::from(d != b);
                detected_bits.push(d);
            }
        }

        let start = &chans[0];
        let cp = compound_params(&p, start, &ideal_gains(&p, start))?;
        let objective_data = self.exact_objective(&w_data, &cp);

        let frame_index = self.state.frame_index();
        let is_pair = matches!(training, Training::Pair { .. });
        let (next, feedback_bit) = self.state.step(training, objectives)?;
        self.state = next;
        if is_pair {
            self.stored_h_hat = Some(if feedback_bit.is_set() {
                h_candidates.1
            } else {
                h_candidates.0
            });
        } else if feedback_bit.is_set() {
            self.stored_h_hat = Some(h_candidates.0);
        }
        Ok(FrameResult {
            frame_index,
            column,
            feedback_bit,
            objective_training: objectives,
            objective_data,
            detected_bits,
            bit_errors,
            h_hat_used,
        })
    }
}
