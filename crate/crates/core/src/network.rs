//! Two-hop amplify-and-forward signal chain.
//!
//! The source sends `sqrt(Ps) s`; relay `i` receives
//! `x_i = sqrt(Ps) h_i s + n_i`, scales it by `conj(w_i) alpha_i` and the
//! destination receives `y = sum_i g_i r_i + v`. Collapsing the chain gives
//! `y = (w^H hbar) s + w^H Gbar n + v` with `hbar_i = h_i g_i alpha_i sqrt(Ps)`
//! and `Gbar = diag(g_i alpha_i)`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adaptation::{BeamVector, ConstraintKind};
use crate::channel::{complex_gaussian, ChannelRealization};
use crate::error::{Error, Result};

/// Powers of the relay network. Noise power is shared by relays and
/// destination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    pub num_relays: usize,
    pub source_power: f64,
    pub relay_power: f64,
    pub noise_power: f64,
}

impl NetworkParams {
    pub fn new(num_relays: usize, source_power: f64, relay_power: f64, noise_power: f64) -> Result<Self> {
        if num_relays == 0 {
            return Err(Error::InvalidParameter("need at least one relay".into()));
        }
        for (name, v) in [
            ("source power", source_power),
            ("relay power", relay_power),
            ("noise power", noise_power),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} {v} must be positive")));
            }
        }
        Ok(Self {
            num_relays,
            source_power,
            relay_power,
            noise_power,
        })
    }

    /// Parameters for a nominal SNR `Psum/N0` in dB with `N0 = 1`.
    ///
    /// The source transmits at `Psum`. Relays share `Psum`: the relay power
    /// of the gain rule is `Psum` under a sum constraint and `Psum/R` per
    /// relay otherwise.
    pub fn from_nominal_snr(num_relays: usize, snr_db: f64, constraint: ConstraintKind) -> Result<Self> {
        let p_sum = 10f64.powf(snr_db / 10.0);
        let relay_power = match constraint {
            ConstraintKind::SumPower => p_sum,
            ConstraintKind::PerRelay => p_sum / num_relays.max(1) as f64,
        };
        Self::new(num_relays, p_sum, relay_power, 1.0)
    }
}

/// How a relay obtains its power normalization factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainMode {
    /// Uses the known backward channel: `alpha = sqrt(P / (Ps |h|^2 + N0))`.
    Ideal,
    /// Uses a measured average receive power: `alpha = sqrt(P / power)`.
    Measured(f64),
}

/// Power normalization factor `alpha_i` of one relay.
pub fn relay_gain(params: &NetworkParams, h: Complex64, mode: GainMode) -> Result<f64> {
    match mode {
        GainMode::Ideal => Ok((params.relay_power / (params.source_power * h.norm_sqr() + params.noise_power)).sqrt()),
        GainMode::Measured(power) => {
            if !(power.is_finite() && power > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "measured relay power {power} must be positive"
                )));
            }
            Ok((params.relay_power / power).sqrt())
        }
    }
}

/// Ideal-mode gains of all relays.
pub fn ideal_gains(params: &NetworkParams, chan: &ChannelRealization) -> Vec<f64> {
    chan.backward()
        .iter()
        .map(|&h| (params.relay_power / (params.source_power * h.norm_sqr() + params.noise_power)).sqrt())
        .collect()
}

/// Compound channel `hbar` and forward gains `gbar` seen by the destination.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundParams {
    hbar: Vec<Complex64>,
    gbar: Vec<Complex64>,
}

impl CompoundParams {
    pub fn new(hbar: Vec<Complex64>, gbar: Vec<Complex64>) -> Result<Self> {
        if hbar.len() != gbar.len() {
            return Err(Error::InvalidArgument("hbar and gbar lengths differ".into()));
        }
        Ok(Self { hbar, gbar })
    }

    pub fn hbar(&self) -> &[Complex64] {
        &self.hbar
    }

    pub fn gbar(&self) -> &[Complex64] {
        &self.gbar
    }

    pub fn num_relays(&self) -> usize {
        self.hbar.len()
    }

    /// `||hbar||^2`.
    pub fn hbar_energy(&self) -> f64 {
        self.hbar.iter().map(|x| x.norm_sqr()).sum()
    }

    /// `w^H Gbar Gbar^H w = sum_i |w_i|^2 |gbar_i|^2`.
    pub fn forward_noise_gain(&self, w: &BeamVector) -> f64 {
        w.weights()
            .iter()
            .zip(&self.gbar)
            .map(|(w, g)| w.norm_sqr() * g.norm_sqr())
            .sum()
    }
}

/// `hbar_i = h_i g_i alpha_i sqrt(Ps)`, `gbar_i = g_i alpha_i`.
pub fn compound_params(params: &NetworkParams, chan: &ChannelRealization, alphas: &[f64]) -> Result<CompoundParams> {
    if alphas.len() != chan.num_relays() {
        return Err(Error::InvalidArgument(format!(
            "{} gains for {} relays",
            alphas.len(),
            chan.num_relays()
        )));
    }
    let sqrt_ps = params.source_power.sqrt();
    let gbar: Vec<Complex64> = chan.forward().iter().zip(alphas).map(|(g, a)| g * *a).collect();
    let hbar = chan
        .backward()
        .iter()
        .zip(&gbar)
        .map(|(h, gb)| h * gb * sqrt_ps)
        .collect();
    Ok(CompoundParams { hbar, gbar })
}

/// Relay receive samples `x_i = sqrt(Ps) h_i s + n_i` for given noise.
pub fn relay_receive(
    params: &NetworkParams,
    backward: &[Complex64],
    s: Complex64,
    noise: &[Complex64],
) -> Vec<Complex64> {
    let sqrt_ps = params.source_power.sqrt();
    backward.iter().zip(noise).map(|(h, n)| sqrt_ps * h * s + n).collect()
}

/// Destination sample `y = sum_i g_i conj(w_i) alpha_i x_i + v`.
pub fn destination_receive(
    forward: &[Complex64],
    alphas: &[f64],
    weights: &[Complex64],
    relay_rx: &[Complex64],
    dest_noise: Complex64,
) -> Complex64 {
    forward
        .iter()
        .zip(alphas)
        .zip(weights)
        .zip(relay_rx)
        .map(|(((g, a), w), x)| g * w.conj() * *a * x)
        .sum::<Complex64>()
        + dest_noise
}

/// Draws relay noise `n_1..n_R` followed by destination noise `v`.
pub fn draw_noise<R: Rng + ?Sized>(rng: &mut R, num_relays: usize, noise_power: f64) -> (Vec<Complex64>, Complex64) {
    let n = (0..num_relays).map(|_| complex_gaussian(rng, noise_power)).collect();
    let v = complex_gaussian(rng, noise_power);
    (n, v)
}

/// One symbol through the full chain with explicit noise samples.
pub fn simulate_symbol_with_noise(
    params: &NetworkParams,
    chan: &ChannelRealization,
    alphas: &[f64],
    w: &BeamVector,
    s: Complex64,
    relay_noise: &[Complex64],
    dest_noise: Complex64,
) -> Complex64 {
    let x = relay_receive(params, chan.backward(), s, relay_noise);
    destination_receive(chan.forward(), alphas, w.weights(), &x, dest_noise)
}

/// One symbol through the full chain with fresh noise `n_i, v ~ CN(0, N0)`.
pub fn simulate_symbol<R: Rng + ?Sized>(
    params: &NetworkParams,
    chan: &ChannelRealization,
    alphas: &[f64],
    w: &BeamVector,
    s: Complex64,
    rng: &mut R,
) -> Complex64 {
    let (n, v) = draw_noise(rng, chan.num_relays(), params.noise_power);
    simulate_symbol_with_noise(params, chan, alphas, w, s, &n, v)
}

/// Receive signal power `|w^H hbar|^2`.
pub fn objective_power(w: &BeamVector, cp: &CompoundParams) -> f64 {
    w.inner(&cp.hbar).norm_sqr()
}

/// Receive SNR `|w^H hbar|^2 / (N0 (1 + w^H Gbar Gbar^H w))`.
pub fn objective_snr(w: &BeamVector, cp: &CompoundParams, noise_power: f64) -> f64 {
    objective_power(w, cp) / (noise_power * (1.0 + cp.forward_noise_gain(w)))
}

/// Objective maximized by the adaptation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    Power,
    Snr,
}

impl Objective {
    pub fn evaluate(self, w: &BeamVector, cp: &CompoundParams, noise_power: f64) -> f64 {
        match self {
            Objective::Power => objective_power(w, cp),
            Objective::Snr => objective_snr(w, cp, noise_power),
        }
    }
}
