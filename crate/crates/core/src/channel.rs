//! Fading channel generation.
//!
//! Two channel families are provided. Static Rayleigh draws model the
//! idealized scenario, where one realization stays fixed for the whole run.
//! Time-varying channels follow the classical isotropic-scattering (Jakes)
//! Doppler profile and are generated per symbol by a sum of sinusoids:
//!
//! ```text
//! c(t) = A / sqrt(M) * sum_m exp(j (w_m t + phi_m)),   w_m = 2 pi f_d cos(a_m)
//! ```
//!
//! with arrival angles `a_m = (2 pi m + theta) / M` on a randomly rotated
//! uniform grid and i.i.d. uniform phases `phi_m`. Averaged over `theta` the
//! autocorrelation is exactly `A^2 J0(2 pi f_d tau)` for any `M`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of oscillators per Jakes process.
pub const DEFAULT_OSCILLATORS: usize = 32;
/// Smallest admissible oscillator count.
pub const MIN_OSCILLATORS: usize = 8;

/// Draws a circularly-symmetric complex Gaussian sample with the given
/// total variance (each quadrature gets half of it).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sigma = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sigma * re, sigma * im)
}

/// Path-loss distances of the relays; coefficient variance is `d^-2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PathLoss {
    distances: Vec<f64>,
}

impl PathLoss {
    pub fn new(distances: Vec<f64>) -> Result<Self> {
        if distances.is_empty() {
            return Err(Error::InvalidParameter("path loss needs at least one relay".into()));
        }
        if let Some(d) = distances.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "path-loss distance {d} must be positive"
            )));
        }
        Ok(Self { distances })
    }

    pub fn num_relays(&self) -> usize {
        self.distances.len()
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// Variance `d_i^-2` of the coefficients of relay `i`.
    pub fn variance(&self, i: usize) -> f64 {
        self.distances[i].powi(-2)
    }

    /// Keeps only the relays whose index is listed, in the listed order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.distances[i]).collect())
    }
}

impl TryFrom<Vec<f64>> for PathLoss {
    type Error = Error;

    fn try_from(distances: Vec<f64>) -> Result<Self> {
        Self::new(distances)
    }
}

impl From<PathLoss> for Vec<f64> {
    fn from(p: PathLoss) -> Self {
        p.distances
    }
}

/// Backward (`h`, source to relay) and forward (`g`, relay to destination)
/// coefficients of every relay at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    h: Vec<Complex64>,
    g: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn new(h: Vec<Complex64>, g: Vec<Complex64>) -> Result<Self> {
        if h.len() != g.len() {
            return Err(Error::InvalidArgument(format!(
                "backward ({}) and forward ({}) channel lengths differ",
                h.len(),
                g.len()
            )));
        }
        Ok(Self { h, g })
    }

    pub fn num_relays(&self) -> usize {
        self.h.len()
    }

    pub fn backward(&self) -> &[Complex64] {
        &self.h
    }

    pub fn forward(&self) -> &[Complex64] {
        &self.g
    }

    /// Sub-channel of the listed relays, in the listed order.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            h: indices.iter().map(|&i| self.h[i]).collect(),
            g: indices.iter().map(|&i| self.g[i]).collect(),
        }
    }
}

/// Static i.i.d. Rayleigh draw: `h_i, g_i ~ CN(0, d_i^-2)`.
///
/// All backward coefficients are drawn first, then all forward ones.
pub fn sample_static_rayleigh<R: Rng + ?Sized>(rng: &mut R, path_loss: &PathLoss) -> ChannelRealization {
    let n = path_loss.num_relays();
    let h = (0..n).map(|i| complex_gaussian(rng, path_loss.variance(i))).collect();
    let g = (0..n).map(|i| complex_gaussian(rng, path_loss.variance(i))).collect();
    ChannelRealization { h, g }
}

/// One Jakes fading process (sum-of-sinusoids generator state).
#[derive(Debug, Clone, PartialEq)]
pub struct JakesProcess {
    phases: Vec<f64>,
    angles: Vec<f64>,
    /// Angular frequency per oscillator in radians per symbol.
    omegas: Vec<f64>,
    normalized_doppler: f64,
    amplitude: f64,
    symbol_clock: u64,
    /// Oscillator phasors at `symbol_clock`, advanced by `steps` for
    /// consecutive samples and recomputed exactly every `REANCHOR` symbols.
    phasors: Vec<Complex64>,
    steps: Vec<Complex64>,
}

const REANCHOR: u64 = 256;

impl JakesProcess {
    /// Creates a process with Doppler `normalized_doppler` (Doppler in Hz
    /// times frame duration), frames of `symbols_per_frame` symbols and
    /// asymptotic variance `amplitude^2`.
    pub fn new<R: Rng + ?Sized>(
        rng: &mut R,
        normalized_doppler: f64,
        amplitude: f64,
        num_oscillators: usize,
        symbols_per_frame: usize,
    ) -> Result<Self> {
        if !(normalized_doppler.is_finite() && normalized_doppler >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "normalized Doppler {normalized_doppler} must be nonnegative"
            )));
        }
        if num_oscillators < MIN_OSCILLATORS {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_OSCILLATORS} oscillators, got {num_oscillators}"
            )));
        }
        if symbols_per_frame == 0 {
            return Err(Error::InvalidParameter("frame length must be positive".into()));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "amplitude {amplitude} must be nonnegative"
            )));
        }
        let m = num_oscillators as f64;
        let rotation = rng.random_range(-PI..PI);
        let angles: Vec<f64> = (0..num_oscillators)
            .map(|k| (2.0 * PI * k as f64 + rotation) / m)
            .collect();
        let phases = (0..num_oscillators).map(|_| rng.random_range(-PI..PI)).collect();
        let doppler_per_symbol = normalized_doppler / symbols_per_frame as f64;
        let omegas: Vec<f64> = angles.iter().map(|a| 2.0 * PI * doppler_per_symbol * a.cos()).collect();
        let steps = omegas.iter().map(|&w| Complex64::from_polar(1.0, w)).collect();
        let mut process = Self {
            phases,
            angles,
            omegas,
            normalized_doppler,
            amplitude,
            symbol_clock: 0,
            phasors: Vec::new(),
            steps,
        };
        process.anchor(0);
        Ok(process)
    }

    pub fn normalized_doppler(&self) -> f64 {
        self.normalized_doppler
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn oscillator_angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn symbol_clock(&self) -> u64 {
        self.symbol_clock
    }

    /// Coefficient at `symbol_index`. Time may not run backwards.
    pub fn sample(&mut self, symbol_index: u64) -> Result<Complex64> {
        if symbol_index < self.symbol_clock {
            return Err(Error::InvalidArgument(format!(
                "symbol index {symbol_index} precedes clock {}",
                self.symbol_clock
            )));
        }
        if symbol_index == self.symbol_clock + 1 && !symbol_index.is_multiple_of(REANCHOR) {
            for (z, s) in self.phasors.iter_mut().zip(&self.steps) {
                *z *= s;
            }
            self.symbol_clock = symbol_index;
        } else if symbol_index != self.symbol_clock {
            self.anchor(symbol_index);
        }
        let sum: Complex64 = self.phasors.iter().sum();
        Ok(sum * (self.amplitude / (self.phases.len() as f64).sqrt()))
    }

    fn anchor(&mut self, symbol_index: u64) {
        let t = symbol_index as f64;
        self.phasors = self
            .omegas
            .iter()
            .zip(&self.phases)
            .map(|(w, phi)| Complex64::from_polar(1.0, w * t + phi))
            .collect();
        self.symbol_clock = symbol_index;
    }
}

/// Independent Jakes processes for every backward and forward coefficient.
#[derive(Debug, Clone)]
pub struct TimeVaryingChannel {
    h: Vec<JakesProcess>,
    g: Vec<JakesProcess>,
}

impl TimeVaryingChannel {
    /// Backward processes are initialized first, then forward processes,
    /// each with amplitude `1/d_i`.
    pub fn new<R: Rng + ?Sized>(
        rng: &mut R,
        path_loss: &PathLoss,
        normalized_doppler: f64,
        num_oscillators: usize,
        symbols_per_frame: usize,
    ) -> Result<Self> {
        let make = |rng: &mut R| -> Result<Vec<JakesProcess>> {
            (0..path_loss.num_relays())
                .map(|i| {
                    JakesProcess::new(
                        rng,
                        normalized_doppler,
                        path_loss.variance(i).sqrt(),
                        num_oscillators,
                        symbols_per_frame,
                    )
                })
                .collect()
        };
        let h = make(rng)?;
        let g = make(rng)?;
        Ok(Self { h, g })
    }

    pub fn num_relays(&self) -> usize {
        self.h.len()
    }

    pub fn at(&mut self, symbol_index: u64) -> Result<ChannelRealization> {
        let h = self
            .h
            .iter_mut()
            .map(|p| p.sample(symbol_index))
            .collect::<Result<_>>()?;
        let g = self
            .g
            .iter_mut()
            .map(|p| p.sample(symbol_index))
            .collect::<Result<_>>()?;
        Ok(ChannelRealization { h, g })
    }
}
