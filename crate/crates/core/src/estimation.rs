//! Destination-side ML estimates from pilot symbols: the compound channel,
//! the receive power and the SNR.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Value returned by [`estimate_snr`] when the residual vanishes.
pub const SNR_MAX: f64 = 1e12;
const RESIDUAL_FLOOR: f64 = 1e-30;

/// Known pilots `p[t]` with the matching received samples `y[t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotBlock {
    pilots: Vec<Complex64>,
    observations: Vec<Complex64>,
}

impl PilotBlock {
    pub fn new(pilots: Vec<Complex64>, observations: Vec<Complex64>) -> Result<Self> {
        if pilots.is_empty() || pilots.len() != observations.len() {
            return Err(Error::InvalidArgument(format!(
                "need equally long, nonempty pilots ({}) and observations ({})",
                pilots.len(),
                observations.len()
            )));
        }
        if pilot_energy(&pilots) <= 0.0 {
            return Err(Error::InvalidArgument("pilot energy is zero".into()));
        }
        Ok(Self { pilots, observations })
    }

    pub fn pilots(&self) -> &[Complex64] {
        &self.pilots
    }

    pub fn observations(&self) -> &[Complex64] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.pilots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pilots.is_empty()
    }

    /// Contiguous sub-block `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        Self::new(self.pilots[range.clone()].to_vec(), self.observations[range].to_vec())
    }

    /// First and second half; the length must be even.
    pub fn halves(&self) -> Result<(Self, Self)> {
        if !self.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("cannot halve {} pilots", self.len())));
        }
        let mid = self.len() / 2;
        Ok((self.slice(0..mid)?, self.slice(mid..self.len())?))
    }
}

fn pilot_energy(p: &[Complex64]) -> f64 {
    p.iter().map(|x| x.norm_sqr()).sum()
}

/// Unit-modulus all-ones pilot sequence.
pub fn default_pilots(len: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); len]
}

/// `hhat = sum y[t] conj(p[t]) / sum |p[t]|^2`.
pub fn estimate_compound_channel(block: &PilotBlock) -> Result<Complex64> {
    let energy = pilot_energy(&block.pilots);
    if energy <= 0.0 {
        return Err(Error::InvalidArgument("pilot energy is zero".into()));
    }
    let corr: Complex64 = block
        .observations
        .iter()
        .zip(&block.pilots)
        .map(|(y, p)| y * p.conj())
        .sum();
    Ok(corr / energy)
}

/// `|hhat|^2`.
pub fn estimate_power(h_hat: Complex64) -> f64 {
    h_hat.norm_sqr()
}

/// `|hhat|^2` over the mean squared residual `|y[t] - hhat p[t]|^2`, capped
/// at [`SNR_MAX`] when the residual vanishes.
pub fn estimate_snr(h_hat: Complex64, block: &PilotBlock) -> f64 {
    let residual: f64 = block
        .observations
        .iter()
        .zip(&block.pilots)
        .map(|(y, p)| (y - h_hat * p).norm_sqr())
        .sum();
    if residual < RESIDUAL_FLOOR {
        return SNR_MAX;
    }
    h_hat.norm_sqr() / (residual / block.len() as f64)
}
