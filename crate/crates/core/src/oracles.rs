//! Closed-form batch beamformers that assume full channel knowledge.
//!
//! They serve as the optimum the adaptive schemes are measured against and
//! as baselines in the BER comparisons.

use num_complex::Complex64;

use crate::adaptation::{init_weights, BeamVector, ConstraintKind, ZERO_TOL};
use crate::error::{Error, Result};
use crate::network::CompoundParams;

/// Equal-gain combining weights plus the relays whose compound channel was
/// zero (those get weight 1).
#[derive(Debug, Clone, PartialEq)]
pub struct EgcDesign {
    pub weights: BeamVector,
    pub degenerate_relays: Vec<usize>,
}

/// Phase-aligning weights `w_i = hbar_i / |hbar_i|` (per-relay constraint).
pub fn egc_weights(cp: &CompoundParams) -> EgcDesign {
    let mut degenerate_relays = Vec::new();
    let w = cp
        .hbar()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let m = h.norm();
            if m < ZERO_TOL {
                degenerate_relays.push(i);
                Complex64::new(1.0, 0.0)
            } else {
                h / m
            }
        })
        .collect();
    EgcDesign {
        weights: BeamVector::new_unchecked(w, ConstraintKind::PerRelay),
        degenerate_relays,
    }
}

fn unit_norm(v: Vec<Complex64>) -> Result<BeamVector> {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm < ZERO_TOL {
        return Err(Error::DegenerateChannel("compound channel is zero"));
    }
    Ok(BeamVector::new_unchecked(
        v.into_iter().map(|x| x / norm).collect(),
        ConstraintKind::SumPower,
    ))
}

/// Receive-power maximizer under the sum constraint: `w = hbar / ||hbar||`.
pub fn psp_weights(cp: &CompoundParams) -> Result<BeamVector> {
    unit_norm(cp.hbar().to_vec())
}

/// SNR maximizer under the sum constraint,
/// `w = (I + Gbar Gbar^H)^-1 hbar` normalized. `Gbar` is diagonal, so the
/// inverse is applied elementwise.
pub fn ssp_weights(cp: &CompoundParams) -> Result<BeamVector> {
    unit_norm(
        cp.hbar()
            .iter()
            .zip(cp.gbar())
            .map(|(h, g)| h / (1.0 + g.norm_sqr()))
            .collect(),
    )
}

/// Reference without beamforming: equal magnitudes, no phase alignment.
pub fn nobf_weights(num_relays: usize) -> BeamVector {
    init_weights(num_relays, ConstraintKind::SumPower)
}
