#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use pbbf_core::adaptation::{BeamVector, ConstraintKind};
use pbbf_core::channel::{complex_gaussian, sample_static_rayleigh, PathLoss};
use pbbf_core::network::{compound_params, ideal_gains, CompoundParams, NetworkParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bessel J0 by trapezoid quadrature of `(1/pi) int_0^pi cos(x sin t) dt`.
pub fn bessel_j0(x: f64) -> f64 {
    let n = 4000;
    let h = PI / n as f64;
    let f = |t: f64| (x * t.sin()).cos();
    let inner: f64 = (1..n).map(|k| f(k as f64 * h)).sum();
    (inner + 0.5 * (f(0.0) + f(PI))) * h / PI
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> BeamVector {
    let raw: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng, 1.0)).collect();
    let norm = raw.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    BeamVector::new(raw.iter().map(|x| x / norm).collect(), ConstraintKind::SumPower).unwrap()
}

pub fn random_phase_vector<R: Rng>(rng: &mut R, n: usize) -> BeamVector {
    let w = (0..n)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(-PI..PI)))
        .collect();
    BeamVector::new(w, ConstraintKind::PerRelay).unwrap()
}

pub fn default_path_loss() -> PathLoss {
    PathLoss::new(vec![1.0, 3.0, 5.0]).unwrap()
}

/// Compound parameters of a random channel of the default network.
pub fn random_compound<R: Rng>(
    rng: &mut R,
    snr_db: f64,
    constraint: ConstraintKind,
) -> (NetworkParams, CompoundParams) {
    let params = NetworkParams::from_nominal_snr(3, snr_db, constraint).unwrap();
    let chan = sample_static_rayleigh(rng, &default_path_loss());
    let cp = compound_params(&params, &chan, &ideal_gains(&params, &chan)).unwrap();
    (params, cp)
}
