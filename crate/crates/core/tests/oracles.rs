mod common;

use std::f64::consts::PI;

use common::*;
use num_complex::Complex64;
use pbbf_core::adaptation::{BeamVector, ConstraintKind};
use pbbf_core::network::{objective_power, objective_snr, CompoundParams};
use pbbf_core::oracles::{egc_weights, nobf_weights, psp_weights, ssp_weights};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn psp_beats_random_search() {
    let mut rng = rng(1);
    for _ in 0..50 {
        let (_, cp) = random_compound(&mut rng, 18.0, ConstraintKind::SumPower);
        let best = objective_power(&psp_weights(&cp).unwrap(), &cp);
        assert!((best - cp.hbar_energy()).abs() <= 1e-12 * best);
        for _ in 0..2000 {
            assert!(objective_power(&random_unit_vector(&mut rng, 3), &cp) <= best * (1.0 + 1e-9));
        }
    }
}

#[test]
fn ssp_beats_random_search() {
    let mut rng = rng(2);
    for _ in 0..50 {
        let (p, cp) = random_compound(&mut rng, 18.0, ConstraintKind::SumPower);
        let best = objective_snr(&ssp_weights(&cp).unwrap(), &cp, p.noise_power);
        for _ in 0..2000 {
            assert!(objective_snr(&random_unit_vector(&mut rng, 3), &cp, p.noise_power) <= best * (1.0 + 1e-9));
        }
    }
}

#[test]
fn two_relay_ssp_matches_grid_search() {
    let cp = CompoundParams::new(vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let w = ssp_weights(&cp).unwrap();
    let best = objective_snr(&w, &cp, 1.0);

    // w = [cos a, sin a e^{j phi}] covers the sphere up to a common phase.
    let (mut grid_best, mut arg) = (0.0, (0.0, 0.0));
    let n = 1000;
    for i in 0..=n {
        let a = 0.5 * PI * i as f64 / n as f64;
        for k in 0..n {
            let phi = 2.0 * PI * k as f64 / n as f64;
            let v = BeamVector::new(
                vec![c(a.cos(), 0.0), Complex64::from_polar(a.sin(), phi)],
                ConstraintKind::SumPower,
            )
            .unwrap();
            let j = objective_snr(&v, &cp, 1.0);
            if j > grid_best {
                grid_best = j;
                arg = (a, phi);
            }
        }
    }
    assert!(grid_best <= best * (1.0 + 1e-12));
    assert!(best - grid_best < 1e-5);
    assert!((arg.0.cos() - 1.0 / 5f64.sqrt()).abs() < 2e-3);
    assert!((arg.0.sin() - 2.0 / 5f64.sqrt()).abs() < 2e-3);
    assert!(arg.1 < 1e-9);
}

#[test]
fn ssp_dominates_normalized_egc_and_nobf() {
    let mut rng = rng(3);
    for _ in 0..10_000 {
        let (p, cp) = random_compound(&mut rng, 18.0, ConstraintKind::SumPower);
        let best = objective_snr(&ssp_weights(&cp).unwrap(), &cp, p.noise_power);
        let egc = egc_weights(&cp).weights;
        let scaled: Vec<Complex64> = egc.weights().iter().map(|x| x / 3f64.sqrt()).collect();
        let egc = BeamVector::new(scaled, ConstraintKind::SumPower).unwrap();
        assert!(objective_snr(&egc, &cp, p.noise_power) <= best * (1.0 + 1e-12));
        assert!(objective_snr(&nobf_weights(3), &cp, p.noise_power) <= best * (1.0 + 1e-12));
    }
}

#[test]
fn egc_beats_random_phases() {
    let mut rng = rng(4);
    for _ in 0..50 {
        let (_, cp) = random_compound(&mut rng, 18.0, ConstraintKind::PerRelay);
        let egc = egc_weights(&cp);
        assert!(egc.degenerate_relays.is_empty());
        let best = objective_power(&egc.weights, &cp);
        let sum_abs: f64 = cp.hbar().iter().map(|h| h.norm()).sum();
        assert!((best - sum_abs * sum_abs).abs() < 1e-12 * best);
        for _ in 0..2000 {
            assert!(objective_power(&random_phase_vector(&mut rng, 3), &cp) <= best * (1.0 + 1e-9));
        }
    }
}

#[test]
fn common_phase_leaves_objectives_unchanged() {
    let mut rng = rng(5);
    for _ in 0..100 {
        let (p, cp) = random_compound(&mut rng, 18.0, ConstraintKind::SumPower);
        for w in [
            psp_weights(&cp).unwrap(),
            ssp_weights(&cp).unwrap(),
            egc_weights(&cp).weights,
        ] {
            for phi in [0.3, -2.0, 3.1] {
                let r = w.rotated(phi);
                let (a, b) = (objective_power(&w, &cp), objective_power(&r, &cp));
                assert!((a - b).abs() <= 1e-12 * a);
                let (a, b) = (
                    objective_snr(&w, &cp, p.noise_power),
                    objective_snr(&r, &cp, p.noise_power),
                );
                assert!((a - b).abs() <= 1e-12 * a);
            }
        }
    }
}

#[test]
fn ssp_tends_to_psp_without_forward_noise() {
    let mut rng = rng(6);
    for _ in 0..100 {
        let (_, cp) = random_compound(&mut rng, 18.0, ConstraintKind::SumPower);
        let tiny: Vec<Complex64> = cp.gbar().iter().map(|g| g * 1e-9).collect();
        let cp0 = CompoundParams::new(cp.hbar().to_vec(), tiny).unwrap();
        let (a, b) = (ssp_weights(&cp0).unwrap(), psp_weights(&cp0).unwrap());
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}

#[test]
fn zero_channel_is_degenerate() {
    let cp = CompoundParams::new(vec![c(0.0, 0.0); 2], vec![c(1.0, 0.0); 2]).unwrap();
    assert!(psp_weights(&cp).is_err());
    assert!(ssp_weights(&cp).is_err());
    assert_eq!(egc_weights(&cp).degenerate_relays, vec![0, 1]);
}
