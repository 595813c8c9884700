use anyhow::anyhow;
use num_complex::Complex64;
use pbbf_core::adaptation::{BeamVector, ConstraintKind};
use pbbf_core::channel::{complex_gaussian, sample_static_rayleigh};
use pbbf_core::network::{compound_params, ideal_gains, objective_power, objective_snr, NetworkParams};
use pbbf_core::oracles::{egc_weights, nobf_weights, psp_weights, ssp_weights};
use pbbf_core::rng::{substream, Domain};
use pbbf_core::ExperimentConfig;

use crate::commands::load_config;
use crate::{Failure, OracleArgs};

const SLACK: f64 = 1e-9;

/// Largest relative excess of any random candidate over the oracles.
#[derive(Debug, Default)]
struct Excess {
    power: f64,
    snr: f64,
    egc: f64,
    nobf: f64,
}

pub fn run(args: &OracleArgs) -> Result<(), Failure> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path, None)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let path_loss = cfg.path_loss().map_err(|e| Failure::Config(e.into()))?;
    let r = cfg.num_relays;
    let snr_db = cfg.snr_db_grid.first().copied().unwrap_or(18.0);
    let runtime = |e: pbbf_core::Error| Failure::Runtime(e.into());

    let mut ex = Excess {
        power: f64::NEG_INFINITY,
        snr: f64::NEG_INFINITY,
        egc: f64::NEG_INFINITY,
        nobf: f64::NEG_INFINITY,
    };
    for c in 0..args.channels {
        let mut rng = substream(cfg.seed, Domain::Search, 0, c as u64);
        let sum = NetworkParams::from_nominal_snr(r, snr_db, ConstraintKind::SumPower).map_err(runtime)?;
        let per = NetworkParams::from_nominal_snr(r, snr_db, ConstraintKind::PerRelay).map_err(runtime)?;
        let chan = sample_static_rayleigh(&mut rng, &path_loss);
        let cp = compound_params(&sum, &chan, &ideal_gains(&sum, &chan)).map_err(runtime)?;
        let cp_per = compound_params(&per, &chan, &ideal_gains(&per, &chan)).map_err(runtime)?;

        let best_power = objective_power(&psp_weights(&cp).map_err(runtime)?, &cp);
        let best_snr = objective_snr(&ssp_weights(&cp).map_err(runtime)?, &cp, sum.noise_power);
        let best_egc = objective_power(&egc_weights(&cp_per).weights, &cp_per);
        ex.nobf = ex
            .nobf
            .max(objective_snr(&nobf_weights(r), &cp, sum.noise_power) / best_snr - 1.0);
        ex.power = ex.power.max((best_power - cp.hbar_energy()).abs() / cp.hbar_energy());

        for _ in 0..args.candidates {
            let raw: Vec<Complex64> = (0..r).map(|_| complex_gaussian(&mut rng, 1.0)).collect();
            let norm = raw.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let w =
                BeamVector::new(raw.iter().map(|x| x / norm).collect(), ConstraintKind::SumPower).map_err(runtime)?;
            ex.power = ex.power.max(objective_power(&w, &cp) / best_power - 1.0);
            ex.snr = ex.snr.max(objective_snr(&w, &cp, sum.noise_power) / best_snr - 1.0);
            let phases = BeamVector::new(raw.iter().map(|x| x / x.norm()).collect(), ConstraintKind::PerRelay)
                .map_err(runtime)?;
            ex.egc = ex.egc.max(objective_power(&phases, &cp_per) / best_egc - 1.0);
        }
    }

    let checks = [
        ("P-SP maximizes receive power", ex.power),
        ("S-SP maximizes receive SNR", ex.snr),
        ("EGC maximizes power over unit-modulus weights", ex.egc),
        ("no-BF never beats S-SP", ex.nobf),
    ];
    println!(
        "{} channels x {} random candidates, R = {r}, {snr_db} dB",
        args.channels, args.candidates
    );
    let mut ok = true;
    for (name, excess) in checks {
        let pass = excess <= SLACK;
        ok &= pass;
        println!(
            "{} {name} (max relative excess {excess:.3e})",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if ok {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Runtime(anyhow!("oracle check failed")))
    }
}
