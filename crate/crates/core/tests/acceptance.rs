//! Acceptance suite. Runs every criterion at full size and prints one line
//! per criterion; exits with status 1 if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use num_complex::Complex64;
use pbbf_core::adaptation::{AdaptationRule, ConstraintKind, Scheme, Training};
use pbbf_core::channel::{complex_gaussian, sample_static_rayleigh, JakesProcess};
use pbbf_core::engine::report::to_csv;
use pbbf_core::engine::{
    run_ber_experiment, run_convergence_experiment, run_tracking_experiment, BeamformerKind, BerPoint, ChannelSource,
    ExperimentConfig, Link, LinkConfig, PmEstimationMode, Scenario,
};
use pbbf_core::estimation::{default_pilots, estimate_compound_channel, PilotBlock};
use pbbf_core::membership::{decode_message, encode_message, DestinationController, RelayAgent, RelayRegistry};
use pbbf_core::network::{
    compound_params, ideal_gains, objective_power, objective_snr, simulate_symbol, CompoundParams, NetworkParams,
    Objective,
};
use pbbf_core::oracles::{psp_weights, ssp_weights};
use pbbf_core::rng::{substream, Domain};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn convergence_rate() -> Outcome {
    let fraction = |scheme, frames: usize| {
        let mut cfg = ExperimentConfig {
            scheme,
            num_realizations: 10_000,
            num_frames: frames,
            ..ExperimentConfig::default()
        };
        cfg.convergence.cdf_frames = vec![frames];
        cfg.convergence.gap_thresholds = vec![0.043];
        cfg.convergence.trajectory_realizations = 0;
        run_convergence_experiment(&cfg).unwrap().gap_cdf[0].fraction
    };
    let pm = fraction(Scheme::PlusMinus, 40);
    let tr = fraction(Scheme::TakeReject, 70);
    (
        pm >= 0.88 && tr >= 0.88,
        format!("fraction with gap < 0.043: P/M@40 = {pm:.4}, T/R@70 = {tr:.4} (need >= 0.88)"),
    )
}

fn take_reject_monotonicity() -> Outcome {
    let cfg = ExperimentConfig {
        scheme: Scheme::TakeReject,
        forgetting_factor: 1.0,
        ..ExperimentConfig::default()
    };
    let params = NetworkParams::from_nominal_snr(3, 18.0, cfg.constraint).unwrap();
    let link_cfg = LinkConfig {
        scenario: Scenario::Idealized,
        rule: cfg.rule(),
        objective: Objective::Snr,
        params,
        frame: cfg.frame,
        pm_estimation: PmEstimationMode::Split,
    };
    let pl = default_path_loss();
    let mut violations = 0;
    for r in 0..1000 {
        let chan = sample_static_rayleigh(&mut substream(77, Domain::Channel, 0, r), &pl);
        let mut source = ChannelSource::Static(chan);
        let mut noise = substream(77, Domain::Noise, 0, r);
        let mut link = Link::new(link_cfg).unwrap();
        let mut last = f64::NEG_INFINITY;
        for _ in 0..500 {
            let j = link.run_frame(&mut source, None, &mut noise).unwrap().objective_data;
            violations += usize::from(j < last);
            last = j;
        }
    }
    (
        violations == 0,
        format!("{violations} decreases over 1000 realizations x 500 frames"),
    )
}

fn oracle_optimality() -> Outcome {
    let mut rng = rng(3);
    let (mut worst_snr, mut worst_power, mut psp_err) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0f64);
    for _ in 0..1000 {
        let (p, cp) = random_compound(&mut rng, 18.0, ConstraintKind::SumPower);
        let best_snr = objective_snr(&ssp_weights(&cp).unwrap(), &cp, p.noise_power);
        let best_power = objective_power(&psp_weights(&cp).unwrap(), &cp);
        psp_err = psp_err.max((best_power - cp.hbar_energy()).abs() / cp.hbar_energy());
        for _ in 0..100_000 {
            let w = random_unit_vector(&mut rng, 3);
            worst_snr = worst_snr.max(objective_snr(&w, &cp, p.noise_power) / best_snr - 1.0);
            worst_power = worst_power.max(objective_power(&w, &cp) / best_power - 1.0);
        }
    }
    (
        worst_snr <= 1e-9 && worst_power <= 1e-9 && psp_err <= 1e-9,
        format!(
            "max random excess over S-SP {worst_snr:.2e}, over P-SP {worst_power:.2e}; P-SP vs ||hbar||^2 rel. error {psp_err:.2e} (slack 1e-9)"
        ),
    )
}

fn ber_config(snr_db_grid: Vec<f64>, schemes: Vec<BeamformerKind>, scheme: Scheme) -> ExperimentConfig {
    let mut cfg = ExperimentConfig {
        scheme,
        snr_db_grid,
        num_realizations: 1_000_000,
        ..ExperimentConfig::default()
    };
    cfg.ber.schemes = schemes;
    cfg
}

fn ber_of(points: &[BerPoint], scheme: BeamformerKind, snr: f64) -> f64 {
    points
        .iter()
        .find(|p| p.scheme == scheme && p.snr_db == snr)
        .unwrap()
        .ber()
}

fn pb_matches_batch() -> Outcome {
    use BeamformerKind::*;
    let mut ok = true;
    let mut parts = Vec::new();
    for scheme in [Scheme::PlusMinus, Scheme::TakeReject] {
        let pts = run_ber_experiment(&ber_config(vec![18.0], vec![Ssp, PbSsp, Psp, PbPsp], scheme)).unwrap();
        ok &= pts.iter().all(|p| p.bits >= 100_000);
        for (pb, batch) in [(PbSsp, Ssp), (PbPsp, Psp)] {
            let ratio = ber_of(&pts, pb, 18.0) / ber_of(&pts, batch, 18.0);
            ok &= (1.0 / 1.5..=1.5).contains(&ratio);
            parts.push(format!("{:?} {}/{} = {ratio:.3}", scheme, pb.label(), batch.label()));
        }
    }
    (
        ok,
        format!("BER ratios at 18 dB: {} (need within factor 1.5)", parts.join(", ")),
    )
}

/// SNR where a BER curve crosses `target`, interpolating log10(BER) linearly in dB.
fn crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 < target {
            let (l0, l1, lt) = (y0.log10(), y1.log10(), target.log10());
            Some(x0 + (lt - l0) / (l1 - l0) * (x1 - x0))
        } else {
            None
        }
    })
}

fn beamforming_gain() -> Outcome {
    use BeamformerKind::*;
    let grid: Vec<f64> = (0..=14).map(|k| 2.0 * k as f64).collect();
    let pts = run_ber_experiment(&ber_config(grid.clone(), vec![NoBf, PbSsp], Scheme::PlusMinus)).unwrap();
    let curve = |s| grid.iter().map(|&x| (x, ber_of(&pts, s, x))).collect::<Vec<_>>();
    match (crossing(&curve(NoBf), 1e-2), crossing(&curve(PbSsp), 1e-2)) {
        (Some(a), Some(b)) => {
            let gap = a - b;
            (
                (gap - 8.0).abs() <= 1.5,
                format!("BER 1e-2 at {a:.2} dB (no-BF) and {b:.2} dB (PB-S-SP): gain {gap:.2} dB (need 8 +- 1.5)"),
            )
        }
        other => (false, format!("BER 1e-2 not crossed on the grid: {other:?}")),
    }
}

fn high_snr_ordering() -> Outcome {
    use BeamformerKind::*;
    let pts = run_ber_experiment(&ber_config(vec![20.0, 26.0], vec![Ssp, Egc, Psp], Scheme::PlusMinus)).unwrap();
    let (ssp, egc, psp) = (
        ber_of(&pts, Ssp, 26.0),
        ber_of(&pts, Egc, 26.0),
        ber_of(&pts, Psp, 26.0),
    );
    // d log10(BER) / d log10(SNR) with SNR in linear units.
    let slope = |s| (ber_of(&pts, s, 26.0).log10() - ber_of(&pts, s, 20.0).log10()) / 0.6;
    let (ss, se) = (slope(Ssp), slope(Egc));
    (
        ssp < egc && egc <= 1.3 * psp && ss < se,
        format!(
            "BER at 26 dB: S-SP {ssp:.3e}, EGC {egc:.3e}, P-SP {psp:.3e}; slope 20-26 dB: S-SP {ss:.2}, EGC {se:.2}"
        ),
    )
}

fn estimator_calibration() -> Outcome {
    let mut rng = rng(7);
    let params = NetworkParams::from_nominal_snr(3, 10.0, ConstraintKind::SumPower).unwrap();
    let chan = sample_static_rayleigh(&mut rng, &default_path_loss());
    let alphas = ideal_gains(&params, &chan);
    let cp = compound_params(&params, &chan, &alphas).unwrap();
    let w = random_unit_vector(&mut rng, 3);
    let pilots = default_pilots(10);
    let trials = 100_000;
    let est: Vec<Complex64> = (0..trials)
        .map(|_| {
            let y = pilots
                .iter()
                .map(|&s| simulate_symbol(&params, &chan, &alphas, &w, s, &mut rng))
                .collect();
            estimate_compound_channel(&PilotBlock::new(pilots.clone(), y).unwrap()).unwrap()
        })
        .collect();
    let mean = est.iter().sum::<Complex64>() / trials as f64;
    let var = est.iter().map(|e| (e - mean).norm_sqr()).sum::<f64>() / (trials - 1) as f64;
    let expected = params.noise_power * (1.0 + cp.forward_noise_gain(&w)) / 10.0;
    let rel = (var - expected).abs() / expected;
    (
        rel <= 0.05,
        format!("variance {var:.5} vs {expected:.5}, relative error {rel:.4} (need <= 0.05)"),
    )
}

fn jakes_fidelity() -> Outcome {
    let (fd, spf) = (0.5, 50usize);
    let fd_sym = fd / spf as f64;
    let max_lag = (2.404_825_557_695_773 / (2.0 * PI * fd_sym)).floor() as u64;
    let paths = 100_000;
    let mut rng = rng(8);
    let mut acc = vec![Complex64::new(0.0, 0.0); max_lag as usize + 1];
    for _ in 0..paths {
        let mut p = JakesProcess::new(&mut rng, fd, 1.0, 32, spf).unwrap();
        let c0 = p.sample(0).unwrap();
        acc[0] += c0.norm_sqr();
        for tau in 1..=max_lag {
            acc[tau as usize] += p.sample(tau).unwrap() * c0.conj();
        }
    }
    let worst = acc
        .iter()
        .enumerate()
        .map(|(tau, a)| (a.re / paths as f64 - bessel_j0(2.0 * PI * fd_sym * tau as f64)).abs())
        .fold(0.0, f64::max);
    (
        worst <= 0.05,
        format!(
            "max |R(tau) - J0| = {worst:.4} over {} lags (need <= 0.05)",
            max_lag + 1
        ),
    )
}

fn tracking_shape() -> Outcome {
    let grid = vec![0.0, 0.001, 0.01, 0.05];
    let mut cfg = ExperimentConfig {
        scenario: Scenario::Realistic,
        scheme: Scheme::PlusMinus,
        snr_db_grid: vec![22.0],
        normalized_doppler_grid: grid.clone(),
        num_realizations: 150,
        ..ExperimentConfig::default()
    };
    cfg.tracking.schemes = vec![BeamformerKind::PbSsp];
    cfg.tracking.betas = vec![0.1, 0.5];
    let pts = run_tracking_experiment(&cfg).unwrap();
    let curve = |beta: f64| -> Vec<f64> { pts.iter().filter(|p| p.beta == beta).map(|p| p.ber()).collect() };
    let (a, b) = (curve(0.1), curve(0.5));
    let n = grid.len();
    let growth = (a[n - 1] / a[0]).min(b[n - 1] / b[0]);
    let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let crosses = diff
        .windows(2)
        .any(|d| d[0].signum() != d[1].signum() && d[0] != 0.0 && d[1] != 0.0);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ");
    (
        growth >= 3.0 && crosses,
        format!(
            "Doppler {grid:?}: beta 0.1 [{}], beta 0.5 [{}]; growth {growth:.1}x (need >= 3), crossing {crosses}",
            fmt(&a),
            fmt(&b)
        ),
    )
}

fn distributed_consistency() -> Outcome {
    let max = 4;
    let mut mismatches = 0;
    for scheme in [Scheme::TakeReject, Scheme::PlusMinus] {
        for constraint in [ConstraintKind::SumPower, ConstraintKind::PerRelay] {
            let rule = AdaptationRule {
                scheme,
                constraint,
                beta: 0.1,
                forgetting_factor: 1.0,
            };
            let mut rng = rng(10);
            let hbar: Vec<Complex64> = (0..max).map(|_| complex_gaussian(&mut rng, 1.0)).collect();
            let gbar: Vec<Complex64> = (0..max).map(|_| complex_gaussian(&mut rng, 1.0)).collect();
            let registry = RelayRegistry::new(max, &[0, 1, 2]).unwrap();
            let mut dest = DestinationController::new(rule, registry.clone()).unwrap();
            let mut agents: Vec<RelayAgent> = (0..3)
                .map(|i| RelayAgent::new(i, rule, registry.clone()).unwrap())
                .collect();
            let wire = |m| decode_message(&encode_message(&m, max).unwrap(), max).unwrap();
            for frame in 0..1000 {
                if frame == 400 {
                    let msg = wire(dest.relay_died(0).unwrap());
                    agents.retain_mut(|a| a.on_message(&msg).unwrap());
                }
                if frame == 700 {
                    let msg = wire(dest.relay_born(3).unwrap());
                    for a in &mut agents {
                        a.on_message(&msg).unwrap();
                    }
                    agents.push(RelayAgent::join(3, rule, &msg).unwrap());
                }
                let active = dest.registry().active_indices();
                let cp = CompoundParams::new(
                    active.iter().map(|&i| hbar[i]).collect(),
                    active.iter().map(|&i| gbar[i]).collect(),
                )
                .unwrap();
                let central = dest.training();
                for a in &agents {
                    let pos = dest.registry().position(a.id()).unwrap();
                    let own = |t: &Training| match t {
                        Training::Single(w) => vec![w.weights()[pos]],
                        Training::Pair { plus, minus } => vec![plus.weights()[pos], minus.weights()[pos]],
                    };
                    mismatches += usize::from(own(&a.training()) != own(&central) || a.registry() != dest.registry());
                }
                let bit = dest.run_frame(|w| objective_snr(w, &cp, 1.0)).unwrap();
                for a in &mut agents {
                    a.on_feedback(bit);
                    let pos = dest.registry().position(a.id()).unwrap();
                    mismatches += usize::from(a.own_weight() != dest.state().w_data().weights()[pos]);
                }
            }
        }
    }
    (
        mismatches == 0,
        format!("{mismatches} bitwise mismatches over 4 x 1000 frames with one death and one birth"),
    )
}

fn determinism() -> Outcome {
    let run = |workers: Option<usize>| {
        let mut conv = ExperimentConfig {
            workers,
            num_realizations: 300,
            ..ExperimentConfig::default()
        };
        conv.convergence.trajectory_realizations = 300;
        let out = run_convergence_experiment(&conv).unwrap();

        let mut ber = ExperimentConfig {
            workers,
            snr_db_grid: vec![4.0, 14.0],
            num_realizations: 2000,
            ..ExperimentConfig::default()
        };
        ber.ber.min_realizations = 500;
        ber.ber.warmup_frames = 100;
        let ber_rows: Vec<_> = run_ber_experiment(&ber).unwrap().iter().map(|p| p.row()).collect();

        let mut track = ExperimentConfig {
            workers,
            scenario: Scenario::Realistic,
            snr_db_grid: vec![22.0],
            normalized_doppler_grid: vec![0.0, 0.01],
            num_realizations: 12,
            ..ExperimentConfig::default()
        };
        track.tracking.warmup_frames = 50;
        track.tracking.data_frames = 50;
        let track_rows: Vec<_> = run_tracking_experiment(&track)
            .unwrap()
            .iter()
            .map(|p| p.row())
            .collect();
        [
            to_csv(&out.trajectories),
            to_csv(&out.gap_cdf),
            to_csv(&ber_rows),
            to_csv(&track_rows),
        ]
        .concat()
    };
    let reference = run(Some(1));
    let same = [run(Some(1)), run(Some(2)), run(Some(4)), run(None)]
        .iter()
        .all(|x| *x == reference);
    (
        same,
        format!(
            "{} CSV bytes identical across reruns and 1/2/4/default workers: {same}",
            reference.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("convergence rate", convergence_rate),
        ("take/reject monotonicity", take_reject_monotonicity),
        ("oracle optimality", oracle_optimality),
        ("PB BER matches batch BER", pb_matches_batch),
        ("beamforming gain at BER 1e-2", beamforming_gain),
        ("high-SNR ordering and diversity", high_snr_ordering),
        ("estimator calibration", estimator_calibration),
        ("Jakes autocorrelation", jakes_fidelity),
        ("tracking versus Doppler", tracking_shape),
        ("distributed consistency", distributed_consistency),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = (k + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = run();
        failed += usize::from(!ok);
        println!(
            "criterion {id:>2} {} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
