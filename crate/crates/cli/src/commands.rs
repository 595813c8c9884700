use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use json_comments::StripComments;
use pbbf_core::engine::report::to_csv;
use pbbf_core::engine::{run_ber_experiment, run_convergence_experiment, run_tracking_experiment};
use pbbf_core::ExperimentConfig;
use serde::Serialize;

use crate::{Failure, RunArgs};

#[derive(Debug, Clone, Copy)]
pub enum Experiment {
    Convergence,
    Ber,
    Tracking,
}

impl Experiment {
    fn outputs(self) -> &'static [&'static str] {
        match self {
            Experiment::Convergence => &["convergence.csv", "gap_cdf.csv"],
            Experiment::Ber => &["ber.csv"],
            Experiment::Tracking => &["tracking.csv"],
        }
    }

    fn validate(self, cfg: &ExperimentConfig) -> pbbf_core::Result<()> {
        match self {
            Experiment::Convergence => cfg.validate_convergence(),
            Experiment::Ber => cfg.validate_ber(),
            Experiment::Tracking => cfg.validate_tracking(),
        }
    }
}

/// Provenance written next to the results.
#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    config_path: &'a Path,
    config: &'a ExperimentConfig,
    output_dir: &'a Path,
    tool_version: &'static str,
    master_seed: u64,
}

/// Reads the configuration (JSON with optional `//` and `/* */` comments)
/// and applies the seed override.
pub fn load_config(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig, Failure> {
    let raw = fs::read(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Config)?;
    let mut text = String::new();
    StripComments::new(raw.as_slice())
        .read_to_string(&mut text)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Config)?;
    let mut cfg = ExperimentConfig::from_json(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Config)?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

pub fn run(exp: Experiment, args: &RunArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config, args.seed)?;
    exp.validate(&cfg).map_err(|e| Failure::Config(e.into()))?;

    let mut files: Vec<&str> = exp.outputs().to_vec();
    files.extend(["config.json", "manifest.json"]);
    let targets: Vec<PathBuf> = files.iter().map(|f| args.out.join(f)).collect();
    if !args.force {
        if let Some(existing) = targets.iter().find(|p| p.exists()) {
            return Err(Failure::Config(anyhow!(
                "{} exists; pass --force to overwrite",
                existing.display()
            )));
        }
    }

    let runtime = |e: pbbf_core::Error| Failure::Runtime(e.into());
    let tables: Vec<String> = match exp {
        Experiment::Convergence => {
            let out = run_convergence_experiment(&cfg).map_err(runtime)?;
            for (k, gaps) in &out.gaps_at {
                let below = gaps.iter().filter(|&&g| g < 0.043).count() as f64 / gaps.len() as f64;
                println!("frames {k}: fraction with gap < 0.043 = {below:.4}");
            }
            vec![to_csv(&out.trajectories), to_csv(&out.gap_cdf)]
        }
        Experiment::Ber => {
            let points = run_ber_experiment(&cfg).map_err(runtime)?;
            for p in &points {
                println!(
                    "{:>8} {:>6.1} dB  BER {:.3e}  ({} errors / {} bits)",
                    p.scheme.label(),
                    p.snr_db,
                    p.ber(),
                    p.errors,
                    p.bits
                );
            }
            let rows: Vec<_> = points.iter().map(|p| p.row()).collect();
            vec![to_csv(&rows)]
        }
        Experiment::Tracking => {
            let points = run_tracking_experiment(&cfg).map_err(runtime)?;
            for p in &points {
                println!(
                    "{:>8} beta {:<4} Doppler {:<8} BER {:.3e}",
                    p.scheme.label(),
                    p.beta,
                    p.normalized_doppler,
                    p.ber()
                );
            }
            let rows: Vec<_> = points.iter().map(|p| p.row()).collect();
            vec![to_csv(&rows)]
        }
    };

    let manifest = RunManifest {
        config_path: &args.config,
        config: &cfg,
        output_dir: &args.out,
        tool_version: env!("CARGO_PKG_VERSION"),
        master_seed: cfg.seed,
    };
    let manifest = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    let contents = tables.into_iter().chain([cfg.to_json() + "\n", manifest + "\n"]);

    let write = || -> anyhow::Result<()> {
        fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
        for (path, text) in targets.iter().zip(contents) {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(())
    };
    write().map_err(Failure::Runtime)?;
    println!("results written to {}", args.out.display());
    Ok(())
}
