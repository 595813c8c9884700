use serde::{Deserialize, Serialize};

use crate::adaptation::{AdaptationRule, ConstraintKind, Scheme};
use crate::channel::{PathLoss, DEFAULT_OSCILLATORS, MIN_OSCILLATORS};
use crate::error::{Error, Result};
use crate::network::Objective;

/// Channel knowledge at the nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Static channels, ideal relay gains and exact objectives at the
    /// destination.
    Idealized,
    /// Jakes fading evolving per symbol, measured relay gains and
    /// pilot-based estimates at the destination.
    Realistic,
}

/// How plus/minus obtains the channel estimate used for data detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PmEstimationMode {
    /// The winning half's estimate, used in the next frame.
    Split,
    /// Estimate over the whole training interval of the same frame.
    Whole,
}

/// Symbols per frame: pilots first, then data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameConfig {
    pub num_pilots: usize,
    pub num_data: usize,
}

impl Default for FrameConfig {
    fn default() -> Self {
        Self {
            num_pilots: 10,
            num_data: 40,
        }
    }
}

impl FrameConfig {
    pub fn len(&self) -> usize {
        self.num_pilots + self.num_data
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Length of each plus/minus training half.
    pub fn half(&self) -> usize {
        self.num_pilots / 2
    }

    pub fn validate(&self, scheme: Scheme) -> Result<()> {
        if self.num_pilots == 0 {
            return Err(Error::Config("a frame needs at least one pilot".into()));
        }
        if scheme == Scheme::PlusMinus && (self.num_pilots < 2 || !self.num_pilots.is_multiple_of(2)) {
            return Err(Error::Config(format!(
                "plus/minus needs an even pilot count >= 2, got {}",
                self.num_pilots
            )));
        }
        Ok(())
    }
}

/// Beamformers compared in the BER experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BeamformerKind {
    #[serde(rename = "no-BF")]
    NoBf,
    #[serde(rename = "EGC")]
    Egc,
    #[serde(rename = "P-SP")]
    Psp,
    #[serde(rename = "S-SP")]
    Ssp,
    #[serde(rename = "PB-EGC")]
    PbEgc,
    #[serde(rename = "PB-P-SP")]
    PbPsp,
    #[serde(rename = "PB-S-SP")]
    PbSsp,
}

impl BeamformerKind {
    pub const ALL: [BeamformerKind; 7] = [
        Self::NoBf,
        Self::Egc,
        Self::Psp,
        Self::Ssp,
        Self::PbEgc,
        Self::PbPsp,
        Self::PbSsp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::NoBf => "no-BF",
            Self::Egc => "EGC",
            Self::Psp => "P-SP",
            Self::Ssp => "S-SP",
            Self::PbEgc => "PB-EGC",
            Self::PbPsp => "PB-P-SP",
            Self::PbSsp => "PB-S-SP",
        }
    }

    pub fn constraint(self) -> ConstraintKind {
        match self {
            Self::Egc | Self::PbEgc => ConstraintKind::PerRelay,
            _ => ConstraintKind::SumPower,
        }
    }

    /// Objective approached by the adaptive variant.
    pub fn objective(self) -> Objective {
        match self {
            Self::Ssp | Self::PbSsp => Objective::Snr,
            _ => Objective::Power,
        }
    }

    pub fn is_adaptive(self) -> bool {
        matches!(self, Self::PbEgc | Self::PbPsp | Self::PbSsp)
    }
}

/// Settings of the convergence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceSettings {
    /// Frame counts after which the gap distribution is tabulated.
    pub cdf_frames: Vec<usize>,
    /// Thresholds of the gap cdf table.
    pub gap_thresholds: Vec<f64>,
    /// Number of realizations whose full trajectory is written out.
    pub trajectory_realizations: usize,
}

impl Default for ConvergenceSettings {
    fn default() -> Self {
        Self {
            cdf_frames: vec![10, 20, 40, 70, 100],
            gap_thresholds: (0..=200).map(|i| i as f64 / 1000.0).collect(),
            trajectory_realizations: 10,
        }
    }
}

/// Settings of the BER experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerSettings {
    pub schemes: Vec<BeamformerKind>,
    /// Adaptation frames per realization before errors are counted.
    pub warmup_frames: usize,
    /// Counted frames per realization.
    pub data_frames: usize,
    /// A point stops once it has this many errors (and `min_realizations`).
    pub min_errors: u64,
    /// A point stops once it has this many bits.
    pub max_bits: u64,
    pub min_realizations: usize,
}

impl Default for BerSettings {
    fn default() -> Self {
        Self {
            schemes: BeamformerKind::ALL.to_vec(),
            warmup_frames: 300,
            data_frames: 25,
            min_errors: 100,
            max_bits: 10_000_000,
            min_realizations: 1000,
        }
    }
}

/// Settings of the Doppler tracking experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackingSettings {
    pub schemes: Vec<BeamformerKind>,
    /// Step sizes compared; each gets its own curve.
    pub betas: Vec<f64>,
    pub warmup_frames: usize,
    pub data_frames: usize,
    pub num_oscillators: usize,
}

impl Default for TrackingSettings {
    fn default() -> Self {
        Self {
            schemes: vec![BeamformerKind::PbSsp],
            betas: vec![0.1, 0.5],
            warmup_frames: 200,
            data_frames: 400,
            num_oscillators: DEFAULT_OSCILLATORS,
        }
    }
}

/// Declarative description of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub scheme: Scheme,
    pub objective: Objective,
    pub constraint: ConstraintKind,
    pub beta: f64,
    /// Nominal SNR `Psum/N0` grid in dB.
    pub snr_db_grid: Vec<f64>,
    /// Doppler frequency times frame duration.
    pub normalized_doppler_grid: Vec<f64>,
    pub num_relays: usize,
    pub distances: Vec<f64>,
    pub num_realizations: usize,
    pub num_frames: usize,
    pub seed: u64,
    pub forgetting_factor: f64,
    pub pm_estimation_mode: PmEstimationMode,
    pub frame: FrameConfig,
    pub convergence: ConvergenceSettings,
    pub ber: BerSettings,
    pub tracking: TrackingSettings,
    /// Worker threads; `None` uses all cores. Results do not depend on it.
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Idealized,
            scheme: Scheme::PlusMinus,
            objective: Objective::Snr,
            constraint: ConstraintKind::SumPower,
            beta: 0.1,
            snr_db_grid: vec![18.0],
            normalized_doppler_grid: vec![],
            num_relays: 3,
            distances: vec![1.0, 3.0, 5.0],
            num_realizations: 10_000,
            num_frames: 100,
            seed: 1,
            forgetting_factor: 1.0,
            pm_estimation_mode: PmEstimationMode::Split,
            frame: FrameConfig::default(),
            convergence: ConvergenceSettings::default(),
            ber: BerSettings::default(),
            tracking: TrackingSettings::default(),
            workers: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn path_loss(&self) -> Result<PathLoss> {
        PathLoss::new(self.distances.clone()).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn rule(&self) -> AdaptationRule {
        self.rule_for(self.constraint, self.beta)
    }

    pub fn rule_for(&self, constraint: ConstraintKind, beta: f64) -> AdaptationRule {
        AdaptationRule {
            scheme: self.scheme,
            constraint,
            beta,
            forgetting_factor: self.forgetting_factor,
        }
    }

    /// Checks everything the experiments have in common.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.num_relays == 0 {
            return fail("num_relays must be positive".into());
        }
        if self.distances.len() != self.num_relays {
            return fail(format!(
                "{} distances for {} relays",
                self.distances.len(),
                self.num_relays
            ));
        }
        self.path_loss()?;
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return fail(format!("beta {} must be positive", self.beta));
        }
        if !(self.forgetting_factor > 0.0 && self.forgetting_factor <= 1.0) {
            return fail(format!(
                "forgetting_factor {} must lie in (0, 1]",
                self.forgetting_factor
            ));
        }
        if self.num_realizations == 0 {
            return fail("num_realizations must be positive".into());
        }
        if self.snr_db_grid.iter().any(|s| !s.is_finite()) {
            return fail("SNR grid entries must be finite".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be positive".into());
        }
        self.frame.validate(self.scheme)
    }

    pub fn validate_convergence(&self) -> Result<()> {
        self.validate()?;
        let fail = |msg: String| Err(Error::Config(msg));
        if self.scenario != Scenario::Idealized
            || self.objective != Objective::Snr
            || self.constraint != ConstraintKind::SumPower
        {
            return fail(
                "convergence runs the idealized scenario with the SNR objective under the sum constraint".into(),
            );
        }
        if self.snr_db_grid.len() != 1 {
            return fail("convergence takes exactly one SNR point".into());
        }
        if let Some(f) = self.convergence.cdf_frames.iter().find(|&&f| f > self.num_frames) {
            return fail(format!("cdf frame {f} exceeds num_frames {}", self.num_frames));
        }
        Ok(())
    }

    pub fn validate_ber(&self) -> Result<()> {
        self.validate()?;
        if self.scenario != Scenario::Idealized {
            return Err(Error::Config("the BER experiment runs the idealized scenario".into()));
        }
        if self.snr_db_grid.is_empty() || self.ber.schemes.is_empty() {
            return Err(Error::Config("BER needs a nonempty SNR grid and scheme list".into()));
        }
        if self.ber.data_frames == 0 {
            return Err(Error::Config("ber.data_frames must be positive".into()));
        }
        Ok(())
    }

    pub fn validate_tracking(&self) -> Result<()> {
        self.validate()?;
        let fail = |msg: String| Err(Error::Config(msg));
        if self.scenario != Scenario::Realistic {
            return fail("tracking runs the realistic scenario".into());
        }
        if self.snr_db_grid.len() != 1 {
            return fail("tracking takes exactly one SNR point".into());
        }
        if self.normalized_doppler_grid.is_empty()
            || self
                .normalized_doppler_grid
                .iter()
                .any(|d| !(d.is_finite() && *d >= 0.0))
        {
            return fail("tracking needs a nonempty grid of nonnegative Doppler values".into());
        }
        let t = &self.tracking;
        if t.schemes.is_empty() || t.schemes.iter().any(|s| !s.is_adaptive()) {
            return fail("tracking schemes must be nonempty and adaptive (PB-*)".into());
        }
        if t.betas.is_empty() || t.betas.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return fail("tracking betas must be nonempty and positive".into());
        }
        if t.data_frames == 0 {
            return fail("tracking.data_frames must be positive".into());
        }
        if t.num_oscillators < MIN_OSCILLATORS {
            return fail(format!("need at least {MIN_OSCILLATORS} oscillators"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
        ExperimentConfig::default().validate_convergence().unwrap();
        ExperimentConfig::default().validate_ber().unwrap();
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let cfg =
            ExperimentConfig::from_json(r#"{"scheme": "TR", "beta": 0.3, "ber": {"schemes": ["S-SP", "PB-S-SP"]}}"#)
                .unwrap();
        assert_eq!(cfg.scheme, Scheme::TakeReject);
        assert_eq!(cfg.ber.schemes, vec![BeamformerKind::Ssp, BeamformerKind::PbSsp]);
        assert_eq!(cfg.ber.warmup_frames, 300);
        assert_eq!(cfg.frame, FrameConfig::default());
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            r#"{"beta": 0}"#,
            r#"{"distances": [1, 2]}"#,
            r#"{"distances": [1, 0, 2]}"#,
            r#"{"frame": {"num_pilots": 5}}"#,
            r#"{"unknown_field": 1}"#,
            r#"{"forgetting_factor": 1.2}"#,
            r#"{"scheme": "XY"}"#,
        ] {
            assert!(
                matches!(ExperimentConfig::from_json(bad), Err(Error::Config(_))),
                "{bad}"
            );
        }
        // Odd pilot counts are fine for take/reject.
        ExperimentConfig::from_json(r#"{"scheme": "TR", "frame": {"num_pilots": 5}}"#).unwrap();
    }

    #[test]
    fn experiment_specific_checks() {
        let cfg = ExperimentConfig {
            objective: Objective::Power,
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate_convergence().is_err());
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.validate_tracking().is_err());
        cfg.scenario = Scenario::Realistic;
        cfg.snr_db_grid = vec![22.0];
        cfg.normalized_doppler_grid = vec![0.0, 0.01];
        cfg.validate_tracking().unwrap();
        cfg.tracking.schemes = vec![BeamformerKind::Ssp];
        assert!(cfg.validate_tracking().is_err());
    }

    #[test]
    fn labels_match_serde_names() {
        for kind in BeamformerKind::ALL {
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.label()));
        }
    }
}
