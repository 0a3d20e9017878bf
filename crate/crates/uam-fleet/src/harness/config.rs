//! Experiment configuration, loaded from a single JSON file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::demand::DemandParams;
use crate::error::{Error, Result};
use crate::milp::SolverLimits;
use crate::network::NetworkConfig;
use crate::schedule::SyntheticScheduleParams;

/// Where the airline schedule comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleSource {
    /// Load the `date,direction,minute,seats` schema from disk.
    Csv { path: PathBuf },
    Synthetic(SyntheticScheduleParams),
}

/// One demand scenario: daily directional demand and autoregression strength.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Scenario {
    pub add: f64,
    pub ar_coeff: f64,
}

impl Scenario {
    /// Stable scenario label used in filenames and plot legends.
    pub fn label(&self) -> String {
        format!("add{}_ar{}", self.add, self.ar_coeff)
    }

    pub fn demand_params(&self) -> Result<DemandParams> {
        DemandParams::new(self.add, self.ar_coeff)
    }
}

/// Which fleet sizes the spill stage evaluates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SweepSpec {
    /// F* down to F* - depth, per profile.
    Relative { depth: u32 },
    /// Fixed fleet sizes shared by every profile.
    Absolute { sizes: Vec<u32> },
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec::Relative { depth: 3 }
    }
}

impl SweepSpec {
    /// Fleet sizes to evaluate for a profile with zero-spill fleet `f_star`,
    /// ascending.
    pub fn fleet_sizes(&self, f_star: u32) -> Vec<u32> {
        match self {
            SweepSpec::Relative { depth } => (f_star.saturating_sub(*depth)..=f_star).collect(),
            SweepSpec::Absolute { sizes } => {
                let mut sizes = sizes.clone();
                sizes.sort_unstable();
                sizes.dedup();
                sizes
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schedule: ScheduleSource,
    pub scenarios: Vec<Scenario>,
    #[serde(default)]
    pub network: NetworkConfig,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub solver: SolverLimits,
    #[serde(default)]
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// Maximum passenger wait before a partially filled flight dispatches.
    #[serde(default = "default_max_wait")]
    pub max_wait_minutes: f64,
}

fn default_max_wait() -> f64 {
    5.0
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_file(path: &Path) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() {
            return Err(Error::Config("need at least one scenario".into()));
        }
        for scenario in &self.scenarios {
            scenario.demand_params()?;
        }
        self.network.validate()?;
        if self.max_wait_minutes <= 0.0 {
            return Err(Error::Config("max_wait_minutes must be > 0".into()));
        }
        if self.solver.time_limit_s <= 0.0 || self.solver.rel_gap < 0.0 {
            return Err(Error::Config("bad solver limits".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_json_roundtrip() {
        let text = r#"{
            "schedule": {"kind": "csv", "path": "sched.csv"},
            "scenarios": [{"add": 500.0, "ar_coeff": 0.7}],
            "output_dir": "out"
        }"#;
        let config = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(config.scenarios[0].label(), "add500_ar0.7");
        assert_eq!(config.base_seed, 0);
        assert_eq!(config.max_wait_minutes, 5.0);
        assert!(matches!(config.sweep, SweepSpec::Relative { depth: 3 }));
        let json = serde_json::to_string(&config).unwrap();
        let back = ExperimentConfig::from_json(&json).unwrap();
        assert_eq!(back.scenarios.len(), 1);
    }

    #[test]
    fn synthetic_source_parses() {
        let text = r#"{
            "schedule": {"kind": "synthetic", "days": 3, "daily_flights_mean": 40.0,
                         "seat_mix": [[150, 1.0]], "seed": 9},
            "scenarios": [{"add": 100.0, "ar_coeff": 0.0}],
            "output_dir": "out"
        }"#;
        let config = ExperimentConfig::from_json(text).unwrap();
        match &config.schedule {
            ScheduleSource::Synthetic(params) => assert_eq!(params.days, 3),
            other => panic!("wrong source {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_scenarios_and_bad_coeff() {
        let text = r#"{
            "schedule": {"kind": "csv", "path": "s.csv"},
            "scenarios": [],
            "output_dir": "out"
        }"#;
        assert!(matches!(
            ExperimentConfig::from_json(text),
            Err(Error::Config(_))
        ));
        let text = r#"{
            "schedule": {"kind": "csv", "path": "s.csv"},
            "scenarios": [{"add": 100.0, "ar_coeff": 1.5}],
            "output_dir": "out"
        }"#;
        assert!(ExperimentConfig::from_json(text).is_err());
    }

    #[test]
    fn sweep_sizes() {
        assert_eq!(SweepSpec::Relative { depth: 3 }.fleet_sizes(5), vec![2, 3, 4, 5]);
        assert_eq!(SweepSpec::Relative { depth: 3 }.fleet_sizes(1), vec![0, 1]);
        assert_eq!(
            SweepSpec::Absolute { sizes: vec![8, 2, 2, 4] }.fleet_sizes(99),
            vec![2, 4, 8]
        );
    }
}
