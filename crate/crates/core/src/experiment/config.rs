use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::admm::AdmmConfig;
use crate::error::{Error, Result};
use crate::simkit::{JrcWeights, SceneConfig, SimConfig};

/// Where each run's instance comes from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub sim: SimConfig,
    pub scene: SceneConfig,
    /// Saved instance to solve instead of generating one; the master seed
    /// then only drives the solver initialization.
    pub instance_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// `init_seed` is replaced per run by a seed derived from the master seed.
    pub admm: AdmmConfig<f64>,
    /// Fidelity weights and regularizers; `None` keeps the generator's
    /// recipe or the saved instance's own.
    pub weights: Option<JrcWeights>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    pub seeds: Vec<u64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Write wall-clock times into the traces; off by default so reruns are
    /// byte-identical (`elapsed_s` is then written as `NaN`).
    #[serde(default)]
    pub record_timing: bool,
    /// Also write `instance_<seed>.json` for each generated instance.
    #[serde(default)]
    pub save_instances: bool,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            solver: SolverConfig::default(),
            seeds: vec![0],
            output_dir: default_output_dir(),
            record_timing: false,
            save_instances: false,
        }
    }
}

impl RunConfig {
    /// Parses and validates a config document. Errors name the offending
    /// field path and position.
    pub fn from_json_str(text: &str, origin: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse(format!(
                "{origin}: line {} column {}: at `{path}`: {inner}",
                inner.line(),
                inner.column()
            ))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("seeds: at least one seed is required".into()));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = self.seeds.iter().find(|s| !seen.insert(**s)) {
            return Err(Error::InvalidConfig(format!("seeds: duplicate seed {dup}")));
        }
        if self.scenario.instance_path.is_none() {
            self.scenario.sim.validate()?;
        }
        self.solver.admm.validate()?;
        if let Some(w) = &self.solver.weights {
            w.reg_channel.validate()?;
            w.reg_signal.validate()?;
            let ok = w.lambda_radar >= 0.0 && w.lambda_comm >= 0.0 && w.lambda_radar + w.lambda_comm > 0.0;
            if !ok {
                return Err(Error::InvalidConfig(
                    "solver.weights: fidelity weights must be nonnegative with a positive sum".into(),
                ));
            }
        }
        Ok(())
    }
}
