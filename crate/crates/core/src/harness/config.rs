use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::behavior::{ArchiveLayout, Characterization};
use crate::error::{Error, Result};
use crate::fitness::FitnessConfig;
use crate::genome::DecodeConfig;
use crate::search::{EvalSetup, SearchBudget};
use crate::sim::TickConfig;
use crate::voxel::BlockSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "pf")]
    PureFitness,
    #[serde(rename = "me-c")]
    BlockCount,
    #[serde(rename = "me-cn")]
    BlockCountNegativeSpace,
    #[serde(rename = "me-po")]
    PistonOrientation,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::PureFitness,
        Method::BlockCount,
        Method::BlockCountNegativeSpace,
        Method::PistonOrientation,
    ];

    /// Command-line spelling.
    pub fn flag(self) -> &'static str {
        match self {
            Method::PureFitness => "pf",
            Method::BlockCount => "me-c",
            Method::BlockCountNegativeSpace => "me-cn",
            Method::PistonOrientation => "me-po",
        }
    }

    /// Table label.
    pub fn label(self) -> &'static str {
        match self {
            Method::PureFitness => "PF",
            Method::BlockCount => "ME.C",
            Method::BlockCountNegativeSpace => "ME.CN",
            Method::PistonOrientation => "ME.PO",
        }
    }

    /// Archive layout, or `None` for the pure-fitness baseline.
    pub fn layout(self) -> Option<ArchiveLayout> {
        let c = match self {
            Method::PureFitness => return None,
            Method::BlockCount => Characterization::BlockCount,
            Method::BlockCountNegativeSpace => Characterization::BlockCountNegativeSpace,
            Method::PistonOrientation => Characterization::PistonOrientation,
        };
        Some(ArchiveLayout::new(c))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.flag() == s || m.label() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected pf, me-c, me-cn or me-po)"))
    }
}

/// A campaign: `runs` independent runs of one method on one block set.
///
/// Stored as TOML; every key is optional and falls back to the defaults
/// below.
///
/// ```toml
/// method = "me-po"        # pf | me-c | me-cn | me-po
/// block_set = "observer"  # original | observer
/// runs = 30
/// seed = 0                # run i uses seed + i
/// threads = 10
/// out = "results/me-po"
/// evals = 60100           # optional; overrides the budget's own sizes
///
/// [budget]
/// log_interval = 100
///
/// [tick]
/// emulate_observer_bug = true
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub method: Method,
    pub block_set: BlockSet,
    pub runs: usize,
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
    /// Total evaluations per run, initial samples included.
    pub evals: Option<u64>,
    pub budget: SearchBudget,
    pub tick: TickConfig,
    pub fitness: FitnessConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            method: Method::PistonOrientation,
            block_set: BlockSet::Observer,
            runs: 30,
            seed: 0,
            threads: 10,
            out: PathBuf::from("results"),
            evals: None,
            budget: SearchBudget::default(),
            tick: TickConfig::default(),
            fitness: FitnessConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        self.budget.validate()?;
        self.tick.validate()?;
        self.fitness.validate()?;
        if let Some(e) = self.evals {
            let floor = match self.method {
                Method::PureFitness => self.budget.mu,
                _ => self.budget.init_samples,
            };
            if e < floor as u64 {
                return Err(Error::Config(format!(
                    "evals = {e} is below the {floor} initial evaluations"
                )));
            }
        }
        Ok(())
    }

    /// The budget with `evals` applied: MAP-Elites gets `evals − init_samples`
    /// offspring; the baseline gets as many whole generations as fit after the
    /// initial population.
    pub fn effective_budget(&self) -> SearchBudget {
        let mut b = self.budget.clone();
        if let Some(e) = self.evals {
            match self.method {
                Method::PureFitness => {
                    b.generations = (e as usize).saturating_sub(b.mu) / b.lambda;
                }
                _ => b.total_offspring = (e as usize).saturating_sub(b.init_samples),
            }
        }
        b
    }

    pub fn setup(&self) -> EvalSetup {
        EvalSetup {
            decode: DecodeConfig::with_block_set(self.block_set),
            tick: self.tick.clone(),
            fitness: self.fitness.clone(),
        }
    }
}
