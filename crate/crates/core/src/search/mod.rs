//! Optimizers: MAP-Elites with probabilistic crossover and the elitist
//! (μ+λ) pure-fitness baseline.
//!
//! Both draw every random decision from one seeded stream on the driving
//! thread; only evaluation fans out to workers, and results are consumed in
//! candidate order, so the worker count never changes the outcome.

mod archive;
mod log;
mod map_elites;
mod mu_lambda;

pub use archive::{Archive, Elite, Insertion};
pub use log::{FlightTracker, LogRow, RunLog};
pub use map_elites::map_elites_run;
pub use mu_lambda::{mu_plus_lambda_run, Member, Population};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::{ArchiveLayout, BehaviorDescriptor};
use crate::error::{Error, Result};
use crate::fitness::{evaluate_shape, EvaluationResult, FitnessConfig};
use crate::genome::{decode, DecodeConfig, Genome};
use crate::sim::TickConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchBudget {
    pub init_samples: usize,
    pub total_offspring: usize,
    pub mu: usize,
    pub lambda: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_rate: f64,
    pub mutation_eta: f64,
    /// Candidates generated from one archive state and evaluated together.
    pub batch_size: usize,
    pub log_interval: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            init_samples: 100,
            total_offspring: 60_000,
            mu: 20,
            lambda: 20,
            generations: 3005,
            crossover_prob: 0.5,
            mutation_rate: 0.3,
            mutation_eta: 20.0,
            batch_size: 10,
            log_interval: 100,
        }
    }
}

impl SearchBudget {
    pub fn validate(&self) -> Result<()> {
        if self.init_samples == 0 || self.mu == 0 || self.lambda == 0 {
            return Err(Error::Config("init_samples, mu and lambda must be positive".into()));
        }
        if self.batch_size == 0 || self.log_interval == 0 {
            return Err(Error::Config("batch_size and log_interval must be positive".into()));
        }
        let unit = 0.0..=1.0;
        if !unit.contains(&self.crossover_prob) || !unit.contains(&self.mutation_rate) {
            return Err(Error::Config("probabilities must lie in [0, 1]".into()));
        }
        if self.mutation_eta < 0.0 {
            return Err(Error::Config("mutation_eta must be non-negative".into()));
        }
        Ok(())
    }
}

/// Everything needed to turn a genome into a scored, characterized candidate.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalSetup {
    pub decode: DecodeConfig,
    pub tick: TickConfig,
    pub fitness: FitnessConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assessment {
    pub descriptor: BehaviorDescriptor,
    pub result: EvaluationResult,
}

impl EvalSetup {
    pub fn evaluate(&self, g: &Genome) -> Result<EvaluationResult> {
        Ok(evaluate_shape(&decode(g, &self.decode)?, &self.tick, &self.fitness))
    }

    pub fn assess(&self, g: &Genome, layout: &ArchiveLayout) -> Result<Assessment> {
        let shape = decode(g, &self.decode)?;
        Ok(Assessment {
            descriptor: layout.describe(&shape),
            result: evaluate_shape(&shape, &self.tick, &self.fitness),
        })
    }
}

pub(crate) fn worker_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to start worker pool")
}

/// Applies `f` to every genome of `batch` on `pool`, keeping batch order.
pub(crate) fn par_map<T, F>(pool: &rayon::ThreadPool, batch: &[Genome], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Genome) -> Result<T> + Sync + Send,
{
    pool.install(|| batch.par_iter().map(f).collect())
}
