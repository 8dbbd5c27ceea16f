//! Experiment orchestration: campaigns of seeded runs, their on-disk layout,
//! aggregation, significance tests and shape export.
//!
//! A campaign directory looks like:
//!
//! ```text
//! out/
//!   config.toml          effective configuration
//!   run_000/log.csv      one row per logging interval
//!   run_000/archive/     MAP-Elites snapshot (population/ for the baseline)
//!   summary.csv  directions.csv  first_success.csv
//! ```

mod config;
mod export;
mod report;
mod snapshot;
mod summary;

pub use config::{ExperimentConfig, Method};
pub use export::{export_shape, replay_genome, resolve_snapshot, Selector};
pub use report::{report, CampaignReport, Comparison, Report};
pub use snapshot::{Entry, Manifest, Snapshot};
pub use summary::{round_up, CampaignSummary, RunOutcome};

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::search::{map_elites_run, mu_plus_lambda_run, RunLog};
use snapshot::write_file;

pub const CONFIG_FILE: &str = "config.toml";
pub const LOG_FILE: &str = "log.csv";

pub fn run_dir(out: &Path, run: usize) -> PathBuf {
    out.join(format!("run_{run:03}"))
}

/// Executes one run and writes its log and snapshot under `dir`.
pub fn run_once(cfg: &ExperimentConfig, seed: u64, dir: &Path) -> Result<RunLog> {
    let budget = cfg.effective_budget();
    let setup = cfg.setup();
    let manifest = |evaluations, layout| Manifest {
        method: cfg.method,
        block_set: cfg.block_set,
        seed,
        evaluations,
        layout,
        tick: cfg.tick.clone(),
        fitness: cfg.fitness.clone(),
    };
    fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let log = match cfg.method.layout() {
        Some(layout) => {
            let (archive, log) = map_elites_run(&budget, &layout, &setup, seed, cfg.threads)?;
            let snap = Snapshot::from_archive(manifest(archive.evaluations(), Some(layout)), &archive);
            snap.write(&dir.join("archive"))?;
            let mut history = String::from("evaluation,bin,fitness\n");
            for h in archive.history() {
                history.push_str(&format!("{},{},{}\n", h.evaluation, h.bin, h.fitness));
            }
            write_file(&dir.join("archive").join("history.csv"), &history)?;
            log
        }
        None => {
            let (pop, log) = mu_plus_lambda_run(&budget, &setup, seed, cfg.threads)?;
            let snap = Snapshot::from_population(manifest(pop.evaluations, None), &pop);
            snap.write(&dir.join("population"))?;
            log
        }
    };
    write_file(&dir.join(LOG_FILE), &log.to_csv())?;
    Ok(log)
}

/// Runs `cfg.runs` seeded runs (seeds `cfg.seed + i`) and writes every log,
/// snapshot and summary table into `cfg.out`.
pub fn run_campaign(cfg: &ExperimentConfig) -> Result<CampaignSummary> {
    run_campaign_with(cfg, |_, _| {})
}

/// Like [`run_campaign`], calling `progress(run, outcome)` after each run.
pub fn run_campaign_with(
    cfg: &ExperimentConfig,
    mut progress: impl FnMut(usize, &RunOutcome),
) -> Result<CampaignSummary> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out).map_err(Error::io(&cfg.out))?;
    write_file(&cfg.out.join(CONFIG_FILE), &cfg.to_toml())?;
    let mut runs = Vec::with_capacity(cfg.runs);
    for i in 0..cfg.runs {
        let seed = cfg.seed + i as u64;
        let log = run_once(cfg, seed, &run_dir(&cfg.out, i))?;
        let outcome = RunOutcome::from_log(i, seed, &log);
        progress(i, &outcome);
        runs.push(outcome);
    }
    let summary = CampaignSummary {
        method: cfg.method,
        block_set: cfg.block_set,
        log_interval: cfg.effective_budget().log_interval,
        runs,
    };
    write_summary(&cfg.out, &summary)?;
    Ok(summary)
}

pub fn write_summary(out: &Path, s: &CampaignSummary) -> Result<()> {
    write_file(&out.join("summary.csv"), &s.summary_csv())?;
    write_file(&out.join("directions.csv"), &s.directions_csv())?;
    write_file(&out.join("first_success.csv"), &s.first_success_csv())
}

/// Re-aggregates a campaign from its configuration and raw run logs.
pub fn load_campaign(dir: &Path) -> Result<CampaignSummary> {
    let cfg = ExperimentConfig::load(&dir.join(CONFIG_FILE))?;
    let mut runs = Vec::with_capacity(cfg.runs);
    for i in 0..cfg.runs {
        let path = run_dir(dir, i).join(LOG_FILE);
        let text = fs::read_to_string(&path).map_err(Error::io(&path))?;
        runs.push(RunOutcome::from_log(i, cfg.seed + i as u64, &RunLog::from_csv(&text)?));
    }
    Ok(CampaignSummary {
        method: cfg.method,
        block_set: cfg.block_set,
        log_interval: cfg.effective_budget().log_interval,
        runs,
    })
}
