use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flyevo::fitness::EvaluationResult;
use flyevo::harness::{self, ExperimentConfig, Method, Selector};
use flyevo::voxel::BlockSet;

#[derive(Parser)]
#[command(name = "flyevo", version, about = "Evolve piston flying machines with MAP-Elites")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a campaign of seeded runs.
    Run {
        /// TOML configuration; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// pf | me-c | me-cn | me-po
        #[arg(long)]
        method: Option<Method>,
        /// original | observer
        #[arg(long)]
        block_set: Option<BlockSet>,
        #[arg(long)]
        runs: Option<usize>,
        /// Evaluations per run, initial samples included.
        #[arg(long)]
        evals: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        log_interval: Option<u64>,
        /// Keep up/down observers as placed.
        #[arg(long)]
        no_observer_bug: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Aggregate one campaign directory, or every campaign inside a directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write a stored shape to a file (best occupant unless --bin is given).
    Export {
        /// Run directory or snapshot directory.
        #[arg(long = "in")]
        input: PathBuf,
        /// Bin index (archives) or rank (populations).
        #[arg(long)]
        bin: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-evaluate a genome file and print the result.
    Replay {
        #[arg(long)]
        genome: PathBuf,
        #[arg(long)]
        block_set: Option<BlockSet>,
        #[arg(long)]
        no_observer_bug: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Cmd) -> flyevo::Result<()> {
    match cmd {
        Cmd::Run {
            config,
            method,
            block_set,
            runs,
            evals,
            seed,
            threads,
            log_interval,
            no_observer_bug,
            out,
        } => {
            let mut cfg = match config {
                Some(p) => ExperimentConfig::load(&p)?,
                None => ExperimentConfig::default(),
            };
            cfg.method = method.unwrap_or(cfg.method);
            cfg.block_set = block_set.unwrap_or(cfg.block_set);
            cfg.runs = runs.unwrap_or(cfg.runs);
            cfg.evals = evals.or(cfg.evals);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.threads = threads.unwrap_or(cfg.threads);
            cfg.budget.log_interval = log_interval.unwrap_or(cfg.budget.log_interval);
            cfg.tick.emulate_observer_bug &= !no_observer_bug;
            cfg.out = out.unwrap_or(cfg.out);
            let summary = harness::run_campaign_with(&cfg, |i, r| {
                let first = r.first_success().map_or("never".into(), |e| e.to_string());
                eprintln!(
                    "run {i:>3} seed {:>4}: {} evaluations, {} flights, first {first}",
                    r.seed, r.evaluations, r.total_flights
                );
            })?;
            print!("{}", summary.summary_csv());
        }
        Cmd::Report { input } => print!("{}", harness::report(&input)?),
        Cmd::Export { input, bin, out } => {
            let selector = bin.map_or(Selector::Best, Selector::Slot);
            let e = harness::export_shape(&input, selector, &out)?;
            println!("slot {} fitness {} -> {}", e.slot, e.result.fitness, out.display());
        }
        Cmd::Replay {
            genome,
            block_set,
            no_observer_bug,
        } => {
            let r = harness::replay_genome(&genome, block_set, no_observer_bug.then_some(false))?;
            println!("{}\n{}", EvaluationResult::CSV_HEADER, r.csv_row());
            for (s, p) in r.com_trajectory.iter().enumerate() {
                match p {
                    Some([x, y, z]) => println!("# second {s}: com {x:.3} {y:.3} {z:.3}"),
                    None => println!("# second {s}: watch region empty"),
                }
            }
        }
    }
    Ok(())
}
