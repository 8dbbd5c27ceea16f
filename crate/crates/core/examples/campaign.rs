//! Small campaigns for every method, then the aggregated report with pairwise
//! Fisher tests, all written under a temporary directory.
//!
//! cargo run --release --example campaign -- [runs] [evaluations]

use flyevo::harness::{report, run_campaign, ExperimentConfig, Method};
use flyevo::voxel::BlockSet;

fn main() -> flyevo::Result<()> {
    let mut args = std::env::args().skip(1);
    let runs: usize = args.next().map_or(3, |a| a.parse().expect("runs"));
    let evals: u64 = args.next().map_or(5_000, |a| a.parse().expect("evaluations"));
    let dir = tempfile::tempdir().expect("temporary directory");

    for method in Method::ALL {
        let cfg = ExperimentConfig {
            method,
            block_set: BlockSet::Observer,
            runs,
            evals: Some(evals),
            threads: 8,
            out: dir.path().join(method.flag()),
            ..ExperimentConfig::default()
        };
        let s = run_campaign(&cfg)?;
        eprintln!("{method}: {}/{} runs produced flying machines", s.successes(), runs);
    }
    println!("{}", report(dir.path())?);
    Ok(())
}
