//! One MAP-Elites run over the piston-orientation archive.
//!
//! cargo run --release --example map_elites -- [evaluations] [seed]

use flyevo::behavior::{ArchiveLayout, Characterization};
use flyevo::genome::{decode, DecodeConfig};
use flyevo::search::{map_elites_run, EvalSetup, SearchBudget};
use flyevo::voxel::{write_shape, BlockSet};

fn main() -> flyevo::Result<()> {
    let mut args = std::env::args().skip(1);
    let evals: usize = args.next().map_or(20_000, |a| a.parse().expect("evaluations"));
    let seed: u64 = args.next().map_or(0, |a| a.parse().expect("seed"));

    let setup = EvalSetup {
        decode: DecodeConfig::with_block_set(BlockSet::Observer),
        ..EvalSetup::default()
    };
    let budget = SearchBudget {
        total_offspring: evals.saturating_sub(100),
        ..SearchBudget::default()
    };
    let layout = ArchiveLayout::new(Characterization::PistonOrientation);
    let (archive, log) = map_elites_run(&budget, &layout, &setup, seed, 8)?;

    for row in log.rows.iter().step_by(20) {
        println!(
            "evals {:>6}  bins {:>3}/{}  best {:>7.3}  flying elites {:>3}",
            row.evals,
            row.occupied,
            layout.total_bins(),
            row.best_fitness,
            row.flying_elites
        );
    }
    let (bin, best) = archive.best().expect("archive is never empty");
    println!(
        "\nbest: bin {bin} (descriptor {}), fitness {}, direction {:?}",
        best.descriptor, best.result.fitness, best.result.direction
    );
    print!("{}", write_shape(&decode(&best.genome, &setup.decode)?));
    Ok(())
}
