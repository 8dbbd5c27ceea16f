//! Decodes genomes into shapes and scores them with the flight-aware fitness.
//!
//! cargo run --example evaluate_genome

use flyevo::fitness::{evaluate, evaluate_shape, EvaluationResult, FitnessConfig};
use flyevo::genome::{decode, encode, random_genome, DecodeConfig};
use flyevo::sim::TickConfig;
use flyevo::voxel::{parse_shape, write_shape, BlockSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> flyevo::Result<()> {
    let dc = DecodeConfig::with_block_set(BlockSet::Observer);
    let tick = TickConfig::default();
    let fit = FitnessConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    println!("{}", EvaluationResult::CSV_HEADER);
    for _ in 0..5 {
        let g = random_genome(&mut rng, dc.genome_len())?;
        println!("{}", evaluate(&g, &dc, &tick, &fit)?.csv_row());
    }

    // Any shape in the 3x3x3 box has a genome; this one flies east.
    let flier = parse_shape(include_str!("../tests/fixtures/flier.shape"))?;
    let g = encode(&flier, &dc)?;
    assert_eq!(decode(&g, &dc)?, flier);
    let r = evaluate_shape(&flier, &tick, &fit);
    println!("\nreference flier:\n{}", write_shape(&flier));
    println!("{}", r.csv_row());
    for (s, com) in r.com_trajectory.iter().enumerate() {
        println!("  second {s}: center of mass {com:?}");
    }
    Ok(())
}
