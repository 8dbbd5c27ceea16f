use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{par_map, worker_pool, Archive, EvalSetup, FlightTracker, LogRow, RunLog, SearchBudget};
use crate::behavior::ArchiveLayout;
use crate::error::{Error, Result};
use crate::genome::{crossover, polynomial_mutate, random_genome, Genome};

fn log_row(archive: &Archive, flights: &FlightTracker) -> LogRow {
    LogRow {
        evals: archive.evaluations(),
        occupied: archive.occupied(),
        best_fitness: archive.best().map_or(0.0, |(_, e)| e.result.fitness),
        flying_elites: archive.elites().filter(|(_, e)| e.result.flew).count(),
        flights: flights.clone(),
    }
}

/// Runs MAP-Elites: `init_samples` random genomes, then `total_offspring`
/// children of uniformly sampled elites, with crossover applied with
/// probability `crossover_prob` before mutation.
pub fn map_elites_run(
    budget: &SearchBudget,
    layout: &ArchiveLayout,
    setup: &EvalSetup,
    seed: u64,
    workers: usize,
) -> Result<(Archive, RunLog)> {
    budget.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = worker_pool(workers);
    let len = setup.decode.genome_len();
    let mut archive = Archive::new(layout.clone());
    let mut flights = FlightTracker::default();
    let mut log = RunLog::default();

    let total = budget.init_samples + budget.total_offspring;
    let mut done = 0;
    while done < total {
        let n = budget.batch_size.min(total - done);
        let occupied = archive.occupied_bins();
        let batch = (done..done + n)
            .map(|i| {
                if i < budget.init_samples {
                    return random_genome(&mut rng, len);
                }
                if occupied.is_empty() {
                    return Err(Error::NoOccupiedBins);
                }
                let pick = |rng: &mut ChaCha8Rng| {
                    &archive.get(occupied[rng.gen_range(0..occupied.len())]).unwrap().genome
                };
                let parent = if rng.gen::<f64>() < budget.crossover_prob {
                    let a = pick(&mut rng);
                    let b = pick(&mut rng);
                    crossover(a, b, &mut rng)?
                } else {
                    pick(&mut rng).clone()
                };
                Ok(polynomial_mutate(&parent, &mut rng, budget.mutation_rate, budget.mutation_eta))
            })
            .collect::<Result<Vec<Genome>>>()?;

        let assessed = par_map(&pool, &batch, |g| setup.assess(g, layout))?;
        for (g, a) in batch.into_iter().zip(assessed) {
            flights.observe(archive.evaluations() + 1, &a.result);
            archive.insert(g, a.descriptor, a.result)?;
            if archive.evaluations() % budget.log_interval == 0 {
                log.rows.push(log_row(&archive, &flights));
            }
        }
        done += n;
    }
    if archive.evaluations() % budget.log_interval != 0 {
        log.rows.push(log_row(&archive, &flights));
    }
    Ok((archive, log))
}
