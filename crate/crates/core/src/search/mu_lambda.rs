use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{par_map, worker_pool, EvalSetup, FlightTracker, LogRow, RunLog, SearchBudget};
use crate::error::Result;
use crate::fitness::EvaluationResult;
use crate::genome::{crossover, polynomial_mutate, random_genome, Genome};

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub genome: Genome,
    pub result: EvaluationResult,
    /// Generation the member was created in; the initial population is 0.
    pub born: usize,
    /// Evaluation number (1-based); also the insertion order.
    pub evaluation: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    /// Sorted best first.
    pub members: Vec<Member>,
    pub evaluations: u64,
    /// Best fitness after initialization and after every generation.
    pub best_history: Vec<f64>,
}

impl Population {
    pub fn best(&self) -> Option<&Member> {
        self.members.first()
    }
}

/// Fitter first, then older, then earlier evaluated.
fn rank(a: &Member, b: &Member) -> Ordering {
    b.result
        .fitness
        .total_cmp(&a.result.fitness)
        .then(a.born.cmp(&b.born))
        .then(a.evaluation.cmp(&b.evaluation))
}

fn tournament<'a>(pop: &'a [Member], rng: &mut ChaCha8Rng) -> &'a Genome {
    let a = &pop[rng.gen_range(0..pop.len())];
    let b = &pop[rng.gen_range(0..pop.len())];
    let winner = match a.result.fitness.total_cmp(&b.result.fitness) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if rng.gen_bool(0.5) {
                a
            } else {
                b
            }
        }
    };
    &winner.genome
}

fn log_row(pop: &[Member], evals: u64, flights: &FlightTracker) -> LogRow {
    LogRow {
        evals,
        occupied: pop.len(),
        best_fitness: pop.first().map_or(0.0, |m| m.result.fitness),
        flying_elites: pop.iter().filter(|m| m.result.flew).count(),
        flights: flights.clone(),
    }
}

struct Run<'a> {
    setup: &'a EvalSetup,
    pool: rayon::ThreadPool,
    flights: FlightTracker,
    log: RunLog,
    evals: u64,
    interval: u64,
}

impl Run<'_> {
    fn absorb(&mut self, batch: Vec<Genome>, born: usize) -> Result<Vec<Member>> {
        let setup = self.setup;
        let results = par_map(&self.pool, &batch, |g| setup.evaluate(g))?;
        Ok(batch
            .into_iter()
            .zip(results)
            .map(|(genome, result)| {
                self.evals += 1;
                self.flights.observe(self.evals, &result);
                Member {
                    genome,
                    result,
                    born,
                    evaluation: self.evals,
                }
            })
            .collect())
    }

    /// Logs once per crossed interval boundary; `force` also logs a final
    /// partial interval.
    fn maybe_log(&mut self, pop: &[Member], force: bool) {
        let last = self.log.last().map_or(0, |r| r.evals);
        if self.evals / self.interval > last / self.interval || (force && self.evals != last) {
            self.log.rows.push(log_row(pop, self.evals, &self.flights));
        }
    }
}

/// Elitist (μ+λ) search on raw fitness with binary-tournament parents.
pub fn mu_plus_lambda_run(
    budget: &SearchBudget,
    setup: &EvalSetup,
    seed: u64,
    workers: usize,
) -> Result<(Population, RunLog)> {
    budget.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = setup.decode.genome_len();
    let mut run = Run {
        setup,
        pool: worker_pool(workers),
        flights: FlightTracker::default(),
        log: RunLog::default(),
        evals: 0,
        interval: budget.log_interval,
    };

    let init = (0..budget.mu)
        .map(|_| random_genome(&mut rng, len))
        .collect::<Result<Vec<_>>>()?;
    let mut pop = run.absorb(init, 0)?;
    pop.sort_by(rank);
    let mut best_history = vec![pop[0].result.fitness];
    run.maybe_log(&pop, false);

    for generation in 1..=budget.generations {
        let children = (0..budget.lambda)
            .map(|_| {
                let first = tournament(&pop, &mut rng);
                let parent = if rng.gen::<f64>() < budget.crossover_prob {
                    let second = tournament(&pop, &mut rng);
                    crossover(first, second, &mut rng)?
                } else {
                    first.clone()
                };
                Ok(polynomial_mutate(&parent, &mut rng, budget.mutation_rate, budget.mutation_eta))
            })
            .collect::<Result<Vec<_>>>()?;
        let children = run.absorb(children, generation)?;
        pop.extend(children);
        pop.sort_by(rank);
        pop.truncate(budget.mu);
        best_history.push(pop[0].result.fitness);
        run.maybe_log(&pop, false);
    }
    run.maybe_log(&pop, true);

    let population = Population {
        members: pop,
        evaluations: run.evals,
        best_history,
    };
    Ok((population, run.log))
}
