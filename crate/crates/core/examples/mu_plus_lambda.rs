//! The pure-fitness (mu+lambda) baseline.
//!
//! cargo run --release --example mu_plus_lambda -- [generations] [seed]

use flyevo::search::{mu_plus_lambda_run, EvalSetup, SearchBudget};

fn main() -> flyevo::Result<()> {
    let mut args = std::env::args().skip(1);
    let generations: usize = args.next().map_or(500, |a| a.parse().expect("generations"));
    let seed: u64 = args.next().map_or(0, |a| a.parse().expect("seed"));

    let budget = SearchBudget {
        generations,
        ..SearchBudget::default()
    };
    let (pop, log) = mu_plus_lambda_run(&budget, &EvalSetup::default(), seed, 8)?;
    for (g, best) in pop.best_history.iter().enumerate().step_by(50) {
        println!("generation {g:>5}  best {best:.3}");
    }
    println!("{} evaluations, first flight at {:?}", pop.evaluations, log.first_success());
    for m in pop.members.iter().take(5) {
        println!(
            "  fitness {:>7.3}  flew {:<5}  born {:>4}  eval {}",
            m.result.fitness, m.result.flew, m.born, m.evaluation
        );
    }
    Ok(())
}
