use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fitness::EvaluationResult;
use crate::voxel::Orientation;

/// Running tally of every evaluation's flight outcome.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FlightTracker {
    pub total_flights: u64,
    /// Evaluation number of the first flight in each direction, N,S,E,W,U,D.
    pub first_flight: [Option<u64>; 6],
}

impl FlightTracker {
    pub fn observe(&mut self, evaluation: u64, r: &EvaluationResult) {
        if let (true, Some(d)) = (r.flew, r.direction) {
            self.total_flights += 1;
            self.first_flight[d.index()].get_or_insert(evaluation);
        }
    }

    pub fn directions(&self) -> usize {
        self.first_flight.iter().flatten().count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogRow {
    pub evals: u64,
    /// Occupied bins (MAP-Elites) or population size (baseline).
    pub occupied: usize,
    pub best_fitness: f64,
    /// Current elites or population members that fly.
    pub flying_elites: usize,
    pub flights: FlightTracker,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunLog {
    pub rows: Vec<LogRow>,
}

const HEADER: &str = "evals,occupied,best_fitness,flying_elites,total_flights,\
first_north,first_south,first_east,first_west,first_up,first_down";

impl RunLog {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(HEADER);
        s.push('\n');
        for r in &self.rows {
            write!(
                s,
                "{},{},{},{},{}",
                r.evals, r.occupied, r.best_fitness, r.flying_elites, r.flights.total_flights
            )
            .unwrap();
            for f in r.flights.first_flight {
                match f {
                    Some(e) => write!(s, ",{e}").unwrap(),
                    None => s.push(','),
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == HEADER => {}
            _ => return Err(Error::parse(1, "missing run log header")),
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let n = i + 1;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 11 {
                return Err(Error::parse(n, "expected 11 fields"));
            }
            let num = |s: &str| s.parse::<u64>().map_err(|_| Error::parse(n, format!("bad number `{s}`")));
            let mut first_flight = [None; 6];
            for (slot, s) in first_flight.iter_mut().zip(&f[5..]) {
                if !s.is_empty() {
                    *slot = Some(num(s)?);
                }
            }
            rows.push(LogRow {
                evals: num(f[0])?,
                occupied: num(f[1])? as usize,
                best_fitness: f[2].parse().map_err(|_| Error::parse(n, "bad best_fitness"))?,
                flying_elites: num(f[3])? as usize,
                flights: FlightTracker {
                    total_flights: num(f[4])?,
                    first_flight,
                },
            });
        }
        Ok(RunLog { rows })
    }

    pub fn last(&self) -> Option<&LogRow> {
        self.rows.last()
    }

    /// Directions flown at least once during the run.
    pub fn directions(&self) -> Vec<Orientation> {
        self.last()
            .map(|r| {
                Orientation::ALL
                    .into_iter()
                    .filter(|o| r.flights.first_flight[o.index()].is_some())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Evaluation number of the run's first flight, if any.
    pub fn first_success(&self) -> Option<u64> {
        self.last()?.flights.first_flight.iter().flatten().min().copied()
    }
}
