use std::fmt::Write as _;

use super::Method;
use crate::search::RunLog;
use crate::voxel::{BlockSet, Orientation};

/// What one run achieved, recovered from its log.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub run: usize,
    pub seed: u64,
    pub evaluations: u64,
    pub total_flights: u64,
    pub first_flight: [Option<u64>; 6],
}

impl RunOutcome {
    pub fn from_log(run: usize, seed: u64, log: &RunLog) -> Self {
        let last = log.last();
        RunOutcome {
            run,
            seed,
            evaluations: last.map_or(0, |r| r.evals),
            total_flights: last.map_or(0, |r| r.flights.total_flights),
            first_flight: last.map_or([None; 6], |r| r.flights.first_flight),
        }
    }

    pub fn succeeded(&self) -> bool {
        self.total_flights > 0
    }

    pub fn first_success(&self) -> Option<u64> {
        self.first_flight.iter().flatten().min().copied()
    }

    pub fn directions(&self) -> usize {
        self.first_flight.iter().flatten().count()
    }
}

pub fn round_up(value: u64, step: u64) -> u64 {
    value.div_ceil(step) * step
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignSummary {
    pub method: Method,
    pub block_set: BlockSet,
    pub log_interval: u64,
    pub runs: Vec<RunOutcome>,
}

impl CampaignSummary {
    pub fn successes(&self) -> usize {
        self.runs.iter().filter(|r| r.succeeded()).count()
    }

    pub fn success_pct(&self) -> f64 {
        100.0 * self.successes() as f64 / self.runs.len().max(1) as f64
    }

    /// Runs that flew at least once in each direction, N,S,E,W,U,D.
    pub fn direction_runs(&self) -> [usize; 6] {
        let mut out = [0; 6];
        for r in &self.runs {
            for (o, f) in out.iter_mut().zip(r.first_flight) {
                *o += f.is_some() as usize;
            }
        }
        out
    }

    /// Directions flown by at least one run.
    pub fn total_directions(&self) -> usize {
        self.direction_runs().iter().filter(|n| **n > 0).count()
    }

    pub fn avg_directions(&self) -> f64 {
        let total: usize = self.runs.iter().map(|r| r.directions()).sum();
        total as f64 / self.runs.len().max(1) as f64
    }

    pub fn max_directions(&self) -> usize {
        self.runs.iter().map(|r| r.directions()).max().unwrap_or(0)
    }

    /// First successes rounded up to the logging interval.
    pub fn first_successes(&self) -> Vec<Option<u64>> {
        self.runs
            .iter()
            .map(|r| r.first_success().map(|e| round_up(e, self.log_interval)))
            .collect()
    }

    /// Median rounded first success over successful runs.
    pub fn median_first_success(&self) -> Option<f64> {
        let mut v: Vec<u64> = self.first_successes().into_iter().flatten().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_unstable();
        let m = v.len() / 2;
        Some(if v.len() % 2 == 1 {
            v[m] as f64
        } else {
            (v[m - 1] + v[m]) as f64 / 2.0
        })
    }

    pub fn summary_csv(&self) -> String {
        let mut s = String::from(
            "method,block_set,runs,successes,success_pct,total_directions,avg_directions,\
max_directions,median_first_success,north,south,east,west,up,down\n",
        );
        write!(
            s,
            "{},{},{},{},{:.2},{},{:.2},{},{}",
            self.method.label(),
            self.block_set.name(),
            self.runs.len(),
            self.successes(),
            self.success_pct(),
            self.total_directions(),
            self.avg_directions(),
            self.max_directions(),
            self.median_first_success().map_or("never".to_string(), |m| m.to_string()),
        )
        .unwrap();
        for n in self.direction_runs() {
            write!(s, ",{n}").unwrap();
        }
        s.push('\n');
        s
    }

    pub fn directions_csv(&self) -> String {
        let mut s = String::from("run,seed,north,south,east,west,up,down,distinct\n");
        for r in &self.runs {
            write!(s, "{},{}", r.run, r.seed).unwrap();
            for f in r.first_flight {
                write!(s, ",{}", f.is_some() as u8).unwrap();
            }
            writeln!(s, ",{}", r.directions()).unwrap();
        }
        s
    }

    pub fn first_success_csv(&self) -> String {
        let mut s = String::from("run,seed,first_success,first_success_exact\n");
        for (r, rounded) in self.runs.iter().zip(self.first_successes()) {
            match (rounded, r.first_success()) {
                (Some(a), Some(b)) => writeln!(s, "{},{},{a},{b}", r.run, r.seed).unwrap(),
                _ => writeln!(s, "{},{},never,never", r.run, r.seed).unwrap(),
            }
        }
        s
    }

    pub fn directions_flown(&self) -> Vec<Orientation> {
        let runs = self.direction_runs();
        Orientation::ALL.into_iter().filter(|o| runs[o.index()] > 0).collect()
    }
}
