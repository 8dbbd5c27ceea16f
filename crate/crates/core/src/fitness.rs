//! Flight-aware fitness: accumulated center-of-mass travel, or a fixed
//! reward minus a leftover penalty once enough blocks leave the watch region.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{decode, DecodeConfig, Genome};
use crate::sim::{apply_observer_bug, run_until, Dynamics, TickConfig};
use crate::voxel::{BlockPlacement, Orientation, Pos, Region, WorldState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitnessConfig {
    pub f_max: f64,
    pub leftover_penalty: f64,
    /// Flight needs strictly more than this many blocks out of the watch region.
    pub fly_away_block_threshold: usize,
    pub eval_seconds: u64,
    pub spawn_size: i32,
    pub watch_size: i32,
    pub clear_size: i32,
}

impl Default for FitnessConfig {
    fn default() -> Self {
        FitnessConfig {
            f_max: 55.0,
            leftover_penalty: 0.1,
            fly_away_block_threshold: 6,
            eval_seconds: 10,
            spawn_size: 3,
            watch_size: 9,
            clear_size: 43,
        }
    }
}

impl FitnessConfig {
    /// Shapes spawn with their local origin here.
    pub const SPAWN_ORIGIN: Pos = Pos::new(0, 0, 0);

    pub fn spawn_center(&self) -> Pos {
        let h = self.spawn_size / 2;
        Self::SPAWN_ORIGIN + Pos::new(h, h, h)
    }

    pub fn spawn_region(&self) -> Region {
        Region::centered(self.spawn_center(), self.spawn_size)
    }

    pub fn watch_region(&self) -> Region {
        Region::centered(self.spawn_center(), self.watch_size)
    }

    pub fn clear_region(&self) -> Region {
        Region::centered(self.spawn_center(), self.clear_size)
    }

    /// Lowest fitness any flying shape can receive.
    pub fn min_flight_fitness(&self) -> f64 {
        let volume = self.spawn_region().volume();
        self.f_max - self.leftover_penalty * volume as f64
    }

    pub fn validate(&self) -> Result<()> {
        let odd = |s: i32| s > 0 && s % 2 == 1;
        if !(odd(self.spawn_size) && odd(self.watch_size) && odd(self.clear_size)) {
            return Err(Error::Config("region sizes must be odd and positive".into()));
        }
        if !(self.spawn_size < self.watch_size && self.watch_size < self.clear_size) {
            return Err(Error::Config("regions must nest: spawn < watch < clear".into()));
        }
        if self.eval_seconds == 0 || self.leftover_penalty < 0.0 || self.min_flight_fitness() <= 0.0
        {
            return Err(Error::Config(
                "eval_seconds must be positive and flight fitness must stay positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationResult {
    pub fitness: f64,
    pub flew: bool,
    pub direction: Option<Orientation>,
    /// Watch-region center of mass at each polled second; `None` when the
    /// region was empty at that poll.
    pub com_trajectory: Vec<Option<[f64; 3]>>,
    pub leftover_count: usize,
    pub ticks_used: u64,
}

impl EvaluationResult {
    pub const CSV_HEADER: &'static str = "fitness,flew,direction,leftover_count,ticks_used";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.fitness,
            self.flew,
            self.direction.map_or("NONE", |d| d.name()),
            self.leftover_count,
            self.ticks_used
        )
    }

    /// Parses the leading five fields written by [`EvaluationResult::csv_row`].
    /// The trajectory is not part of the row and comes back empty.
    pub fn from_csv_fields(fields: &[&str]) -> Result<Self> {
        let bad = |what: &str| Error::parse(0, format!("bad {what} field"));
        if fields.len() < 5 {
            return Err(bad("evaluation row"));
        }
        Ok(EvaluationResult {
            fitness: fields[0].parse().map_err(|_| bad("fitness"))?,
            flew: fields[1].parse().map_err(|_| bad("flew"))?,
            direction: match fields[2] {
                "NONE" => None,
                d => Some(d.parse().map_err(|_| bad("direction"))?),
            },
            com_trajectory: Vec::new(),
            leftover_count: fields[3].parse().map_err(|_| bad("leftover_count"))?,
            ticks_used: fields[4].parse().map_err(|_| bad("ticks_used"))?,
        })
    }
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Sum of distances between consecutive polls; polls with an empty region
/// contribute nothing.
pub fn oscillation_fitness(trajectory: &[Option<[f64; 3]>]) -> f64 {
    trajectory
        .windows(2)
        .filter_map(|w| Some(distance(w[0]?, w[1]?)))
        .sum()
}

/// Flight direction from the positions where blocks left the watch region.
///
/// Each exit contributes its displacement from `center`; the positive and
/// negative parts along every axis are totalled separately, and the largest of
/// the six totals wins, ties going to the earlier of North, South, East, West,
/// Up, Down.
pub fn classify_direction(center: [f64; 3], exits: &[(Pos, u64)]) -> Result<Orientation> {
    if exits.is_empty() {
        return Err(Error::EmptyExitLog);
    }
    let mut totals = [0.0f64; 6];
    for (p, _) in exits {
        let d = [p.x as f64 - center[0], p.y as f64 - center[1], p.z as f64 - center[2]];
        for (o, total) in Orientation::ALL.iter().zip(totals.iter_mut()) {
            let u = o.unit().to_f64();
            let along = d[0] * u[0] + d[1] * u[1] + d[2] * u[2];
            *total += along.max(0.0);
        }
    }
    let mut best = 0;
    for i in 1..6 {
        if totals[i] > totals[best] {
            best = i;
        }
    }
    Ok(Orientation::ALL[best])
}

/// Runs `world` (already holding a freshly spawned shape of `placed` blocks)
/// under `dynamics` and scores it.
pub fn evaluate_world<D: Dynamics + ?Sized>(
    mut world: WorldState,
    dynamics: &D,
    cfg: &FitnessConfig,
) -> EvaluationResult {
    let spawn = cfg.spawn_region();
    assert!(
        world.blocks().all(|(p, _)| spawn.contains(p)),
        "evaluation needs a fresh world holding only the spawned shape"
    );
    let placed = world.len() as i64;
    let watch = cfg.watch_region();
    let max_ticks = cfg.eval_seconds * dynamics.ticks_per_second();

    let mut trajectory: Vec<Option<[f64; 3]>> = Vec::new();
    let mut flight: Option<(usize, Vec<(Pos, u64)>)> = None;
    let ticks_used = run_until(&mut world, dynamics, max_ticks, |w, _| {
        let inside = w
            .blocks()
            .filter(|(p, b)| !b.kind.is_head() && watch.contains(*p))
            .count();
        let com = w.center_of_mass(&watch);
        let repeat = trajectory.last() == Some(&com);
        trajectory.push(com);
        if placed - inside as i64 > cfg.fly_away_block_threshold as i64 {
            let exits = w
                .blocks()
                .filter(|(p, b)| !b.kind.is_head() && !watch.contains(*p))
                .map(|(p, _)| (p, w.tick()))
                .collect();
            flight = Some((inside, exits));
            return ControlFlow::Break(());
        }
        if repeat {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });

    match flight {
        Some((leftover, exits)) => EvaluationResult {
            fitness: cfg.f_max - cfg.leftover_penalty * leftover as f64,
            flew: true,
            direction: Some(
                classify_direction(watch.center(), &exits).expect("flight implies exits"),
            ),
            com_trajectory: trajectory,
            leftover_count: leftover,
            ticks_used,
        },
        None => EvaluationResult {
            fitness: oscillation_fitness(&trajectory),
            flew: false,
            direction: None,
            com_trajectory: trajectory,
            leftover_count: 0,
            ticks_used,
        },
    }
}

/// Spawns `shape` in a fresh world and scores it.
pub fn evaluate_shape(
    shape: &[BlockPlacement],
    tick_cfg: &TickConfig,
    cfg: &FitnessConfig,
) -> EvaluationResult {
    let mut world = WorldState::new();
    world
        .place_shape(&apply_observer_bug(shape, tick_cfg), FitnessConfig::SPAWN_ORIGIN)
        .expect("a decoded shape always fits the spawn box");
    evaluate_world(world, tick_cfg, cfg)
}

pub fn evaluate(
    g: &Genome,
    decode_cfg: &DecodeConfig,
    tick_cfg: &TickConfig,
    cfg: &FitnessConfig,
) -> Result<EvaluationResult> {
    Ok(evaluate_shape(&decode(g, decode_cfg)?, tick_cfg, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voxel::{Block, BlockKind};

    /// Moves every block one cell along x each second, alternating sign.
    struct Shuttle;

    impl Dynamics for Shuttle {
        fn ticks_per_second(&self) -> u64 {
            20
        }

        fn advance(&self, world: &mut WorldState) {
            let t = world.tick + 1;
            world.tick = t;
            if t % 20 == 0 {
                let dx = if (t / 20) % 2 == 1 { 1 } else { -1 };
                *world = WorldState {
                    tick: t,
                    ..world.translated(Pos::new(dx, 0, 0))
                };
            }
        }
    }

    #[test]
    fn empty_shape_scores_zero() {
        let r = evaluate_shape(&[], &TickConfig::default(), &FitnessConfig::default());
        assert_eq!(r.fitness, 0.0);
        assert!(!r.flew);
        assert_eq!(r.com_trajectory.len(), 2);
        assert_eq!(r.ticks_used, 20);
    }

    #[test]
    fn scripted_unit_steps_sum_to_ten() {
        let mut w = WorldState::new();
        w.set(Pos::new(1, 1, 1), Block::new(BlockKind::QuartzBlock, Orientation::North));
        let r = evaluate_world(w, &Shuttle, &FitnessConfig::default());
        assert!((r.fitness - 10.0).abs() < 1e-9);
        assert_eq!(r.com_trajectory.len(), 11);
        assert!(!r.flew);
    }

    #[test]
    fn quartz_never_moves() {
        let shape: Vec<_> = (0..27)
            .map(|i| {
                BlockPlacement::new(
                    Pos::new(i / 9, (i / 3) % 3, i % 3),
                    BlockKind::QuartzBlock,
                    Orientation::North,
                )
            })
            .collect();
        let r = evaluate_shape(&shape, &TickConfig::default(), &FitnessConfig::default());
        assert_eq!(r.fitness, 0.0);
        assert!(!r.flew);
    }

    #[test]
    fn direction_examples() {
        let c = [1.0, 1.0, 1.0];
        let east: Vec<_> = (0..7).map(|i| (Pos::new(6, i % 3, 0), 40)).collect();
        assert_eq!(classify_direction(c, &east).unwrap(), Orientation::East);

        let mut mixed: Vec<_> = (0..5).map(|_| (Pos::new(6, 1, 1), 40)).collect();
        mixed.push((Pos::new(1, 6, 1), 40));
        assert_eq!(classify_direction(c, &mixed).unwrap(), Orientation::East);

        let tied = [(Pos::new(6, 1, 1), 40), (Pos::new(-4, 1, 1), 40)];
        assert_eq!(classify_direction(c, &tied).unwrap(), Orientation::East);

        assert!(matches!(classify_direction(c, &[]), Err(Error::EmptyExitLog)));
    }

    #[test]
    fn csv_row_round_trip() {
        let r = EvaluationResult {
            fitness: 54.8,
            flew: true,
            direction: Some(Orientation::West),
            com_trajectory: vec![],
            leftover_count: 2,
            ticks_used: 80,
        };
        assert_eq!(r.csv_row(), "54.8,true,WEST,2,80");
        let row = r.csv_row();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(EvaluationResult::from_csv_fields(&fields).unwrap(), r);
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = FitnessConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.watch_region().min, Pos::new(-3, -3, -3));
        assert_eq!(cfg.watch_region().max, Pos::new(6, 6, 6));
        assert_eq!(cfg.clear_region().volume(), 43 * 43 * 43);
        assert!((cfg.min_flight_fitness() - 52.3).abs() < 1e-12);
    }
}
