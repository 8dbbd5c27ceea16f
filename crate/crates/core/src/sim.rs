//! Tick-based redstone, piston and observer rules.
//!
//! A call to [`step`] advances the clock from `t` to `t + 1`:
//!
//! 1. the powered cells at time `t` are computed;
//! 2. every piston without a pending event schedules an extension (powered,
//!    retracted) or a retraction (unpowered, extended) due at `t + delay`;
//! 3. events due by `t + 1` fire in `(due, seq)` order, each one seeing the
//!    writes of the events before it;
//! 4. extensions push their block set one cell and place the head, retractions
//!    remove the head and, for sticky pistons, pull the block in front of it;
//! 5. every cell whose occupant changed is collected into the `moved` set;
//! 6. observers whose sensed cell is in `moved` schedule a pulse due at
//!    `t + 1 + observer_pulse_delay`.
//!
//! Power is 6-adjacency to a redstone block, plus the single cell behind an
//! observer while its pulse is active. There is no quasi-connectivity and
//! observers see cell-content changes only. Pending events travel with the
//! block they belong to when that block is moved.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::voxel::{
    Block, BlockKind, BlockPlacement, EventKind, Orientation, PendingEvent, Pos, WorldState,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TickConfig {
    pub ticks_per_second: u64,
    pub piston_extend_delay: u64,
    pub piston_retract_delay: u64,
    pub observer_pulse_delay: u64,
    pub observer_pulse_length: u64,
    pub push_limit: usize,
    /// Rewrite up/down observers to north when they are spawned.
    pub emulate_observer_bug: bool,
}

impl Default for TickConfig {
    fn default() -> Self {
        TickConfig {
            ticks_per_second: 20,
            piston_extend_delay: 2,
            piston_retract_delay: 2,
            observer_pulse_delay: 2,
            observer_pulse_length: 2,
            push_limit: 12,
            emulate_observer_bug: true,
        }
    }
}

impl TickConfig {
    pub fn validate(&self) -> Result<()> {
        let delays = [
            self.ticks_per_second,
            self.piston_extend_delay,
            self.piston_retract_delay,
            self.observer_pulse_delay,
            self.observer_pulse_length,
        ];
        if delays.contains(&0) || self.push_limit == 0 {
            return Err(Error::Config(
                "tick rates, delays and push_limit must all be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Something that advances a world by one tick.
pub trait Dynamics {
    fn ticks_per_second(&self) -> u64;
    fn advance(&self, world: &mut WorldState);
}

impl Dynamics for TickConfig {
    fn ticks_per_second(&self) -> u64 {
        self.ticks_per_second
    }

    fn advance(&self, world: &mut WorldState) {
        step(world, self);
    }
}

/// Applies the observer orientation rewrite when `cfg` asks for it.
pub fn apply_observer_bug(shape: &[BlockPlacement], cfg: &TickConfig) -> Vec<BlockPlacement> {
    shape
        .iter()
        .map(|b| {
            let vertical = matches!(b.orient, Orientation::Up | Orientation::Down);
            if cfg.emulate_observer_bug && b.kind == BlockKind::Observer && vertical {
                BlockPlacement {
                    orient: Orientation::North,
                    ..*b
                }
            } else {
                *b
            }
        })
        .collect()
}

/// Places `shape` at `origin` the way an evaluation spawns it.
pub fn spawn_shape(
    world: &mut WorldState,
    shape: &[BlockPlacement],
    origin: Pos,
    cfg: &TickConfig,
) -> Result<()> {
    world.place_shape(&apply_observer_bug(shape, cfg), origin)
}

fn observer_output(p: Pos, b: &Block, now: u64) -> Option<Pos> {
    (b.kind == BlockKind::Observer && b.pulse_until.is_some_and(|until| now < until))
        .then(|| p - b.orient.unit())
}

/// Cells powered at the world's current tick.
pub fn power_state(world: &WorldState) -> BTreeSet<Pos> {
    let now = world.tick;
    let mut powered = BTreeSet::new();
    for (p, b) in world.blocks() {
        if b.kind == BlockKind::RedstoneBlock {
            powered.extend(p.neighbors());
        } else if let Some(out) = observer_output(p, b, now) {
            powered.insert(out);
        }
    }
    powered
}

pub fn is_powered(world: &WorldState, p: Pos) -> bool {
    p.neighbors().any(|n| match world.get(n) {
        Some(b) if b.kind == BlockKind::RedstoneBlock => true,
        Some(b) => observer_output(n, b, world.tick) == Some(p),
        None => false,
    })
}

/// Blocks an extension of the piston at `piston_pos` facing `dir` would move,
/// or `None` when the piston is blocked.
pub fn compute_push_set(
    world: &WorldState,
    piston_pos: Pos,
    dir: Orientation,
    push_limit: usize,
) -> Option<BTreeSet<Pos>> {
    movable_closure(world, piston_pos + dir.unit(), dir.unit(), piston_pos, push_limit)
}

/// Closure of blocks that must move by `d` when the block at `start` moves:
/// the block in each member's path joins, and slime drags its occupied
/// neighbors except the acting piston. Extended pistons, heads, or the acting
/// piston standing in a path make the move impossible.
fn movable_closure(
    world: &WorldState,
    start: Pos,
    d: Pos,
    acting: Pos,
    limit: usize,
) -> Option<BTreeSet<Pos>> {
    let mut set = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(p) = stack.pop() {
        if set.contains(&p) {
            continue;
        }
        let Some(b) = world.get(p) else { continue };
        if p == acting || b.kind.is_head() || (b.kind.is_piston() && b.extended) {
            return None;
        }
        set.insert(p);
        if set.len() > limit {
            return None;
        }
        stack.push(p + d);
        if b.kind == BlockKind::SlimeBlock {
            stack.extend(p.neighbors().filter(|n| *n != acting && world.get(*n).is_some()));
        }
    }
    Some(set)
}

fn has_pending(world: &WorldState, firing: &[PendingEvent], p: Pos, kind: EventKind) -> bool {
    let same = |e: &PendingEvent| e.pos == p && matches_kind(e.kind, kind);
    world.pending.iter().any(same) || firing.iter().any(same)
}

/// Piston extension and retraction share one slot per piston.
fn matches_kind(a: EventKind, b: EventKind) -> bool {
    match (a, b) {
        (EventKind::ObserverPulse, EventKind::ObserverPulse) => true,
        (EventKind::ObserverPulse, _) | (_, EventKind::ObserverPulse) => false,
        _ => true,
    }
}

fn schedule(world: &mut WorldState, pos: Pos, kind: EventKind, due: u64) {
    let ev = PendingEvent {
        due,
        seq: world.next_seq,
        pos,
        kind,
    };
    world.next_seq += 1;
    let at = world
        .pending
        .partition_point(|e| (e.due, e.seq) < (ev.due, ev.seq));
    world.pending.insert(at, ev);
}

/// Translates `set` by `d`, carrying queued events along.
fn shift(
    world: &mut WorldState,
    firing: &mut [PendingEvent],
    set: &BTreeSet<Pos>,
    d: Pos,
    moved: &mut BTreeSet<Pos>,
) {
    let lifted: Vec<(Pos, Block)> = set
        .iter()
        .map(|p| (*p, world.blocks.remove(p).expect("closure members exist")))
        .collect();
    for (p, b) in lifted {
        world.blocks.insert(p + d, b);
        moved.insert(p);
        moved.insert(p + d);
    }
    for e in world.pending.iter_mut().chain(firing.iter_mut()) {
        if set.contains(&e.pos) {
            e.pos = e.pos + d;
        }
    }
}

fn head_kind(piston: BlockKind) -> BlockKind {
    if piston == BlockKind::StickyPiston {
        BlockKind::PistonHeadSticky
    } else {
        BlockKind::PistonHeadNormal
    }
}

fn fire(
    world: &mut WorldState,
    ev: PendingEvent,
    rest: &mut [PendingEvent],
    cfg: &TickConfig,
    moved: &mut BTreeSet<Pos>,
) {
    let Some(block) = world.get(ev.pos).copied() else { return };
    match ev.kind {
        EventKind::ObserverPulse => {
            if block.kind == BlockKind::Observer {
                world.blocks.get_mut(&ev.pos).unwrap().pulse_until =
                    Some(ev.due + cfg.observer_pulse_length);
            }
        }
        EventKind::Extend => {
            if !block.kind.is_piston() || block.extended {
                return;
            }
            let d = block.orient.unit();
            let Some(set) = compute_push_set(world, ev.pos, block.orient, cfg.push_limit) else {
                return;
            };
            shift(world, rest, &set, d, moved);
            let head = ev.pos + d;
            world
                .blocks
                .insert(head, Block::new(head_kind(block.kind), block.orient));
            world.blocks.get_mut(&ev.pos).unwrap().extended = true;
            moved.insert(head);
        }
        EventKind::Retract => {
            if !block.kind.is_piston() || !block.extended {
                return;
            }
            let d = block.orient.unit();
            let head = ev.pos + d;
            debug_assert!(world.get(head).is_some_and(|h| h.kind.is_head()));
            world.blocks.remove(&head);
            world.blocks.get_mut(&ev.pos).unwrap().extended = false;
            moved.insert(head);
            if block.kind == BlockKind::StickyPiston {
                let front = head + d;
                if let Some(set) = movable_closure(world, front, -d, ev.pos, cfg.push_limit) {
                    shift(world, rest, &set, -d, moved);
                }
            }
        }
    }
}

/// Advances `world` by one tick and returns the cells whose occupant changed.
pub fn step(world: &mut WorldState, cfg: &TickConfig) -> BTreeSet<Pos> {
    let now = world.tick;
    let powered = power_state(world);

    let pistons: Vec<(Pos, Block)> = world
        .blocks()
        .filter(|(_, b)| b.kind.is_piston())
        .map(|(p, b)| (p, *b))
        .collect();
    for (p, b) in pistons {
        if has_pending(world, &[], p, EventKind::Extend) {
            continue;
        }
        let on = powered.contains(&p);
        if on && !b.extended {
            schedule(world, p, EventKind::Extend, now + cfg.piston_extend_delay);
        } else if !on && b.extended {
            schedule(world, p, EventKind::Retract, now + cfg.piston_retract_delay);
        }
    }

    let end = now + 1;
    let due = world.pending.partition_point(|e| e.due <= end);
    let mut firing: Vec<PendingEvent> = world.pending.drain(..due).collect();
    let mut moved = BTreeSet::new();
    for i in 0..firing.len() {
        let (head, rest) = firing.split_at_mut(i + 1);
        fire(world, head[i], rest, cfg, &mut moved);
    }
    firing.clear();
    world.tick = end;

    let observers: Vec<Pos> = world
        .blocks()
        .filter(|(p, b)| b.kind == BlockKind::Observer && moved.contains(&(*p + b.orient.unit())))
        .map(|(p, _)| p)
        .collect();
    for p in observers {
        if !has_pending(world, &[], p, EventKind::ObserverPulse) {
            schedule(world, p, EventKind::ObserverPulse, end + cfg.observer_pulse_delay);
        }
    }
    moved
}

/// Steps `world` up to `max_ticks` times. `on_second` sees the world at tick 0
/// and after every whole simulated second, and may stop the run early.
/// Returns the number of ticks simulated.
pub fn run_until<D, F>(world: &mut WorldState, dynamics: &D, max_ticks: u64, mut on_second: F) -> u64
where
    D: Dynamics + ?Sized,
    F: FnMut(&WorldState, u64) -> ControlFlow<()>,
{
    let tps = dynamics.ticks_per_second();
    if on_second(world, 0).is_break() {
        return 0;
    }
    for t in 1..=max_ticks {
        dynamics.advance(world);
        if t % tps == 0 && on_second(world, t / tps).is_break() {
            return t;
        }
    }
    max_ticks
}
