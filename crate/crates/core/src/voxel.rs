//! Blocks, orientations, shapes and the sparse world grid.
//!
//! Axis convention: North = -z, South = +z, East = +x, West = -x, Up = +y,
//! Down = -y. Every other module relies on this binding.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer block coordinate. Ordering is lexicographic on (x, y, z).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Pos { x, y, z }
    }

    pub fn neighbors(self) -> impl Iterator<Item = Pos> {
        Orientation::ALL.into_iter().map(move |o| self + o.unit())
    }

    pub fn to_f64(self) -> [f64; 3] {
        [self.x as f64, self.y as f64, self.z as f64]
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Pos {
    type Output = Pos;
    fn add(self, o: Pos) -> Pos {
        Pos::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Pos {
    type Output = Pos;
    fn sub(self, o: Pos) -> Pos {
        Pos::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Pos {
    type Output = Pos;
    fn neg(self) -> Pos {
        Pos::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    Air,
    RedstoneBlock,
    SlimeBlock,
    QuartzBlock,
    Piston,
    StickyPiston,
    Observer,
    PistonHeadNormal,
    PistonHeadSticky,
}

impl BlockKind {
    pub const fn name(self) -> &'static str {
        match self {
            BlockKind::Air => "AIR",
            BlockKind::RedstoneBlock => "REDSTONE_BLOCK",
            BlockKind::SlimeBlock => "SLIME_BLOCK",
            BlockKind::QuartzBlock => "QUARTZ_BLOCK",
            BlockKind::Piston => "PISTON",
            BlockKind::StickyPiston => "STICKY_PISTON",
            BlockKind::Observer => "OBSERVER",
            BlockKind::PistonHeadNormal => "PISTON_HEAD_NORMAL",
            BlockKind::PistonHeadSticky => "PISTON_HEAD_STICKY",
        }
    }

    pub fn is_piston(self) -> bool {
        matches!(self, BlockKind::Piston | BlockKind::StickyPiston)
    }

    pub fn is_head(self) -> bool {
        matches!(self, BlockKind::PistonHeadNormal | BlockKind::PistonHeadSticky)
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        const KINDS: [BlockKind; 9] = [
            BlockKind::Air,
            BlockKind::RedstoneBlock,
            BlockKind::SlimeBlock,
            BlockKind::QuartzBlock,
            BlockKind::Piston,
            BlockKind::StickyPiston,
            BlockKind::Observer,
            BlockKind::PistonHeadNormal,
            BlockKind::PistonHeadSticky,
        ];
        KINDS
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown block kind `{s}`"))
    }
}

/// Facing of a block. The declaration order is the decode order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    North,
    South,
    East,
    West,
    Up,
    Down,
}

impl Orientation {
    pub const ALL: [Orientation; 6] = [
        Orientation::North,
        Orientation::South,
        Orientation::East,
        Orientation::West,
        Orientation::Up,
        Orientation::Down,
    ];

    pub const fn unit(self) -> Pos {
        match self {
            Orientation::North => Pos::new(0, 0, -1),
            Orientation::South => Pos::new(0, 0, 1),
            Orientation::East => Pos::new(1, 0, 0),
            Orientation::West => Pos::new(-1, 0, 0),
            Orientation::Up => Pos::new(0, 1, 0),
            Orientation::Down => Pos::new(0, -1, 0),
        }
    }

    pub const fn opposite(self) -> Orientation {
        match self {
            Orientation::North => Orientation::South,
            Orientation::South => Orientation::North,
            Orientation::East => Orientation::West,
            Orientation::West => Orientation::East,
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }

    /// 0 for north/south, 1 for east/west, 2 for up/down.
    pub const fn axis_group(self) -> usize {
        match self {
            Orientation::North | Orientation::South => 0,
            Orientation::East | Orientation::West => 1,
            Orientation::Up | Orientation::Down => 2,
        }
    }

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn name(self) -> &'static str {
        match self {
            Orientation::North => "NORTH",
            Orientation::South => "SOUTH",
            Orientation::East => "EAST",
            Orientation::West => "WEST",
            Orientation::Up => "UP",
            Orientation::Down => "DOWN",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Orientation::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown orientation `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSet {
    #[default]
    Original,
    Observer,
}

impl BlockSet {
    const ORIGINAL: [BlockKind; 5] = [
        BlockKind::RedstoneBlock,
        BlockKind::SlimeBlock,
        BlockKind::QuartzBlock,
        BlockKind::Piston,
        BlockKind::StickyPiston,
    ];
    const OBSERVER: [BlockKind; 6] = [
        BlockKind::RedstoneBlock,
        BlockKind::SlimeBlock,
        BlockKind::QuartzBlock,
        BlockKind::Piston,
        BlockKind::StickyPiston,
        BlockKind::Observer,
    ];

    pub fn members(self) -> &'static [BlockKind] {
        match self {
            BlockSet::Original => &Self::ORIGINAL,
            BlockSet::Observer => &Self::OBSERVER,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockSet::Original => "original",
            BlockSet::Observer => "observer",
        }
    }
}

impl FromStr for BlockSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "original" => Ok(BlockSet::Original),
            "observer" => Ok(BlockSet::Observer),
            _ => Err(format!("unknown block set `{s}`")),
        }
    }
}

/// One block of a shape. Air is represented by absence, never by a placement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockPlacement {
    pub pos: Pos,
    pub kind: BlockKind,
    pub orient: Orientation,
}

impl BlockPlacement {
    pub fn new(pos: Pos, kind: BlockKind, orient: Orientation) -> Self {
        debug_assert!(kind != BlockKind::Air, "air is never placed");
        BlockPlacement { pos, kind, orient }
    }
}

/// Axis-aligned box of cells, `min` inclusive and `max` exclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Region {
    pub min: Pos,
    pub max: Pos,
}

impl Region {
    pub fn new(min: Pos, max: Pos) -> Self {
        Region { min, max }
    }

    /// Cube of odd `size` whose middle cell is `center`.
    pub fn centered(center: Pos, size: i32) -> Self {
        let h = size / 2;
        Region {
            min: Pos::new(center.x - h, center.y - h, center.z - h),
            max: Pos::new(center.x - h + size, center.y - h + size, center.z - h + size),
        }
    }

    pub fn contains(&self, p: Pos) -> bool {
        (self.min.x..self.max.x).contains(&p.x)
            && (self.min.y..self.max.y).contains(&p.y)
            && (self.min.z..self.max.z).contains(&p.z)
    }

    pub fn volume(&self) -> usize {
        let d = self.max - self.min;
        (d.x.max(0) as usize) * (d.y.max(0) as usize) * (d.z.max(0) as usize)
    }

    /// Geometric center in cell-center coordinates.
    pub fn center(&self) -> [f64; 3] {
        [
            (self.min.x + self.max.x - 1) as f64 / 2.0,
            (self.min.y + self.max.y - 1) as f64 / 2.0,
            (self.min.z + self.max.z - 1) as f64 / 2.0,
        ]
    }
}

/// Contents of one occupied cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub orient: Orientation,
    /// Pistons only: the head sits one step along `orient`.
    pub extended: bool,
    /// Observers only: output is powered while the tick is below this value.
    pub pulse_until: Option<u64>,
}

impl Block {
    pub fn new(kind: BlockKind, orient: Orientation) -> Self {
        Block {
            kind,
            orient,
            extended: false,
            pulse_until: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Extend,
    Retract,
    ObserverPulse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PendingEvent {
    pub due: u64,
    pub seq: u64,
    pub pos: Pos,
    pub kind: EventKind,
}

/// Sparse voxel world plus the scheduled tick events.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WorldState {
    pub(crate) blocks: BTreeMap<Pos, Block>,
    pub(crate) tick: u64,
    /// Kept sorted by `(due, seq)`.
    pub(crate) pending: Vec<PendingEvent>,
    pub(crate) next_seq: u64,
}

impl WorldState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// For custom [`Dynamics`](crate::sim::Dynamics), which own the clock.
    pub fn set_tick(&mut self, tick: u64) {
        self.tick = tick;
    }

    pub fn get(&self, p: Pos) -> Option<&Block> {
        self.blocks.get(&p)
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Pos, &Block)> {
        self.blocks.iter().map(|(p, b)| (*p, b))
    }

    pub fn pending(&self) -> &[PendingEvent] {
        &self.pending
    }

    /// Writes a block directly, bypassing every rule. Test and fixture use.
    pub fn set(&mut self, p: Pos, block: Block) -> Option<Block> {
        self.blocks.insert(p, block)
    }

    pub fn remove(&mut self, p: Pos) -> Option<Block> {
        self.blocks.remove(&p)
    }

    /// Writes `shape` at `origin + local`. The shape must fit in the 3×3×3
    /// local box and every target cell must be empty.
    pub fn place_shape(&mut self, shape: &[BlockPlacement], origin: Pos) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for b in shape {
            let p = b.pos;
            if !(0..3).contains(&p.x) || !(0..3).contains(&p.y) || !(0..3).contains(&p.z) {
                return Err(Error::OutOfBounds(p));
            }
            if !seen.insert(p) {
                return Err(Error::Overlap(p));
            }
            if self.blocks.contains_key(&(origin + p)) {
                return Err(Error::Occupied(origin + p));
            }
        }
        for b in shape {
            self.blocks.insert(origin + b.pos, Block::new(b.kind, b.orient));
        }
        Ok(())
    }

    /// Unweighted mean of the cell centers of every block in `region`,
    /// piston heads included. `None` when the region is empty.
    pub fn center_of_mass(&self, region: &Region) -> Option<[f64; 3]> {
        let mut sum = [0i64; 3];
        let mut n = 0i64;
        for p in self.blocks.keys().filter(|p| region.contains(**p)) {
            sum[0] += p.x as i64;
            sum[1] += p.y as i64;
            sum[2] += p.z as i64;
            n += 1;
        }
        (n > 0).then(|| sum.map(|s| s as f64 / n as f64))
    }

    pub fn count_blocks(&self, region: &Region) -> usize {
        self.blocks.keys().filter(|p| region.contains(**p)).count()
    }

    /// Shifts every block and every pending event by `v`.
    pub fn translated(&self, v: Pos) -> WorldState {
        WorldState {
            blocks: self.blocks.iter().map(|(p, b)| (*p + v, *b)).collect(),
            tick: self.tick,
            pending: self
                .pending
                .iter()
                .map(|e| PendingEvent { pos: e.pos + v, ..*e })
                .collect(),
            next_seq: self.next_seq,
        }
    }

    /// Loads a world dump (shape text format, heads allowed). Pistons with
    /// their matching head in front of them are marked extended.
    pub fn from_dump(text: &str) -> Result<WorldState> {
        let mut w = WorldState::new();
        for (line, b) in parse_lines(text)? {
            if w.blocks.insert(b.pos, Block::new(b.kind, b.orient)).is_some() {
                return Err(Error::parse(line, format!("duplicate position {}", b.pos)));
            }
        }
        let pistons: Vec<(Pos, Orientation, BlockKind)> = w
            .blocks
            .iter()
            .filter(|(_, b)| b.kind.is_piston())
            .map(|(p, b)| (*p, b.orient, b.kind))
            .collect();
        for (p, o, kind) in pistons {
            let head = match kind {
                BlockKind::StickyPiston => BlockKind::PistonHeadSticky,
                _ => BlockKind::PistonHeadNormal,
            };
            if w.blocks
                .get(&(p + o.unit()))
                .is_some_and(|h| h.kind == head && h.orient == o)
            {
                w.blocks.get_mut(&p).unwrap().extended = true;
            }
        }
        Ok(w)
    }

    /// Every block in the shape text format, lexicographic order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (p, b) in &self.blocks {
            out.push_str(&format_line(*p, b.kind, b.orient));
        }
        out
    }
}

fn format_line(p: Pos, kind: BlockKind, orient: Orientation) -> String {
    format!("{} {} {} {} {}\n", p.x, p.y, p.z, kind, orient)
}

/// Serializes a shape, one `x y z KIND ORIENT` line per block.
pub fn write_shape(shape: &[BlockPlacement]) -> String {
    shape
        .iter()
        .map(|b| format_line(b.pos, b.kind, b.orient))
        .collect()
}

/// Parses the shape text format. Blank lines and `#` comment lines are skipped.
pub fn parse_shape(text: &str) -> Result<Vec<BlockPlacement>> {
    let mut out = Vec::new();
    for (line, b) in parse_lines(text)? {
        if b.kind.is_head() {
            return Err(Error::parse(line, "piston heads cannot appear in a shape"));
        }
        out.push(b);
    }
    Ok(out)
}

fn parse_lines(text: &str) -> Result<Vec<(usize, BlockPlacement)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split(' ').collect();
        if fields.len() != 5 {
            return Err(Error::parse(line, "expected `x y z KIND ORIENT`"));
        }
        let coord = |s: &str| s.parse::<i32>().map_err(|e| Error::parse(line, e.to_string()));
        let pos = Pos::new(coord(fields[0])?, coord(fields[1])?, coord(fields[2])?);
        let kind: BlockKind = fields[3].parse().map_err(|e: String| Error::parse(line, e))?;
        let orient: Orientation = fields[4].parse().map_err(|e: String| Error::parse(line, e))?;
        if kind == BlockKind::Air {
            return Err(Error::parse(line, "air is represented by absence"));
        }
        out.push((line, BlockPlacement { pos, kind, orient }));
    }
    Ok(out)
}
