//! Behavior characterizations and archive bin indexing.
//!
//! All three characterizations are structural: they are computed from the
//! decoded shape before it is simulated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::voxel::{BlockPlacement, Pos};

/// Pistons per axis group at or above this count share the top bin.
pub const PISTON_COUNT_CAP: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BehaviorDescriptor(pub Vec<usize>);

impl fmt::Display for BehaviorDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Characterization {
    BlockCount,
    BlockCountNegativeSpace,
    PistonOrientation,
}

impl Characterization {
    pub fn describe(self, shape: &[BlockPlacement]) -> BehaviorDescriptor {
        match self {
            Characterization::BlockCount => block_count_bc(shape),
            Characterization::BlockCountNegativeSpace => {
                BehaviorDescriptor(vec![shape.len(), negative_space(shape)])
            }
            Characterization::PistonOrientation => piston_orientation_bc(shape),
        }
    }
}

impl FromStr for Characterization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "block-count" => Ok(Characterization::BlockCount),
            "block-count-negative-space" => Ok(Characterization::BlockCountNegativeSpace),
            "piston-orientation" => Ok(Characterization::PistonOrientation),
            _ => Err(format!("unknown characterization `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchiveLayout {
    pub characterization: Characterization,
    pub dims: Vec<usize>,
}

impl ArchiveLayout {
    /// Layout for a 3×3×3 shape box.
    pub fn new(characterization: Characterization) -> Self {
        let dims = match characterization {
            Characterization::BlockCount => vec![28],
            Characterization::BlockCountNegativeSpace => vec![28, 27],
            Characterization::PistonOrientation => vec![PISTON_COUNT_CAP + 1; 3],
        };
        ArchiveLayout {
            characterization,
            dims,
        }
    }

    pub fn total_bins(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn describe(&self, shape: &[BlockPlacement]) -> BehaviorDescriptor {
        self.characterization.describe(shape)
    }

    pub fn bin_of(&self, shape: &[BlockPlacement]) -> Result<usize> {
        bin_index(&self.describe(shape), self)
    }

    /// Inverse of [`bin_index`].
    pub fn descriptor_of(&self, mut index: usize) -> Result<BehaviorDescriptor> {
        if index >= self.total_bins() {
            return Err(Error::Bounds {
                descriptor: vec![index],
                dims: self.dims.clone(),
            });
        }
        let mut out = vec![0; self.dims.len()];
        for (slot, d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        Ok(BehaviorDescriptor(out))
    }
}

pub fn block_count_bc(shape: &[BlockPlacement]) -> BehaviorDescriptor {
    BehaviorDescriptor(vec![shape.len()])
}

/// Air cells inside the tight bounding cuboid of `shape`; 0 for an empty shape.
pub fn negative_space(shape: &[BlockPlacement]) -> usize {
    let Some(first) = shape.first() else { return 0 };
    let (mut lo, mut hi) = (first.pos, first.pos);
    for b in shape {
        lo = Pos::new(lo.x.min(b.pos.x), lo.y.min(b.pos.y), lo.z.min(b.pos.z));
        hi = Pos::new(hi.x.max(b.pos.x), hi.y.max(b.pos.y), hi.z.max(b.pos.z));
    }
    let extent = hi - lo;
    let volume = (extent.x + 1) as usize * (extent.y + 1) as usize * (extent.z + 1) as usize;
    volume - shape.len()
}

/// Piston and sticky piston counts per axis group (north/south, east/west,
/// up/down), each capped at [`PISTON_COUNT_CAP`].
pub fn piston_orientation_bc(shape: &[BlockPlacement]) -> BehaviorDescriptor {
    let mut counts = vec![0usize; 3];
    for b in shape.iter().filter(|b| b.kind.is_piston()) {
        counts[b.orient.axis_group()] += 1;
    }
    for c in &mut counts {
        *c = (*c).min(PISTON_COUNT_CAP);
    }
    BehaviorDescriptor(counts)
}

/// Row-major flattening of `d` within `layout`.
pub fn bin_index(d: &BehaviorDescriptor, layout: &ArchiveLayout) -> Result<usize> {
    if d.0.len() != layout.dims.len() || d.0.iter().zip(&layout.dims).any(|(v, n)| v >= n) {
        return Err(Error::Bounds {
            descriptor: d.0.clone(),
            dims: layout.dims.clone(),
        });
    }
    Ok(d.0.iter().zip(&layout.dims).fold(0, |acc, (v, n)| acc * n + v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voxel::{BlockKind, Orientation};

    fn block(x: i32, y: i32, z: i32) -> BlockPlacement {
        BlockPlacement::new(Pos::new(x, y, z), BlockKind::QuartzBlock, Orientation::North)
    }

    fn piston(kind: BlockKind, o: Orientation, i: i32) -> BlockPlacement {
        BlockPlacement::new(Pos::new(i / 9, (i / 3) % 3, i % 3), kind, o)
    }

    fn cube2() -> Vec<BlockPlacement> {
        (0..8).map(|i| block(i & 1, (i >> 1) & 1, (i >> 2) & 1)).collect()
    }

    #[test]
    fn block_count_examples() {
        assert_eq!(block_count_bc(&[]).0, vec![0]);
        assert_eq!(block_count_bc(&cube2()).0, vec![8]);
        let full: Vec<_> = (0..27).map(|i| block(i / 9, (i / 3) % 3, i % 3)).collect();
        assert_eq!(block_count_bc(&full).0, vec![27]);
    }

    #[test]
    fn negative_space_examples() {
        assert_eq!(negative_space(&[]), 0);
        assert_eq!(negative_space(&cube2()), 0);
        assert_eq!(negative_space(&[block(0, 0, 0), block(1, 1, 1)]), 6);
        let holed: Vec<_> = (0..27)
            .filter(|i| *i != 13)
            .map(|i| block(i / 9, (i / 3) % 3, i % 3))
            .collect();
        assert_eq!(negative_space(&holed), 1);
    }

    #[test]
    fn piston_orientation_examples() {
        assert_eq!(piston_orientation_bc(&[block(0, 0, 0)]).0, vec![0, 0, 0]);
        let shape = vec![
            piston(BlockKind::Piston, Orientation::North, 0),
            piston(BlockKind::Piston, Orientation::North, 1),
            piston(BlockKind::StickyPiston, Orientation::South, 2),
            piston(BlockKind::Piston, Orientation::East, 3),
        ];
        assert_eq!(piston_orientation_bc(&shape).0, vec![3, 1, 0]);
        let ups: Vec<_> = (0..7).map(|i| piston(BlockKind::Piston, Orientation::Up, i)).collect();
        assert_eq!(piston_orientation_bc(&ups).0, vec![0, 0, 5]);
    }

    #[test]
    fn bin_index_examples() {
        let count = ArchiveLayout::new(Characterization::BlockCount);
        let po = ArchiveLayout::new(Characterization::PistonOrientation);
        assert_eq!(bin_index(&BehaviorDescriptor(vec![0]), &count).unwrap(), 0);
        assert_eq!(bin_index(&BehaviorDescriptor(vec![27]), &count).unwrap(), 27);
        assert_eq!(bin_index(&BehaviorDescriptor(vec![1, 2, 3]), &po).unwrap(), 51);
        assert!(bin_index(&BehaviorDescriptor(vec![28]), &count).is_err());
        assert!(bin_index(&BehaviorDescriptor(vec![1, 2]), &po).is_err());
    }

    #[test]
    fn layout_sizes() {
        assert_eq!(ArchiveLayout::new(Characterization::BlockCount).total_bins(), 28);
        assert_eq!(ArchiveLayout::new(Characterization::BlockCountNegativeSpace).total_bins(), 756);
        assert_eq!(ArchiveLayout::new(Characterization::PistonOrientation).total_bins(), 216);
    }

    #[test]
    fn bin_index_is_a_bijection() {
        for c in [
            Characterization::BlockCount,
            Characterization::BlockCountNegativeSpace,
            Characterization::PistonOrientation,
        ] {
            let layout = ArchiveLayout::new(c);
            for i in 0..layout.total_bins() {
                let d = layout.descriptor_of(i).unwrap();
                assert_eq!(bin_index(&d, &layout).unwrap(), i);
            }
            assert!(layout.descriptor_of(layout.total_bins()).is_err());
        }
    }
}
