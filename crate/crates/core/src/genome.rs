//! Direct real-vector encoding of 3×3×3 shapes and its variation operators.
//!
//! Each cell owns a triple `(presence, type, orientation)`. Triple `i` maps to
//! the local cell `(i / 9, (i / 3) % 3, i % 3)`: x slowest, z fastest.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::voxel::{BlockPlacement, BlockSet, Orientation, Pos};

/// Real vector in `[0, 1]^n` with `n` a multiple of 3.
#[derive(Clone, Debug, PartialEq)]
pub struct Genome(Vec<f64>);

impl Genome {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() % 3 != 0 {
            return Err(Error::Length(values.len()));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Config(format!("gene value {v} outside [0, 1]")));
        }
        Ok(Genome(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One line of space-separated values with 17 significant digits.
    pub fn to_line(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 24);
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            write!(s, "{v:.16e}").unwrap();
        }
        s
    }

    /// Parses [`Genome::to_line`] output; `#` lines and blank lines are ignored.
    pub fn from_line(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            for tok in line.split_whitespace() {
                let v = tok
                    .parse::<f64>()
                    .map_err(|e| Error::parse(i + 1, format!("`{tok}`: {e}")))?;
                values.push(v);
            }
        }
        Genome::new(values)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeConfig {
    pub block_set: BlockSet,
    pub presence_threshold: f64,
    pub shape_dims: [usize; 3],
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            block_set: BlockSet::Original,
            presence_threshold: 0.5,
            shape_dims: [3, 3, 3],
        }
    }
}

impl DecodeConfig {
    pub fn with_block_set(block_set: BlockSet) -> Self {
        DecodeConfig {
            block_set,
            ..Self::default()
        }
    }

    pub fn volume(&self) -> usize {
        self.shape_dims.iter().product()
    }

    pub fn genome_len(&self) -> usize {
        3 * self.volume()
    }

    pub fn cell(&self, index: usize) -> Pos {
        let [_, dy, dz] = self.shape_dims;
        Pos::new(
            (index / (dy * dz)) as i32,
            ((index / dz) % dy) as i32,
            (index % dz) as i32,
        )
    }

    fn cell_index(&self, p: Pos) -> Option<usize> {
        let [dx, dy, dz] = self.shape_dims;
        let inside = |v: i32, d: usize| v >= 0 && (v as usize) < d;
        (inside(p.x, dx) && inside(p.y, dy) && inside(p.z, dz))
            .then(|| (p.x as usize * dy + p.y as usize) * dz + p.z as usize)
    }
}

/// Index of `value` when `[0, 1]` is split into `n` equal intervals, with 1.0
/// folded into the last one.
///
/// The product `value * n` can round up onto an integer (`0.6 * 5.0 == 3.0`
/// although the stored 0.6 is just below 3/5); the fused remainder catches it.
pub fn interval_index(value: f64, n: usize) -> usize {
    let n_f = n as f64;
    let mut floor = (value * n_f).floor();
    if value.mul_add(n_f, -floor) < 0.0 {
        floor -= 1.0;
    }
    (floor as usize).min(n - 1)
}

pub fn decode(g: &Genome, cfg: &DecodeConfig) -> Result<Vec<BlockPlacement>> {
    if g.len() != cfg.genome_len() {
        return Err(Error::LengthMismatch {
            expected: cfg.genome_len(),
            found: g.len(),
        });
    }
    let kinds = cfg.block_set.members();
    let shape = g
        .values()
        .chunks_exact(3)
        .enumerate()
        .filter(|(_, t)| t[0] > cfg.presence_threshold)
        .map(|(i, t)| BlockPlacement {
            pos: cfg.cell(i),
            kind: kinds[interval_index(t[1], kinds.len())],
            orient: Orientation::ALL[interval_index(t[2], 6)],
        })
        .collect();
    Ok(shape)
}

/// A genome that decodes to `shape`, using interval midpoints.
pub fn encode(shape: &[BlockPlacement], cfg: &DecodeConfig) -> Result<Genome> {
    let kinds = cfg.block_set.members();
    let mut values = vec![0.0; cfg.genome_len()];
    for b in shape {
        let i = cfg.cell_index(b.pos).ok_or(Error::OutOfBounds(b.pos))?;
        let k = kinds
            .iter()
            .position(|k| *k == b.kind)
            .ok_or_else(|| Error::Config(format!("{} is not in the block set", b.kind)))?;
        values[3 * i] = 1.0;
        values[3 * i + 1] = (k as f64 + 0.5) / kinds.len() as f64;
        values[3 * i + 2] = (b.orient.index() as f64 + 0.5) / 6.0;
    }
    Genome::new(values)
}

pub fn random_genome<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Result<Genome> {
    if len == 0 || len % 3 != 0 {
        return Err(Error::Length(len));
    }
    Ok(Genome((0..len).map(|_| rng.gen::<f64>()).collect()))
}

/// Bounded polynomial mutation on `[0, 1]`, each gene independently with
/// probability `rate`.
pub fn polynomial_mutate<R: Rng + ?Sized>(g: &Genome, rng: &mut R, rate: f64, eta: f64) -> Genome {
    let values = g
        .values()
        .iter()
        .map(|&x| {
            if rng.gen::<f64>() < rate {
                polynomial_perturb(x, rng.gen::<f64>(), eta)
            } else {
                x
            }
        })
        .collect();
    Genome(values)
}

/// Deb's bounded polynomial perturbation of `x` in `[0, 1]` for a uniform draw `u`.
pub fn polynomial_perturb(x: f64, u: f64, eta: f64) -> f64 {
    let power = 1.0 / (eta + 1.0);
    let delta = if u < 0.5 {
        let xy = 1.0 - x;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
        val.powf(power) - 1.0
    } else {
        let xy = x;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
        1.0 - val.powf(power)
    };
    (x + delta).clamp(0.0, 1.0)
}

/// Single-point crossover with the cut on a triple boundary: `a`'s prefix, `b`'s suffix.
pub fn crossover<R: Rng + ?Sized>(a: &Genome, b: &Genome, rng: &mut R) -> Result<Genome> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let cut = 3 * rng.gen_range(0..=a.len() / 3);
    crossover_at(a, b, cut)
}

pub fn crossover_at(a: &Genome, b: &Genome, cut: usize) -> Result<Genome> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    assert!(cut % 3 == 0 && cut <= a.len(), "cut {cut} is not a triple boundary");
    let mut v = a.values()[..cut].to_vec();
    v.extend_from_slice(&b.values()[cut..]);
    Ok(Genome(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voxel::BlockKind;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triple_genome(i: usize, t: [f64; 3]) -> Genome {
        let mut v = vec![0.0; 81];
        v[3 * i..3 * i + 3].copy_from_slice(&t);
        Genome::new(v).unwrap()
    }

    #[test]
    fn low_presence_is_absent() {
        let cfg = DecodeConfig::default();
        assert!(decode(&triple_genome(0, [0.4, 0.9, 0.9]), &cfg).unwrap().is_empty());
        assert!(decode(&triple_genome(0, [0.5, 0.9, 0.9]), &cfg).unwrap().is_empty());
        assert!(decode(&Genome::new(vec![0.0; 81]).unwrap(), &cfg).unwrap().is_empty());
    }

    #[test]
    fn index_zero_triple() {
        let shape = decode(&triple_genome(0, [0.9, 0.0, 0.0]), &DecodeConfig::default()).unwrap();
        assert_eq!(
            shape,
            vec![BlockPlacement::new(Pos::new(0, 0, 0), BlockKind::RedstoneBlock, Orientation::North)]
        );
    }

    #[test]
    fn cell_order_is_x_major() {
        let cfg = DecodeConfig::default();
        assert_eq!(cfg.cell(1), Pos::new(0, 0, 1));
        assert_eq!(cfg.cell(3), Pos::new(0, 1, 0));
        assert_eq!(cfg.cell(9), Pos::new(1, 0, 0));
        assert_eq!(cfg.cell(26), Pos::new(2, 2, 2));
        for i in 0..27 {
            assert_eq!(cfg.cell_index(cfg.cell(i)), Some(i));
        }
    }

    #[test]
    fn decode_length_mismatch() {
        let g = Genome::new(vec![0.0; 9]).unwrap();
        assert!(matches!(
            decode(&g, &DecodeConfig::default()),
            Err(Error::LengthMismatch { expected: 81, found: 9 })
        ));
    }

    #[test]
    fn interval_boundaries() {
        assert_eq!(interval_index(0.0, 5), 0);
        assert_eq!(interval_index(0.2, 5), 1);
        // The double nearest 0.6 lies below 3/5; 0.2 and 0.8 lie above.
        assert_eq!(interval_index(0.6, 5), 2);
        assert_eq!(interval_index(0.8, 5), 4);
        assert_eq!(interval_index(0.6f64.next_up(), 5), 3);
        assert_eq!(interval_index(1.0, 5), 4);
        assert_eq!(interval_index(1.0, 6), 5);
        assert_eq!(interval_index(0.5, 6), 3);
    }

    #[test]
    fn random_genome_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_genome(&mut rng, 81).unwrap();
        assert_eq!(g.len(), 81);
        assert!(g.values().iter().all(|v| (0.0..=1.0).contains(v)));
        let again = random_genome(&mut ChaCha8Rng::seed_from_u64(7), 81).unwrap();
        assert_eq!(g, again);
        assert!(matches!(random_genome(&mut rng, 80), Err(Error::Length(80))));
    }

    #[test]
    fn random_genome_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut sums = [0.0f64; 3];
        for _ in 0..n {
            let g = random_genome(&mut rng, 3).unwrap();
            for (s, v) in sums.iter_mut().zip(g.values()) {
                *s += v;
            }
        }
        for s in sums {
            assert!((s / n as f64 - 0.5).abs() < 0.01);
        }
    }

    #[test]
    fn zero_rate_mutation_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_genome(&mut rng, 81).unwrap();
        assert_eq!(polynomial_mutate(&g, &mut rng, 0.0, 20.0), g);
    }

    #[test]
    fn mutation_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let edges = Genome::new(vec![0.0, 1.0, 0.0]).unwrap();
        for _ in 0..1000 {
            let m = polynomial_mutate(&edges, &mut rng, 1.0, 20.0);
            assert!(m.values().iter().all(|v| (0.0..=1.0).contains(v)));
        }
        assert_eq!(polynomial_perturb(0.0, 0.0, 20.0), 0.0);
        assert_eq!(polynomial_perturb(1.0, 0.999_999, 20.0), 1.0);
    }

    /// Mutating 0.5 must be symmetric: a two-sided sign test at the 1% level.
    #[test]
    fn mutation_of_center_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = Genome::new(vec![0.5; 3]).unwrap();
        let (mut above, mut below, mut sum, mut n) = (0u64, 0u64, 0.0, 0u64);
        while n < 100_000 {
            for v in polynomial_mutate(&g, &mut rng, 1.0, 20.0).values() {
                sum += v;
                n += 1;
                if *v > 0.5 {
                    above += 1;
                } else if *v < 0.5 {
                    below += 1;
                }
            }
        }
        assert!((sum / n as f64 - 0.5).abs() < 1e-3);
        let m = (above + below) as f64;
        let z = (above as f64 - m / 2.0) / (m / 4.0).sqrt();
        assert!(z.abs() < 2.576, "sign test z = {z}");
    }

    #[test]
    fn crossover_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_genome(&mut rng, 81).unwrap();
        let b = random_genome(&mut rng, 81).unwrap();
        assert_eq!(crossover(&a, &a, &mut rng).unwrap(), a);
        assert_eq!(crossover_at(&a, &b, 0).unwrap(), b);
        assert_eq!(crossover_at(&a, &b, 81).unwrap(), a);
        let short = random_genome(&mut rng, 9).unwrap();
        assert!(crossover(&a, &short, &mut rng).is_err());
    }

    #[test]
    fn line_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let g = random_genome(&mut rng, 81).unwrap();
        let line = g.to_line();
        assert_eq!(line.split(' ').count(), 81);
        assert_eq!(Genome::from_line(&line).unwrap(), g);
    }

    #[test]
    fn encode_inverts_decode() {
        let cfg = DecodeConfig::with_block_set(BlockSet::Observer);
        let shape = vec![
            BlockPlacement::new(Pos::new(0, 1, 2), BlockKind::Observer, Orientation::Down),
            BlockPlacement::new(Pos::new(2, 0, 0), BlockKind::SlimeBlock, Orientation::East),
        ];
        let mut got = decode(&encode(&shape, &cfg).unwrap(), &cfg).unwrap();
        got.sort();
        let mut want = shape;
        want.sort();
        assert_eq!(got, want);
    }

    proptest! {
        #[test]
        fn crossover_children_take_whole_triples(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_genome(&mut rng, 81).unwrap();
            let b = random_genome(&mut rng, 81).unwrap();
            let child = crossover(&a, &b, &mut rng).unwrap();
            for i in 0..27 {
                let c = &child.values()[3 * i..3 * i + 3];
                prop_assert!(c == &a.values()[3 * i..3 * i + 3] || c == &b.values()[3 * i..3 * i + 3]);
            }
        }

        #[test]
        fn mutation_preserves_length_and_bounds(seed in any::<u64>(), rate in 0.0f64..=1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_genome(&mut rng, 81).unwrap();
            let m = polynomial_mutate(&g, &mut rng, rate, 20.0);
            prop_assert_eq!(m.len(), 81);
            prop_assert!(m.values().iter().all(|v| (0.0..=1.0).contains(v)));
        }

        #[test]
        fn decode_is_pure(seed in any::<u64>()) {
            let g = random_genome(&mut ChaCha8Rng::seed_from_u64(seed), 81).unwrap();
            let cfg = DecodeConfig::with_block_set(BlockSet::Observer);
            prop_assert_eq!(decode(&g, &cfg).unwrap(), decode(&g, &cfg).unwrap());
        }
    }
}
