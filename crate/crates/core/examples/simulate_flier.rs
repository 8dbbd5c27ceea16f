//! Steps a hand-built flying machine and prints where it is every cycle.
//!
//! cargo run --example simulate_flier

use flyevo::sim::{spawn_shape, step, TickConfig};
use flyevo::voxel::{parse_shape, Pos, WorldState};

const FLIER: &str = "\
0 0 0 PISTON EAST
0 1 0 SLIME_BLOCK NORTH
1 0 0 REDSTONE_BLOCK NORTH
1 1 0 SLIME_BLOCK NORTH
2 0 0 SLIME_BLOCK NORTH
2 0 1 SLIME_BLOCK NORTH
2 0 2 SLIME_BLOCK NORTH
2 1 0 STICKY_PISTON WEST
2 1 1 OBSERVER SOUTH
2 1 2 QUARTZ_BLOCK NORTH
";

fn main() -> flyevo::Result<()> {
    let shape = parse_shape(FLIER)?;
    let cfg = TickConfig::default();
    let mut world = WorldState::new();
    spawn_shape(&mut world, &shape, Pos::new(0, 0, 0), &cfg)?;

    println!("tick  min_x  max_x  blocks");
    for _ in 0..=8 {
        let xs = world.blocks().map(|(p, _)| p.x);
        let (lo, hi) = xs.fold((i32::MAX, i32::MIN), |(a, b), x| (a.min(x), b.max(x)));
        println!("{:>4}  {lo:>5}  {hi:>5}  {:>6}", world.tick(), world.len());
        for _ in 0..8 {
            step(&mut world, &cfg);
        }
    }
    println!("\nfinal world:\n{}", world.dump());
    Ok(())
}
