//! Independent oracles and fixture helpers shared by integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use flyevo::sim::{step, TickConfig};
use flyevo::voxel::{BlockPlacement, WorldState};

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

/// `@ tick` headers followed by that tick's world dump.
pub fn parse_trace(text: &str) -> BTreeMap<u64, String> {
    let mut out = BTreeMap::new();
    let mut current: Option<(u64, String)> = None;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        if let Some(t) = line.strip_prefix("@ ") {
            out.extend(current.take());
            current = Some((t.parse().unwrap(), String::new()));
        } else {
            let (_, body) = current.as_mut().expect("dump before first @");
            body.push_str(line);
            body.push('\n');
        }
    }
    out.extend(current);
    out
}

pub fn sorted_lines(s: &str) -> Vec<String> {
    let mut v: Vec<String> = s.lines().map(str::to_owned).collect();
    v.sort();
    v
}

/// Replays a trace fixture; `Err` names the first tick that differs.
pub fn check_trace(name: &str) -> Result<(), String> {
    let trace = parse_trace(&fixture(name));
    let cfg = TickConfig::default();
    let mut world = WorldState::from_dump(&trace[&0]).map_err(|e| e.to_string())?;
    for (&tick, expected) in &trace {
        while world.tick() < tick {
            step(&mut world, &cfg);
        }
        if sorted_lines(&world.dump()) != sorted_lines(expected) {
            return Err(format!("{name}: world differs at tick {tick}:\n{}", world.dump()));
        }
    }
    Ok(())
}

pub const TRACES: [&str; 5] = [
    "extension.trace",
    "push_limit_12.trace",
    "push_limit_13.trace",
    "sticky_pull.trace",
    "observer_chain.trace",
];

/// Air cells in the bounding cuboid, by visiting every cell of it.
pub fn negative_space_oracle(shape: &[BlockPlacement]) -> usize {
    if shape.is_empty() {
        return 0;
    }
    let lo = |f: fn(&BlockPlacement) -> i32| shape.iter().map(f).min().unwrap();
    let hi = |f: fn(&BlockPlacement) -> i32| shape.iter().map(f).max().unwrap();
    let (x0, x1) = (lo(|b| b.pos.x), hi(|b| b.pos.x));
    let (y0, y1) = (lo(|b| b.pos.y), hi(|b| b.pos.y));
    let (z0, z1) = (lo(|b| b.pos.z), hi(|b| b.pos.z));
    let mut air = 0;
    for x in x0..=x1 {
        for y in y0..=y1 {
            for z in z0..=z1 {
                if !shape.iter().any(|b| (b.pos.x, b.pos.y, b.pos.z) == (x, y, z)) {
                    air += 1;
                }
            }
        }
    }
    air
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Two-sided Fisher p by exact integer enumeration: every table with the
/// observed margins whose hypergeometric weight does not exceed the observed
/// one, compared and summed as integers over a common denominator.
pub fn fisher_oracle(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let (r1, r2, c1) = (a + b, c + d, a + c);
    let weight = |x: u64| binomial(r1, x) * binomial(r2, c1 - x);
    let observed = weight(a);
    let lo = c1.saturating_sub(r2);
    let hi = r1.min(c1);
    let num: u128 = (lo..=hi).map(weight).filter(|w| *w <= observed).sum();
    num as f64 / binomial(r1 + r2, c1) as f64
}
