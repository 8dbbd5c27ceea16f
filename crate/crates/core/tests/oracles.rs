mod common;

use common::{fisher_oracle, negative_space_oracle};
use flyevo::behavior::negative_space;
use flyevo::genome::{decode, random_genome, DecodeConfig};
use flyevo::stats::fisher_exact_2x2;
use flyevo::voxel::BlockSet;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn negative_space_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let dc = DecodeConfig::with_block_set(BlockSet::Observer);
    for _ in 0..1000 {
        let shape = decode(&random_genome(&mut rng, 81).unwrap(), &dc).unwrap();
        assert_eq!(negative_space(&shape), negative_space_oracle(&shape));
    }
}

#[test]
fn fisher_matches_enumeration_on_known_tables() {
    for (a, b, c, d) in [(1, 1, 1, 1), (10, 0, 0, 10), (28, 2, 14, 16), (21, 9, 9, 21), (0, 30, 3, 27)] {
        let p = fisher_exact_2x2(a, b, c, d).unwrap();
        assert!((p - fisher_oracle(a, b, c, d)).abs() < 1e-12, "({a},{b};{c},{d})");
    }
    assert!((fisher_oracle(10, 0, 0, 10) - 2.0 / 184_756.0).abs() < 1e-18);
}

proptest! {
    #[test]
    fn fisher_matches_enumeration(a in 0u64..31, b in 0u64..31, c in 0u64..31, d in 0u64..31) {
        prop_assume!(a + b + c + d > 0);
        let p = fisher_exact_2x2(a, b, c, d).unwrap();
        prop_assert!((p - fisher_oracle(a, b, c, d)).abs() < 1e-12);
        prop_assert!((p - fisher_exact_2x2(d, c, b, a).unwrap()).abs() < 1e-12);
    }
}
