#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splitcantor::model::{BitString, Space, SpaceConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Indices `0..root` have their own prefixes of length `prefix`; then
/// come `k` left indices and their `k` right twins, left `i` and right `i`
/// sharing a prefix of length `prefix`. Remaining bits are random.
pub fn twin_space(half: usize, root: usize, k: usize, prefix: usize, resolution: usize, seed: u64) -> Space {
    assert!(root + k <= 1 << prefix && prefix < resolution);
    let mut r = rng(seed);
    let tail = resolution - prefix - 1;
    let mut code = |head: usize, side: u64| {
        let low: u64 = r.gen_range(0..1u64 << tail);
        BitString::new(((head as u64) << (tail + 1)) | (side << tail) | low, resolution).unwrap()
    };
    let mut codes: Vec<BitString> = (0..root).map(|j| code(j, 0)).collect();
    codes.extend((0..k).map(|i| code(root + i, 0)));
    codes.extend((0..k).map(|i| code(root + i, 1)));
    Space::new(SpaceConfig::new(half, resolution, codes)).unwrap()
}

/// `count` random distinct codes.
pub fn random_space(half: usize, count: usize, resolution: usize, seed: u64) -> Space {
    let mut r = rng(seed);
    let mut values = std::collections::BTreeSet::new();
    let mut codes = Vec::new();
    while codes.len() < count {
        let v: u64 = r.gen_range(0..1u64 << resolution);
        if values.insert(v) {
            codes.push(BitString::new(v, resolution).unwrap());
        }
    }
    Space::new(SpaceConfig::new(half, resolution, codes)).unwrap()
}
