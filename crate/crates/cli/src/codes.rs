//! Code generators and the space they produce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splitcantor::model::{BitString, Space, SpaceConfig};

use crate::config::{CodeMode, ConfigError, ExperimentConfig};

/// Stream of the code generator, apart from the chain's.
const CODE_STREAM: u64 = 1;

/// `(α-block, β-block)` for each complete twin group, in index order.
pub fn twin_blocks(count: usize, block: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    (0..count / (2 * block))
        .map(|g| {
            let start = 2 * block * g;
            ((start..start + block).collect(), (start + block..start + 2 * block).collect())
        })
        .collect()
}

/// Index `2bg + i` and `2bg + b + i` share the head `bg + i` on the first
/// `prefix` bits and differ at the next bit; leftover indices get heads
/// of their own. Low bits are random.
pub fn twin_block_codes(
    count: usize,
    resolution: usize,
    block: usize,
    prefix: usize,
    rng: &mut impl Rng,
) -> Result<Vec<BitString>, ConfigError> {
    if block == 0 || prefix >= resolution {
        return Err(ConfigError::Invalid(format!(
            "twin blocks need block ≥ 1 and prefix < m, got block {block}, prefix {prefix}"
        )));
    }
    let group = 2 * block;
    let paired = count / group * group;
    let heads = paired / 2 + (count - paired);
    if heads as u64 > 1u64 << prefix {
        return Err(ConfigError::Invalid(format!(
            "{heads} twin heads do not fit in a prefix of length {prefix}"
        )));
    }
    let tail = resolution - prefix - 1;
    let mut out = Vec::with_capacity(count);
    for xi in 0..count {
        let (head, side) = if xi < paired {
            let (g, r) = (xi / group, xi % group);
            (g * block + r % block, (r / block) as u64)
        } else {
            (paired / 2 + xi - paired, 0)
        };
        let low = rng.gen_range(0..1u64 << tail);
        let value = ((head as u64) << (tail + 1)) | (side << tail) | low;
        out.push(BitString::new(value, resolution).expect("value fits the resolution"));
    }
    Ok(out)
}

pub fn random_codes(count: usize, resolution: usize, rng: &mut impl Rng) -> Vec<BitString> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = rng.gen_range(0..1u64 << resolution);
        if seen.insert(v) {
            out.push(BitString::new(v, resolution).expect("value fits the resolution"));
        }
    }
    out
}

pub fn make_space(config: &ExperimentConfig) -> Result<Space, ConfigError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(CODE_STREAM);
    let codes = match &config.codes {
        CodeMode::Explicit { codes } => codes.clone(),
        CodeMode::TwinBlocks { block, prefix } => {
            twin_block_codes(config.lambda, config.m, *block, *prefix, &mut rng)?
        }
        CodeMode::Random => random_codes(config.lambda, config.m, &mut rng),
    };
    Space::new(SpaceConfig::new(config.n, config.m, codes))
        .map_err(|e| ConfigError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twins_share_exactly_the_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let codes = twin_block_codes(11, 9, 2, 4, &mut rng).unwrap();
        for (a, b) in twin_blocks(11, 2) {
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(codes[*x].common_prefix_len(&codes[*y]), 4);
            }
        }
        // every head is distinct within the α side and the leftovers
        let heads: std::collections::BTreeSet<_> = [0, 1, 4, 5, 8, 9, 10]
            .iter()
            .map(|&x| codes[x].prefix(4))
            .collect();
        assert_eq!(heads.len(), 7);
    }

    #[test]
    fn too_many_heads() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(twin_block_codes(40, 8, 1, 4, &mut rng).is_err());
    }
}
