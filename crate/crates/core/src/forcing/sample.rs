//! Random valid conditions and amalgamation instances.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::model::Space;

use super::branch::BranchMap;
use super::condition::Condition;
use super::density::{
    add_index_with, deepen_with, random_balanced_map, transport, OrderBijection, SeededFiller,
};
use super::ForcingError;

/// Adds `indices` in the given order with random values, then deepens.
pub fn random_condition(
    space: &Space,
    indices: &[usize],
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Condition, ForcingError> {
    let mut c = Condition::trivial();
    for &xi in indices {
        c = add_index_with(&c, xi, space, &mut SeededFiller::new(rng))?;
    }
    deepen_with(&c, depth, space, &mut SeededFiller::new(rng))
}

/// Inputs satisfying every hypothesis of amalgamation.
#[derive(Clone, Debug)]
pub struct AmalgamationInstance {
    pub p1: Condition,
    pub p2: Condition,
    pub bijection: OrderBijection,
    pub eps: BTreeMap<usize, BranchMap>,
    pub deltas: BTreeMap<usize, BranchMap>,
}

/// A random condition on `root ∪ left` and its transport onto `root ∪ right`,
/// with random balanced ε and constant δ. The caller chooses blocks whose
/// codes agree pairwise up to `depth`.
pub fn random_instance(
    space: &Space,
    root: &[usize],
    left: &[usize],
    right: &[usize],
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AmalgamationInstance, ForcingError> {
    let mut order: Vec<usize> = root.iter().chain(left).copied().collect();
    // random insertion order exercises different intermediate depths
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let p1 = random_condition(space, &order, depth, rng)?;
    let domain: Vec<usize> = p1.indices().collect();
    let mut range: Vec<usize> = root.to_vec();
    range.extend(right);
    range.sort_unstable();
    let bijection = OrderBijection::new(&domain, &range).expect("blocks of equal size");
    let p2 = transport(&p1, &bijection);
    let branches = space.branches();
    let eps = left
        .iter()
        .map(|&xi| (xi, random_balanced_map(rng, branches)))
        .collect();
    let deltas = left
        .iter()
        .map(|&xi| (xi, BranchMap::constant(rng.gen_range(1..=branches), branches)))
        .collect();
    Ok(AmalgamationInstance {
        p1,
        p2,
        bijection,
        eps,
        deltas,
    })
}
