use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::model::{BitString, Space};

use super::branch::BranchMap;
use super::condition::{Assignment, AssignmentTable, Condition};
use super::ForcingError;

/// Source of values for strings a condition leaves unconstrained.
pub trait Filler {
    /// Value for `f_ξ(s)`; `lower` is `F ∩ ξ` of the condition being built.
    fn fill(&mut self, index: usize, s: BitString, lower: &[usize], branches: usize) -> Assignment;
}

/// `(constant 1, ξ)` everywhere.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultFiller;

impl Filler for DefaultFiller {
    fn fill(&mut self, index: usize, _: BitString, _: &[usize], branches: usize) -> Assignment {
        Assignment::constant(1, branches, index)
    }
}

/// Random valid values: a random constant owned by ξ, or a random
/// parity-balanced map onto a random earlier index.
pub struct SeededFiller<'a> {
    rng: &'a mut ChaCha8Rng,
}

impl<'a> SeededFiller<'a> {
    pub fn new(rng: &'a mut ChaCha8Rng) -> Self {
        SeededFiller { rng }
    }
}

impl Filler for SeededFiller<'_> {
    fn fill(&mut self, index: usize, _: BitString, lower: &[usize], branches: usize) -> Assignment {
        if lower.is_empty() || self.rng.gen_bool(0.5) {
            let v = self.rng.gen_range(1..=branches);
            Assignment::constant(v, branches, index)
        } else {
            let source = *lower.choose(self.rng).expect("nonempty");
            Assignment::new(random_balanced_map(self.rng, branches), source)
        }
    }
}

/// A uniformly chosen odd/even pairing, each pair sent to one random value.
/// Every such map is parity-balanced.
pub fn random_balanced_map<R: Rng + ?Sized>(rng: &mut R, branches: usize) -> BranchMap {
    let mut evens: Vec<usize> = (1..=branches / 2).map(|k| 2 * k).collect();
    evens.shuffle(rng);
    let mut values = vec![0usize; branches];
    for (k, &even) in evens.iter().enumerate() {
        let v = rng.gen_range(1..=branches);
        values[2 * k] = v;
        values[even - 1] = v;
    }
    BranchMap::new(values)
}

/// `deepen` with the default filler.
pub fn deepen(p: &Condition, k: usize, space: &Space) -> Result<Condition, ForcingError> {
    deepen_with(p, k, space, &mut DefaultFiller)
}

/// Raises the depth to `max(n_p, k)`: inherited strings copy the value of
/// their restriction, strings above `x_ξ|n_p` are filled.
pub fn deepen_with(
    p: &Condition,
    k: usize,
    space: &Space,
    filler: &mut dyn Filler,
) -> Result<Condition, ForcingError> {
    if k > space.resolution() {
        return Err(ForcingError::ResolutionExhausted {
            needed: k,
            resolution: space.resolution(),
        });
    }
    if k <= p.depth() {
        return Ok(p.clone());
    }
    let np = p.depth();
    let indices: Vec<usize> = p.indices().collect();
    let branches = space.branches();
    let mut tables = BTreeMap::new();
    for (pos, &xi) in indices.iter().enumerate() {
        let old = p.table(xi).expect("index present");
        let code = space.code(xi);
        let own_p = code.prefix(np);
        let lower = &indices[..pos];
        let table = AssignmentTable::from_fn(k, code.prefix(k), |s| {
            let t = s.prefix(np);
            if t == own_p {
                filler.fill(xi, s, lower, branches)
            } else {
                old.get(t).expect("valid input condition").clone()
            }
        });
        tables.insert(xi, Arc::new(table));
    }
    Ok(Condition::from_shared(k, tables))
}

/// `add_index` with the default filler.
pub fn add_index(p: &Condition, index: usize, space: &Space) -> Result<Condition, ForcingError> {
    add_index_with(p, index, space, &mut DefaultFiller)
}

/// Adds ξ to F, deepening first until `x_ξ`'s prefix separates from every
/// prefix already in F.
pub fn add_index_with(
    p: &Condition,
    index: usize,
    space: &Space,
    filler: &mut dyn Filler,
) -> Result<Condition, ForcingError> {
    if index >= space.index_count() {
        return Err(ForcingError::IndexOutOfRange {
            index,
            count: space.index_count(),
        });
    }
    if p.contains(index) {
        return Ok(p.clone());
    }
    let code = space.code(index);
    let needed = p
        .indices()
        .map(|eta| code.common_prefix_len(&space.code(eta)) + 1)
        .max()
        .unwrap_or(0)
        .max(p.depth());
    let q = deepen_with(p, needed, space, filler)?;
    let depth = q.depth();
    let lower: Vec<usize> = q.indices().filter(|&eta| eta < index).collect();
    let branches = space.branches();
    let table = AssignmentTable::from_fn(depth, code.prefix(depth), |s| {
        filler.fill(index, s, &lower, branches)
    });
    let mut tables = q.shared_tables().clone();
    tables.insert(index, Arc::new(table));
    Ok(Condition::from_shared(depth, tables))
}

/// Order-preserving bijection between the index sets of two conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderBijection {
    pairs: Vec<(usize, usize)>,
}

impl OrderBijection {
    pub fn new(domain: &[usize], range: &[usize]) -> Option<Self> {
        (domain.len() == range.len()).then(|| OrderBijection {
            pairs: domain.iter().copied().zip(range.iter().copied()).collect(),
        })
    }

    pub fn apply(&self, xi: usize) -> Option<usize> {
        self.pairs.iter().find(|(a, _)| *a == xi).map(|(_, b)| *b)
    }

    pub fn inverse(&self, eta: usize) -> Option<usize> {
        self.pairs.iter().find(|(_, b)| *b == eta).map(|(a, _)| *a)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }
}

/// The order-preserving `e: F₁ → F₂` if the two conditions are isomorphic:
/// same depth, same prefixes, and tables that agree after renaming sources.
pub fn isomorphic(p1: &Condition, p2: &Condition, space: &Space) -> Option<OrderBijection> {
    if p1.depth() != p2.depth() || p1.index_count() != p2.index_count() {
        return None;
    }
    let n = p1.depth();
    let f1: Vec<usize> = p1.indices().collect();
    let f2: Vec<usize> = p2.indices().collect();
    let e = OrderBijection::new(&f1, &f2)?;
    for &(a, b) in e.pairs() {
        let own = space.code(a).prefix(n);
        if own != space.code(b).prefix(n) {
            return None;
        }
        let (t1, t2) = (p1.table(a)?, p2.table(b)?);
        for s in BitString::all_of_len(n) {
            if s == own {
                continue;
            }
            match (t1.get(s), t2.get(s)) {
                (Some(v1), Some(v2)) => {
                    if v1.map != v2.map || e.apply(v1.source) != Some(v2.source) {
                        return None;
                    }
                }
                _ => return None,
            }
        }
    }
    Some(e)
}

/// The copy of `p` along `e`: index `e(ξ)` gets the table of ξ with every
/// source η renamed to `e(η)`.
pub fn transport(p: &Condition, e: &OrderBijection) -> Condition {
    let mut tables = BTreeMap::new();
    for &(a, b) in e.pairs() {
        let t = p.table(a).expect("domain of e is F_p");
        let renamed = AssignmentTable::from_fn(t.depth(), own_hole(t), |s| {
            let v = t.get(s).expect("defined");
            Assignment::new(v.map.clone(), e.apply(v.source).expect("source in F_p"))
        });
        tables.insert(b, renamed);
    }
    Condition::from_tables(p.depth(), tables)
}

/// The string at which a table is undefined.
fn own_hole(t: &AssignmentTable) -> BitString {
    t.iter()
        .find(|(_, v)| v.is_none())
        .map(|(s, _)| s)
        .unwrap_or(BitString::EMPTY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::{extends, validate};
    use crate::model::SpaceConfig;
    use rand::SeedableRng;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn space(codes: &[&str]) -> Space {
        let m = codes[0].len();
        Space::new(SpaceConfig::new(2, m, codes.iter().map(|c| bs(c)).collect())).unwrap()
    }

    #[test]
    fn deepen_trivial() {
        let sp = space(&["0000"]);
        let q = deepen(&Condition::trivial(), 2, &sp).unwrap();
        assert_eq!(q.depth(), 2);
        assert_eq!(q.index_count(), 0);
        assert!(matches!(
            deepen(&q, 5, &sp),
            Err(ForcingError::ResolutionExhausted { needed: 5, .. })
        ));
        assert_eq!(deepen(&q, 1, &sp).unwrap(), q);
    }

    #[test]
    fn deepen_fills_above_own_prefix() {
        let sp = space(&["0110"]);
        let p = deepen(&add_index(&Condition::trivial(), 0, &sp).unwrap(), 1, &sp).unwrap();
        let q = deepen(&p, 2, &sp).unwrap();
        // x_0|2 = 01, so 00 is the one fresh string above x_0|1 = 0
        assert_eq!(q.value(0, bs("00")), Some(&Assignment::constant(1, 4, 0)));
        assert_eq!(q.value(0, bs("01")), None);
        assert_eq!(q.value(0, bs("10")), p.value(0, bs("1")));
        assert!(extends(&q, &p, &sp));
        assert_eq!(validate(&q, &sp), Ok(()));
    }

    #[test]
    fn add_index_to_trivial() {
        let sp = space(&["0110", "1000"]);
        let q = add_index(&Condition::trivial(), 1, &sp).unwrap();
        assert_eq!(q.depth(), 0);
        assert_eq!(q.indices().collect::<Vec<_>>(), vec![1]);
        assert_eq!(add_index(&q, 1, &sp).unwrap(), q);
    }

    #[test]
    fn close_codes_need_full_depth() {
        let sp = space(&["0000", "0001"]);
        let p = add_index(&Condition::trivial(), 0, &sp).unwrap();
        let q = add_index(&p, 1, &sp).unwrap();
        assert_eq!(q.depth(), 4);
        assert_eq!(validate(&q, &sp), Ok(()));
        let short = Space::new(SpaceConfig::new(2, 4, vec![bs("0000"), bs("0001")])).unwrap();
        assert!(add_index(&deepen(&p, 3, &short).unwrap(), 1, &short).is_ok());
    }

    #[test]
    fn seeded_filler_produces_valid_conditions() {
        let sp = space(&["0000", "0101", "1010", "1111"]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut p = Condition::trivial();
        for xi in [2, 0, 3, 1] {
            let q = add_index_with(&p, xi, &sp, &mut SeededFiller::new(&mut rng)).unwrap();
            assert_eq!(validate(&q, &sp), Ok(()));
            assert!(extends(&q, &p, &sp));
            p = q;
        }
        let q = deepen_with(&p, 4, &sp, &mut SeededFiller::new(&mut rng)).unwrap();
        assert_eq!(validate(&q, &sp), Ok(()));
        assert!(extends(&q, &p, &sp));
    }

    #[test]
    fn random_balanced_maps_are_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for branches in [4, 6, 8] {
            for _ in 0..50 {
                let m = random_balanced_map(&mut rng, branches);
                assert!(m.is_total_on(branches));
                assert!(m.is_parity_balanced());
            }
        }
    }

    #[test]
    fn isomorphism_of_twins() {
        // 0 and 1 share two bits, as do 2 and 3
        let sp = space(&["0000", "0011", "1100", "1111"]);
        let p = add_index(&Condition::trivial(), 0, &sp).unwrap();
        let p = deepen(&add_index(&p, 2, &sp).unwrap(), 2, &sp).unwrap();
        assert_eq!(isomorphic(&p, &p, &sp).unwrap().is_identity(), true);
        let e = OrderBijection::new(&[0, 2], &[1, 3]).unwrap();
        let p2 = transport(&p, &e);
        assert_eq!(validate(&p2, &sp), Ok(()));
        assert_eq!(isomorphic(&p, &p2, &sp), Some(e));
        let deeper = deepen(&p, 3, &sp).unwrap();
        assert_eq!(isomorphic(&p, &deeper, &sp), None);
        // at depth 3 the prefixes of 0 and 1 differ
        let e3 = OrderBijection::new(&[0, 2], &[1, 3]).unwrap();
        assert_eq!(isomorphic(&deeper, &transport(&deeper, &e3), &sp), None);
    }
}
