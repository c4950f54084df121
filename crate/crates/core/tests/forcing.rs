mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use splitcantor::forcing::sample::{random_condition, random_instance};
use splitcantor::forcing::{
    add_index_with, amalgamate, check_eq1, deepen_with, delta_system, extends, validate,
    Assignment, BranchMap, Condition, SeededFiller,
};
use splitcantor::model::{BitString, Space};

use common::{random_space, rng, twin_space};

/// Validity read straight off the definition, through the public accessors only.
fn valid_by_definition(c: &Condition, space: &Space) -> bool {
    let n = c.depth();
    let f: Vec<usize> = c.indices().collect();
    if n > space.resolution() || f.iter().any(|&x| x >= space.index_count()) {
        return false;
    }
    for (a, &x) in f.iter().enumerate() {
        for &y in &f[a + 1..] {
            if space.code(x).prefix(n) == space.code(y).prefix(n) {
                return false;
            }
        }
    }
    let branches = space.branches();
    f.iter().all(|&xi| {
        if c.table(xi).map(|t| t.depth()) != Some(n) {
            return false;
        }
        BitString::all_of_len(n).all(|s| {
            let value = c.value(xi, s);
            if s == space.code(xi).prefix(n) {
                return value.is_none();
            }
            let Some(a) = value else { return false };
            let table: Vec<usize> = a.map.values().collect();
            if table.len() != branches || table.iter().any(|&v| v == 0 || v > branches) {
                return false;
            }
            if a.source == xi {
                table.iter().all(|&v| v == table[0])
            } else if a.source < xi && f.contains(&a.source) {
                (1..=branches).all(|j| {
                    let odd = (1..=branches).filter(|&l| l % 2 == 1 && table[l - 1] == j).count();
                    let even = (1..=branches).filter(|&l| l % 2 == 0 && table[l - 1] == j).count();
                    odd == even
                })
            } else {
                false
            }
        })
    })
}

fn pick_indices(r: &mut impl Rng, count: usize, take: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..count).collect();
    for i in (1..all.len()).rev() {
        all.swap(i, r.gen_range(0..=i));
    }
    all.truncate(take);
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_conditions_validate(seed in any::<u64>(), take in 0usize..5) {
        let space = random_space(2, 6, 6, seed);
        let mut r = rng(seed);
        let idx = pick_indices(&mut r, 6, take);
        let c = random_condition(&space, &idx, 6, &mut r).unwrap();
        prop_assert!(validate(&c, &space).is_ok());
        prop_assert!(valid_by_definition(&c, &space));
    }

    #[test]
    fn validate_agrees_with_definition(seed in any::<u64>(), edits in 1usize..4) {
        let space = random_space(2, 6, 5, seed ^ 0x5a5a);
        let mut r = rng(seed);
        let idx = pick_indices(&mut r, 6, 3);
        let depth = r.gen_range(0..=5);
        let mut c = match random_condition(&space, &idx, depth, &mut r) {
            Ok(c) => c,
            // a shallow depth may fail to separate; go to full resolution
            Err(_) => random_condition(&space, &idx, 5, &mut r).unwrap(),
        };
        for _ in 0..edits {
            let xi = idx[r.gen_range(0..idx.len())];
            let s = BitString::new(r.gen_range(0..1u64 << c.depth()), c.depth()).unwrap();
            let value = if r.gen_bool(0.2) {
                None
            } else {
                let map = BranchMap::new((0..4).map(|_| r.gen_range(1..=5)));
                Some(Assignment::new(map, idx[r.gen_range(0..idx.len())]))
            };
            c = c.with_value(xi, s, value);
        }
        prop_assert_eq!(validate(&c, &space).is_ok(), valid_by_definition(&c, &space));
    }

    #[test]
    fn extension_is_a_preorder(seed in any::<u64>()) {
        let space = random_space(2, 8, 7, seed);
        let mut r = rng(seed);
        let idx = pick_indices(&mut r, 8, 6);
        let p = random_condition(&space, &idx[..2], 7.min(3 + r.gen_range(0..2)), &mut r)
            .or_else(|_| random_condition(&space, &idx[..2], 7, &mut r))
            .unwrap();
        prop_assert!(extends(&p, &p, &space));
        let mut q = add_index_with(&p, idx[2], &space, &mut SeededFiller::new(&mut r)).unwrap();
        q = deepen_with(&q, q.depth() + 1, &space, &mut SeededFiller::new(&mut r)).unwrap_or(q);
        let mut s = add_index_with(&q, idx[3], &space, &mut SeededFiller::new(&mut r)).unwrap();
        s = add_index_with(&s, idx[4], &space, &mut SeededFiller::new(&mut r)).unwrap();
        for (x, y) in [(&q, &p), (&s, &q), (&s, &p)] {
            prop_assert!(validate(x, &space).is_ok());
            prop_assert!(extends(x, y, &space));
        }
        if s.index_count() > p.index_count() {
            prop_assert!(!extends(&p, &s, &space));
        }
    }

    #[test]
    fn amalgamation_contract(seed in any::<u64>(), root in 0usize..3, k in 1usize..3) {
        let space = twin_space(2, root, k, 3, 7, seed);
        let mut r = rng(seed);
        let roots: Vec<usize> = (0..root).collect();
        let left: Vec<usize> = (root..root + k).collect();
        let right: Vec<usize> = (root + k..root + 2 * k).collect();
        let depth = r.gen_range(2..=3);
        let inst = random_instance(&space, &roots, &left, &right, depth, &mut r).unwrap();
        let q = amalgamate(&inst.p1, &inst.p2, &inst.eps, &inst.deltas, &space).unwrap();
        prop_assert!(validate(&q.condition, &space).is_ok());
        prop_assert!(extends(&q.condition, &inst.p1, &space));
        prop_assert!(extends(&q.condition, &inst.p2, &space));
        prop_assert_eq!(check_eq1(&q.condition, &q.bijection, &inst.eps, &inst.deltas, &space), Ok(()));
    }

    #[test]
    fn delta_system_root_is_literal(sets in prop::collection::vec(prop::collection::btree_set(0usize..8, 0..5), 0..9)) {
        let d = delta_system(&sets);
        prop_assert!(d.exact);
        for (a, &x) in d.members.iter().enumerate() {
            for &y in &d.members[a + 1..] {
                let meet: BTreeSet<usize> = sets[x].intersection(&sets[y]).copied().collect();
                prop_assert_eq!(&meet, &d.root);
            }
        }
        // brute force over sub-families for the largest size
        let mut best = sets.len().min(1);
        for mask in 0u32..1 << sets.len() {
            let members: Vec<usize> = (0..sets.len()).filter(|&i| mask >> i & 1 == 1).collect();
            if members.len() <= best {
                continue;
            }
            let meet = |a: usize, b: usize| -> BTreeSet<usize> { sets[a].intersection(&sets[b]).copied().collect() };
            let root = meet(members[0], members[1]);
            if members.iter().enumerate().all(|(i, &a)| members[i + 1..].iter().all(|&b| meet(a, b) == root)) {
                best = members.len();
            }
        }
        prop_assert_eq!(d.members.len(), best);
    }
}
