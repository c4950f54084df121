mod common;

use proptest::prelude::*;
use rand::Rng;
use splitcantor::analysis::{
    build_eps, left_separation_entries, number_lemma_pair, obstruction_scan, pairings_for,
    parity_pairing, refute_left_separation, verify_pattern, Coordinate, PatternFailure, PatternSpec,
};
use splitcantor::family::derive_family;
use splitcantor::forcing::{build_chain, BranchMap, Fill, Step};
use splitcantor::measure::{property6_system, AtomicMeasure, BiorthCandidate};
use splitcantor::rational::{int, rat, Rational};

use common::{rng, twin_space};

/// Every opposite-parity pair below the bound, in lexicographic order.
fn all_pairs(theta: &Rational, rho: &Rational, r: &[Rational]) -> Vec<(usize, usize)> {
    let n = (r.len() / 2) as i64;
    let bound = (int(2 * n) * rho - theta) / int(n * (2 * n - 2));
    let mut out = Vec::new();
    for i in 1..=r.len() {
        for j in i + 1..=r.len() {
            if (i + j) % 2 == 1 && r[i - 1].clone() + &r[j - 1] < bound {
                out.push((i, j));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn pair_lemma_matches_enumeration(
        n in 2usize..5,
        rho_num in 1i64..40,
        gap in 1i64..40,
        seed in any::<u64>(),
    ) {
        let rho = rat(rho_num, 40);
        let theta = rat(rho_num + gap, 40);
        let mut r = rng(seed);
        let len = 2 * n;
        let big = r.gen_range(0..len);
        let zero = (big + 1 + r.gen_range(0..len - 1)) % len;
        let mut values: Vec<Rational> = (0..len).map(|_| rat(r.gen_range(-200..200), 40)).collect();
        values[big] = theta.clone() + rat(r.gen_range(1..80), 40);
        values[zero] = int(0);
        // one free slot absorbs the sum
        let free = (0..len).find(|&i| i != big && i != zero).unwrap();
        values[free] = int(0);
        let rest: Rational = values.iter().sum();
        values[free] = -rest + rat(r.gen_range(-(rho_num - 1)..rho_num), 40);
        let pairs = all_pairs(&theta, &rho, &values);
        prop_assert!(!pairs.is_empty());
        prop_assert_eq!(number_lemma_pair(&theta, &rho, &values), Ok(pairs[0]));
    }

    #[test]
    fn parity_pairing_properties(half in 2usize..6, raw in prop::collection::vec(1usize..12, 0..6)) {
        let required: Vec<usize> = raw.into_iter().filter(|&j| j <= 2 * half).collect();
        let mut distinct = required.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let Ok(p) = parity_pairing(&required, half) else {
            prop_assert!(distinct.len() > half);
            return Ok(());
        };
        prop_assert_eq!(p.set.len(), half);
        prop_assert!(distinct.iter().all(|j| p.set.contains(j)));
        let mut images: Vec<usize> = p.set.iter().map(|&l| p.sigma(l).unwrap()).collect();
        for (&l, &s) in p.set.iter().zip(&images) {
            prop_assert!(!p.set.contains(&s));
            prop_assert_ne!(l % 2, s % 2);
        }
        images.sort_unstable();
        images.dedup();
        prop_assert_eq!(images.len(), half);
        let eps = build_eps(&[p.clone()]);
        let row = &eps[0];
        for j in 1..=2 * half {
            let odd = (1..=2 * half).filter(|&l| l % 2 == 1 && row.apply(l) == j).count();
            let even = (1..=2 * half).filter(|&l| l % 2 == 0 && row.apply(l) == j).count();
            prop_assert_eq!(odd, even);
            let pre: Vec<usize> = (1..=2 * half).filter(|&l| row.apply(l) == j).collect();
            if p.set.contains(&j) {
                let mut expect = vec![j, p.sigma(j).unwrap()];
                expect.sort_unstable();
                prop_assert_eq!(pre, expect);
            } else {
                prop_assert!(pre.is_empty());
            }
        }
    }
}

#[test]
fn identical_pairings_give_identical_rows() {
    let p = parity_pairing(&[3], 3).unwrap();
    let eps = build_eps(&[p.clone(), p]);
    assert_eq!(eps[0], eps[1]);
}

/// Blocks `{1, 2}` and `{3, 4}` after root `{0}`, realized with ε from
/// pairings and then checked from the derived family.
#[test]
fn realized_pattern_refutes_left_separation() {
    for seed in 0..6u64 {
        let half = 2 + (seed as usize % 2);
        let space = twin_space(half, 1, 2, 3, 8, seed);
        let mut r = rng(seed);
        let coords: Vec<Coordinate> = (0..half)
            .map(|_| Coordinate { position: r.gen_range(0..2), branch: r.gen_range(1..=2 * half) })
            .collect();
        let eps = build_eps(&pairings_for(&coords, 2, half).unwrap());
        let delta = vec![2 * half, r.gen_range(1..=2 * half)];
        let spec = PatternSpec::new(half, vec![vec![1, 2], vec![3, 4]], eps, delta).unwrap();
        let script = [
            Step::AddIndex { index: 0, fill: Fill::Seeded },
            Step::RealizePattern(spec.request(0, 1)),
            Step::Complete { fill: Fill::Seeded },
        ];
        let chain = build_chain(&space, &script, seed).unwrap();
        let family = derive_family(&space, &chain).unwrap();
        assert_eq!(verify_pattern(&family, &spec, 0, 1), Ok(()));
        let entries = left_separation_entries(&family, spec.blocks(), &coords);
        assert_eq!(refute_left_separation(&entries), Ok(Some((0, 1))));
        // the pattern runs one way only
        assert!(matches!(
            verify_pattern(&family, &spec, 1, 0),
            Err(f) if f == vec![PatternFailure::Blocks { alpha: 1, beta: 0 }]
        ));
    }
}

#[test]
fn unrealized_blocks_usually_fail() {
    let space = twin_space(2, 1, 2, 3, 8, 11);
    let chain = build_chain(&space, &[Step::Complete { fill: Fill::Default }], 0).unwrap();
    let family = derive_family(&space, &chain).unwrap();
    let spec = PatternSpec::new(
        2,
        vec![vec![1, 2], vec![3, 4]],
        vec![BranchMap::new([1, 2, 2, 1]); 2],
        vec![4, 4],
    )
    .unwrap();
    // default fill assigns constant 1 everywhere
    let failures = verify_pattern(&family, &spec, 0, 1).unwrap_err();
    assert!(failures.iter().any(|f| matches!(f, PatternFailure::Residue { i: 0, .. })));
    assert!(failures.iter().any(|f| matches!(f, PatternFailure::Transfer { i: 1, .. })));
}

#[test]
fn spec_rejects_bad_input() {
    let row = BranchMap::new([1, 2, 2, 1]);
    assert!(PatternSpec::new(2, vec![vec![1], vec![1]], vec![row.clone()], vec![1]).is_err());
    assert!(PatternSpec::new(2, vec![vec![1], vec![2]], vec![BranchMap::new([1, 3, 2, 2])], vec![1]).is_err());
    assert!(PatternSpec::new(2, vec![vec![1], vec![2]], vec![row], vec![5]).is_err());
}

#[test]
fn dropping_the_top_atom_fires_class_b() {
    let space = twin_space(2, 1, 2, 3, 8, 5);
    let chain = build_chain(&space, &[Step::Complete { fill: Fill::Seeded }], 5).unwrap();
    let family = derive_family(&space, &chain).unwrap();
    let full = property6_system(&family);
    assert!(obstruction_scan(&full, &family, 2).is_err());
    let mut c = full.clone();
    for (xi, pair) in c.pairs.iter_mut().enumerate() {
        pair.1.add(space.split_point(xi, 4), int(-1));
    }
    let report = obstruction_scan(&c, &family, 2).unwrap();
    assert_eq!(report.b.len(), space.index_count());
    assert!(report.b.iter().all(|h| h.value == int(0)));
    assert!(obstruction_scan(&BiorthCandidate::default(), &family, 2).unwrap().b.is_empty());
}

/// With `ε(1) = ε(2) = 2n` between the realized blocks, dropping atom 1
/// leaves `∫ f_α dμ_β = 1`, far above the a) threshold.
#[test]
fn realized_pattern_fires_some_class() {
    let space = twin_space(2, 0, 1, 2, 7, 3);
    let spec = PatternSpec::new(2, vec![vec![0], vec![1]], vec![BranchMap::new([4, 4, 3, 3])], vec![4]).unwrap();
    let script = [Step::RealizePattern(spec.request(0, 1)), Step::Complete { fill: Fill::Seeded }];
    let chain = build_chain(&space, &script, 3).unwrap();
    let family = derive_family(&space, &chain).unwrap();
    assert_eq!(verify_pattern(&family, &spec, 0, 1), Ok(()));
    let mut c = property6_system(&family);
    for (xi, pair) in c.pairs.iter_mut().enumerate() {
        pair.1.add(space.split_point(xi, 1), int(1));
    }
    assert!(c.pairs.iter().all(|(_, mu): &(_, AtomicMeasure)| mu.support_size() == 3));
    let report = obstruction_scan(&c, &family, 2).unwrap();
    assert!(report.fires());
    assert_eq!(report.a.len(), 1);
    assert_eq!(report.a[0].value, int(1));
}
