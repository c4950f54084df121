mod common;

use splitcantor::family::{
    check_coherence, derive_family, residue_table, verify_balanced, verify_splitting, SplittingFamily,
};
use splitcantor::forcing::{build_chain, Fill, Step};
use splitcantor::measure::{check_biorthogonal, discrete_witness, property6_system};
use splitcantor::model::Space;

use common::random_space;

fn complete(space: &Space, seed: u64) -> SplittingFamily {
    let script = [Step::Deepen { depth: 2, fill: Fill::Seeded }, Step::Complete { fill: Fill::Seeded }];
    let chain = build_chain(space, &script, seed).unwrap();
    assert!(chain.is_complete(space));
    chain.audit(space).unwrap();
    let family = derive_family(space, &chain).unwrap();
    check_coherence(&family, &chain).unwrap();
    family
}

#[test]
fn seeded_families_satisfy_every_clause() {
    for (half, seed) in [(2, 1), (2, 2), (3, 3)] {
        let space = random_space(half, 10, 7, seed);
        let family = complete(&space, seed);
        let report = verify_splitting(&family);
        assert!(report.is_ok(), "{:?}", report.failures);
        assert!(verify_balanced(&family).is_empty());
        assert_eq!(check_biorthogonal(&property6_system(&family)), Ok(()));
        let (_, discrete) = discrete_witness(&family);
        assert!(discrete.failures.is_empty());
        assert_eq!(discrete.checked, 100);
        assert!(residue_table(&family).iter().flatten().all(|&ok| ok));
    }
}

#[test]
fn default_fill_is_balanced_too() {
    let space = random_space(2, 6, 6, 9);
    let chain = build_chain(&space, &[Step::Complete { fill: Fill::Default }], 0).unwrap();
    let family = derive_family(&space, &chain).unwrap();
    assert!(verify_splitting(&family).is_ok());
    assert!(verify_balanced(&family).is_empty());
}

#[test]
fn incomplete_chain_is_refused() {
    let space = random_space(2, 6, 6, 4);
    let chain = build_chain(&space, &[Step::Deepen { depth: 3, fill: Fill::Default }], 0).unwrap();
    assert!(derive_family(&space, &chain).is_err());
}
