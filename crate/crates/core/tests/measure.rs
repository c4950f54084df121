mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use splitcantor::family::{canonical_form, derive_family, SplittingFamily};
use splitcantor::forcing::{build_chain, Fill, Step};
use splitcantor::measure::{integrate, AtomicMeasure, SimpleFunction};
use splitcantor::model::{BitString, PointId};
use splitcantor::rational::{rat, Rational};

use common::{random_space, rng};

fn family(seed: u64) -> SplittingFamily {
    let space = random_space(2, 6, 6, seed);
    let chain = build_chain(&space, &[Step::Complete { fill: Fill::Seeded }], seed).unwrap();
    derive_family(&space, &chain).unwrap()
}

fn small(r: &mut ChaCha8Rng) -> Rational {
    rat(r.gen_range(-9..=9), r.gen_range(1..=6))
}

/// Sums of family sets cut by V-sets, plus V-sets alone.
fn random_function(fam: &SplittingFamily, r: &mut ChaCha8Rng) -> SimpleFunction {
    let space = fam.space();
    let mut f = SimpleFunction::zero(space.len());
    for _ in 0..r.gen_range(1..5) {
        let len = r.gen_range(0..=space.resolution());
        let s = BitString::new(r.gen_range(0..1u64 << len), len).unwrap();
        let v = space.v_set(&s).unwrap();
        let set = if r.gen_bool(0.6) {
            let xi = r.gen_range(0..space.index_count());
            fam.set(xi, r.gen_range(1..=space.branches())).intersection(&v)
        } else {
            v
        };
        f.add_term(small(r), set);
    }
    f
}

fn random_measure(len: usize, r: &mut ChaCha8Rng) -> AtomicMeasure {
    AtomicMeasure::from_atoms((0..r.gen_range(0..6)).map(|_| (PointId(r.gen_range(0..len)), small(r))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn integration_is_bilinear(seed in any::<u64>()) {
        let fam = family(seed % 8);
        let mut r = rng(seed);
        let len = fam.space().len();
        let (f, g) = (random_function(&fam, &mut r), random_function(&fam, &mut r));
        let (mu, nu) = (random_measure(len, &mut r), random_measure(len, &mut r));
        let (a, b) = (small(&mut r), small(&mut r));
        let combo = f.scaled(&a).plus(&g.scaled(&b));
        prop_assert_eq!(integrate(&combo, &mu), a.clone() * integrate(&f, &mu) + b.clone() * integrate(&g, &mu));
        let mix = mu.scaled(&a).plus(&nu.scaled(&b));
        prop_assert_eq!(integrate(&f, &mix), a * integrate(&f, &mu) + b * integrate(&f, &nu));
        // direct sum over atoms
        let direct: Rational = mu.atoms().map(|(y, w)| f.eval(y) * w).sum();
        prop_assert_eq!(integrate(&f, &mu), direct);
    }

    #[test]
    fn canonical_form_splits_the_integral(seed in any::<u64>()) {
        let fam = family(seed % 8);
        let space = fam.space();
        let mut r = rng(seed);
        let f = random_function(&fam, &mut r);
        let mu = random_measure(space.len(), &mut r);
        let eps = rat(1, r.gen_range(1..50));
        let form = canonical_form(&f, &mu, &eps, &fam).unwrap();
        let rebuilt = form.to_function(&fam);
        prop_assert_eq!(rebuilt.values(), f.values());
        prop_assert!(form.tail(&mu, &fam) <= eps);

        let mut on_fibre = Rational::zero();
        let mut off_fibre = Rational::zero();
        for t in &form.terms {
            let v = space.v_set(&t.prefix).unwrap();
            let fibre = space.fiber(t.index);
            for (l, q) in t.coefficients.iter().enumerate() {
                let cell = fam.set(t.index, l + 1).intersection(&v);
                on_fibre += q * mu.measure(&cell.intersection(&fibre));
                off_fibre += q * mu.measure(&cell.difference(&fibre));
            }
        }
        let g = integrate(&form.g_function(&fam), &mu);
        prop_assert_eq!(integrate(&f, &mu), g + on_fibre + off_fibre);
    }
}
