//! Random instances of the pair lemma, each checked against a full scan.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use splitcantor::analysis::number_lemma_pair;
use splitcantor::rational::{int, rat, to_text, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzFailure {
    pub instance: usize,
    pub n: usize,
    pub theta: String,
    pub rho: String,
    pub r: Vec<String>,
    pub returned: Option<(usize, usize)>,
    pub expected: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub instances: usize,
    /// Draws whose sum missed `(−ρ, ρ)` and were redrawn.
    pub discarded: usize,
    pub failures: Vec<FuzzFailure>,
    /// Returned pair, as `"i,j"`, to count.
    pub distribution: BTreeMap<String, usize>,
}

struct Instance {
    n: usize,
    theta: Rational,
    rho: Rational,
    r: Vec<Rational>,
}

fn small(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=12))
}

/// Draws until the sum lands in `(−ρ, ρ)`; returns the instance and the
/// number of rejected draws.
fn generate(rng: &mut ChaCha8Rng, n_min: usize, n_max: usize) -> (Instance, usize) {
    let n = rng.gen_range(n_min..=n_max);
    let rho = rat(rng.gen_range(1..=20), rng.gen_range(1..=40));
    let theta = &rho + rat(rng.gen_range(1..=30), rng.gen_range(1..=20));
    let len = 2 * n;
    let mut discarded = 0;
    loop {
        let big = rng.gen_range(0..len);
        let zero = (big + rng.gen_range(1..len)) % len;
        let free = (0..len).find(|&i| i != big && i != zero).expect("2n ≥ 4");
        let mut r: Vec<Rational> = (0..len).map(|_| small(rng, 24)).collect();
        r[big] = &theta + rat(rng.gen_range(1..=24), rng.gen_range(1..=12));
        r[zero] = int(0);
        r[free] = int(0);
        let rest: Rational = r.iter().sum();
        // noise in (−2ρ, 2ρ): about half the draws keep |Σ| < ρ
        let noise = &rho * rat(rng.gen_range(-99..=99), 50);
        r[free] = noise - rest;
        let sum: Rational = r.iter().sum();
        if sum < rho && sum > -rho.clone() {
            return (Instance { n, theta, rho, r }, discarded);
        }
        discarded += 1;
    }
}

/// Lexicographically first `(i, j)`, `i < j` of opposite parity, with
/// `r_i + r_j < (2nρ − θ)/(n(2n − 2))`, by scanning all ordered pairs.
pub fn enumerate_first(theta: &Rational, rho: &Rational, r: &[Rational]) -> Option<(usize, usize)> {
    let n = (r.len() / 2) as i64;
    let bound = (int(2 * n) * rho - theta) / int(n * (2 * n - 2));
    let mut found = None;
    for i in (1..=r.len()).rev() {
        for j in (1..=r.len()).rev() {
            if i < j && (i + j) % 2 == 1 && r[i - 1].clone() + &r[j - 1] < bound {
                found = Some((i, j));
            }
        }
    }
    found
}

fn run_one(seed: u64, instance: usize, n_min: usize, n_max: usize) -> (usize, Option<(usize, usize)>, Option<FuzzFailure>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(instance as u64);
    let (inst, discarded) = generate(&mut rng, n_min, n_max);
    let returned = number_lemma_pair(&inst.theta, &inst.rho, &inst.r).ok();
    let expected = enumerate_first(&inst.theta, &inst.rho, &inst.r);
    let failure = (returned.is_none() || returned != expected).then(|| FuzzFailure {
        instance,
        n: inst.n,
        theta: to_text(&inst.theta),
        rho: to_text(&inst.rho),
        r: inst.r.iter().map(to_text).collect(),
        returned,
        expected,
    });
    (discarded, returned, failure)
}

/// Instance i uses stream i of the seed, so the summary does not depend on
/// whether instances run in parallel.
pub fn fuzz_number_lemma(count: usize, seed: u64, n_min: usize, n_max: usize, parallel: bool) -> FuzzSummary {
    let results: Vec<_> = if parallel {
        (0..count)
            .into_par_iter()
            .map(|i| run_one(seed, i, n_min, n_max))
            .collect()
    } else {
        (0..count).map(|i| run_one(seed, i, n_min, n_max)).collect()
    };
    let mut summary = FuzzSummary {
        instances: count,
        discarded: 0,
        failures: Vec::new(),
        distribution: BTreeMap::new(),
    };
    for (discarded, returned, failure) in results {
        summary.discarded += discarded;
        if let Some((i, j)) = returned {
            *summary.distribution.entry(format!("{i},{j}")).or_default() += 1;
        }
        summary.failures.extend(failure);
    }
    summary
}
