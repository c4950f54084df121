//! Space, chain, family, then the requested suites.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use splitcantor::analysis::{
    claim3_bound, claim3_holds, left_separation_entries, obstruction_scan, pair_lemma_constants,
    refute_left_separation, thresholds, verify_pattern, Coordinate, PatternFailure, PatternSpec,
};
use splitcantor::family::{
    canonical_form, check_coherence, derive_family, residue_table, verify_balanced, verify_splitting,
    SplittingFailure, SplittingFamily,
};
use splitcantor::forcing::{build_chain, Chain, Step};
use splitcantor::measure::{
    check_biorthogonal, discrete_witness, integrate, property6_system, AtomicMeasure, SimpleFunction,
};
use splitcantor::model::{BitString, PointId, Space};
use splitcantor::rational::{int, rat, Rational};

use crate::codes::make_space;
use crate::config::{ConfigError, ExperimentConfig, Suite};
use crate::fuzz::fuzz_number_lemma;
use crate::report::{point, rational, ChainSummary, Report, Status, SuiteResult, WITNESS_LIMIT};

/// Stream of the canonical suite's sampler.
const CANONICAL_STREAM: u64 = 2;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Run suites concurrently; results keep the configured order.
    pub parallel: bool,
    /// Record `duration_ms`; reports are then no longer reproducible.
    pub timing: bool,
}

struct Outcome {
    ok: bool,
    summary: Value,
    witnesses: Vec<Value>,
}

impl Outcome {
    fn new(ok: bool, summary: Value, mut witnesses: Vec<Value>) -> Self {
        witnesses.truncate(WITNESS_LIMIT);
        Outcome { ok, summary, witnesses }
    }
}

pub fn run_experiment(config: &ExperimentConfig, options: RunOptions) -> Result<Report, ConfigError> {
    let space = make_space(config)?;
    let built = build_chain(&space, &config.script, config.seed);
    let mut chain_summary = ChainSummary {
        status: Status::Fail,
        steps: config.script.len(),
        complete: false,
        certificates: 0,
        error: None,
    };
    let family = match &built {
        Err(e) => {
            chain_summary.error = Some(e.to_string());
            None
        }
        Ok(chain) => {
            chain_summary.complete = chain.is_complete(&space);
            chain_summary.certificates = chain.certificates.len();
            let derived = chain
                .audit(&space)
                .map_err(|e| format!("audit: {e:?}"))
                .and_then(|()| derive_family(&space, chain).map_err(|e| e.to_string()))
                .and_then(|f| {
                    check_coherence(&f, chain)
                        .map(|()| f)
                        .map_err(|c| format!("coherence: {c:?}"))
                });
            match derived {
                Ok(f) => {
                    chain_summary.status = Status::Pass;
                    Some(f)
                }
                Err(e) => {
                    chain_summary.error = Some(e);
                    None
                }
            }
        }
    };
    let chain = built.ok();
    let run = |suite: Suite| run_suite(suite, config, &space, chain.as_ref(), family.as_ref(), options.timing);
    let suites = if options.parallel {
        config.suites.par_iter().map(|&s| run(s)).collect()
    } else {
        config.suites.iter().map(|&s| run(s)).collect()
    };
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        config: config.clone(),
        chain: chain_summary,
        suites,
    })
}

fn run_suite(
    suite: Suite,
    config: &ExperimentConfig,
    space: &Space,
    chain: Option<&Chain>,
    family: Option<&SplittingFamily>,
    timing: bool,
) -> SuiteResult {
    let start = Instant::now();
    let outcome = match (suite, family, chain) {
        (Suite::NumberLemmaFuzz, _, _) => Some(fuzz_suite(config)),
        (_, Some(f), Some(c)) => Some(match suite {
            Suite::Splitting => splitting_suite(f),
            Suite::Balanced => balanced_suite(f),
            Suite::Biorthogonal => biorthogonal_suite(f),
            Suite::Discrete => discrete_suite(f),
            Suite::Residue => residue_suite(f),
            Suite::Patterns => patterns_suite(f, c),
            Suite::Canonical => canonical_suite(f, config),
            Suite::Obstruction => obstruction_suite(f, space),
            Suite::NumberLemmaFuzz => unreachable!(),
        }),
        _ => None,
    };
    let duration_ms = timing.then(|| start.elapsed().as_millis() as u64);
    match outcome {
        Some(o) => SuiteResult {
            name: suite.name().to_string(),
            status: Status::from_ok(o.ok),
            summary: o.summary,
            witnesses: o.witnesses,
            duration_ms,
        },
        None => SuiteResult {
            name: suite.name().to_string(),
            status: Status::Skipped,
            summary: json!({ "reason": "no family" }),
            witnesses: Vec::new(),
            duration_ms,
        },
    }
}

fn splitting_suite(family: &SplittingFamily) -> Outcome {
    let space = family.space();
    let report = verify_splitting(family);
    let witnesses = report
        .failures
        .iter()
        .map(|f| match f {
            SplittingFailure::Pointed { index, branch } => {
                json!({ "clause": 1, "index": index, "branch": branch })
            }
            SplittingFailure::Overlap { index, first, second, point: y } => json!({
                "clause": 2, "index": index, "first": first, "second": second, "point": point(space, *y)
            }),
            SplittingFailure::Uncovered { index, point: y } => {
                json!({ "clause": 3, "index": index, "point": point(space, *y) })
            }
            SplittingFailure::Inherit { lower, upper, branch, first, second } => json!({
                "clause": 4, "lower": lower, "upper": upper, "branch": branch,
                "first": point(space, *first), "second": point(space, *second)
            }),
            SplittingFailure::Locally { index, point: y } => {
                json!({ "clause": 5, "index": index, "point": point(space, *y) })
            }
        })
        .collect();
    let summary = json!({
        "failures": report.failures.len(),
        "inherit_depth": report.inherit_depth,
        "local_depth": report.local_depth,
    });
    Outcome::new(report.is_ok(), summary, witnesses)
}

fn balanced_suite(family: &SplittingFamily) -> Outcome {
    let failures = verify_balanced(family);
    let n = family.space().index_count();
    let witnesses = failures
        .iter()
        .map(|b| json!({ "index": b.index, "other": b.other, "j": b.j, "odd": b.odd, "even": b.even }))
        .collect();
    let summary = json!({ "pairs": n * n.saturating_sub(1), "failures": failures.len() });
    Outcome::new(failures.is_empty(), summary, witnesses)
}

fn biorthogonal_suite(family: &SplittingFamily) -> Outcome {
    let c = property6_system(family);
    let result = check_biorthogonal(&c);
    let witnesses = match &result {
        Ok(()) => Vec::new(),
        Err(w) => vec![json!({ "i": w.i, "j": w.j, "value": rational(&w.value) })],
    };
    let summary = json!({ "pairs": c.len() * c.len() });
    Outcome::new(result.is_ok(), summary, witnesses)
}

fn discrete_suite(family: &SplittingFamily) -> Outcome {
    let (_, report) = discrete_witness(family);
    let witnesses = report.failures.iter().map(|(x, e)| json!([x, e])).collect();
    let summary = json!({
        "checked": report.checked,
        "inside": report.inside,
        "outside": report.outside,
        "failures": report.failures.len(),
    });
    Outcome::new(report.failures.is_empty(), summary, witnesses)
}

fn residue_suite(family: &SplittingFamily) -> Outcome {
    let table = residue_table(family);
    let failures: Vec<Value> = table
        .iter()
        .enumerate()
        .flat_map(|(alpha, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, ok)| !**ok)
                .map(move |(k, _)| json!({ "alpha": alpha, "k": k }))
        })
        .collect();
    let summary = json!({
        "checked": table.iter().map(Vec::len).sum::<usize>(),
        "failures": failures.len(),
    });
    Outcome::new(failures.is_empty(), summary, failures)
}

/// Replays every realized pattern from the derived family, then runs the
/// refuter on the tuples built from the fixed points of each ε row.
fn patterns_suite(family: &SplittingFamily, chain: &Chain) -> Outcome {
    let space = family.space();
    let mut witnesses = Vec::new();
    let (mut verified, mut refuted) = (0, 0);
    for cert in &chain.certificates {
        let Step::RealizePattern(req) = &chain.steps[cert.step].step else {
            continue;
        };
        let spec = match PatternSpec::new(
            space.half(),
            vec![req.alpha_block.clone(), req.beta_block.clone()],
            req.eps.clone(),
            req.delta.clone(),
        ) {
            Ok(s) => s,
            Err(e) => {
                witnesses.push(json!({ "step": cert.step, "spec": e.to_string() }));
                continue;
            }
        };
        match verify_pattern(family, &spec, 0, 1) {
            Ok(()) => verified += 1,
            Err(failures) => witnesses.extend(failures.iter().map(|f| match f {
                PatternFailure::Blocks { alpha, beta } => {
                    json!({ "step": cert.step, "blocks": [alpha, beta] })
                }
                PatternFailure::Residue { i, point: y } => {
                    json!({ "step": cert.step, "row": i, "residue": point(space, *y) })
                }
                PatternFailure::Transfer { i, l } => {
                    json!({ "step": cert.step, "row": i, "transfer": l })
                }
            })),
        }
        let coords: Vec<Coordinate> = spec
            .eps()
            .iter()
            .enumerate()
            .flat_map(|(position, row)| {
                (1..=row.branches())
                    .filter(move |&l| row.apply(l) == l)
                    .map(move |branch| Coordinate { position, branch })
            })
            .collect();
        let entries = left_separation_entries(family, spec.blocks(), &coords);
        match refute_left_separation(&entries) {
            Ok(Some((0, 1))) => refuted += 1,
            other => witnesses.push(json!({ "step": cert.step, "refuter": format!("{other:?}") })),
        }
    }
    let patterns = chain.certificates.len();
    let summary = json!({ "patterns": patterns, "verified": verified, "refuted": refuted });
    Outcome::new(verified == patterns && refuted == patterns, summary, witnesses)
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

/// A random combination of V-sets and family sets cut by V-sets.
pub fn random_function(family: &SplittingFamily, rng: &mut ChaCha8Rng) -> SimpleFunction {
    let space = family.space();
    let mut f = SimpleFunction::zero(space.len());
    for _ in 0..rng.gen_range(1..6) {
        let len = rng.gen_range(0..=space.resolution());
        let s = BitString::new(rng.gen_range(0..1u64 << len), len).expect("fits");
        let v = space.v_set(&s).expect("within resolution");
        let set = if rng.gen_bool(0.7) {
            let xi = rng.gen_range(0..space.index_count());
            family.set(xi, rng.gen_range(1..=space.branches())).intersection(&v)
        } else {
            v
        };
        f.add_term(small(rng), set);
    }
    f
}

/// Up to five atoms, mostly on split fibres.
pub fn random_measure(space: &Space, rng: &mut ChaCha8Rng) -> AtomicMeasure {
    AtomicMeasure::from_atoms((0..rng.gen_range(1..6)).map(|_| {
        let y = if rng.gen_bool(0.7) {
            space.split_point(rng.gen_range(0..space.index_count()), rng.gen_range(1..=space.branches()))
        } else {
            PointId(rng.gen_range(0..space.len()))
        };
        (y, small(rng))
    }))
}

fn canonical_suite(family: &SplittingFamily, config: &ExperimentConfig) -> Outcome {
    let space = family.space();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(CANONICAL_STREAM);
    let mut witnesses = Vec::new();
    let mut terms = 0;
    for sample in 0..config.canonical_samples {
        let f = random_function(family, &mut rng);
        let mu = random_measure(space, &mut rng);
        let eps = rat(1, rng.gen_range(1..=100));
        let form = match canonical_form(&f, &mu, &eps, family) {
            Ok(form) => form,
            Err(e) => {
                witnesses.push(json!({ "sample": sample, "error": e.to_string() }));
                continue;
            }
        };
        terms += form.terms.len();
        if form.to_function(family).values() != f.values() {
            witnesses.push(json!({ "sample": sample, "error": "reconstruction differs" }));
        }
        let tail = form.tail(&mu, family);
        if tail > eps {
            witnesses.push(json!({
                "sample": sample, "tail": rational(&tail), "epsilon": rational(&eps)
            }));
        }
        // the integral splits over g, the fibres and the rest of each V-set
        let mut split = integrate(&form.g_function(family), &mu);
        for t in &form.terms {
            let v = space.v_set(&t.prefix).expect("within resolution");
            for (l, q) in t.coefficients.iter().enumerate() {
                split += q * mu.measure(&family.set(t.index, l + 1).intersection(&v));
            }
        }
        if split != integrate(&f, &mu) {
            witnesses.push(json!({ "sample": sample, "error": "integral does not split" }));
        }
    }
    let summary = json!({ "samples": config.canonical_samples, "terms": terms, "failures": witnesses.len() });
    Outcome::new(witnesses.is_empty(), summary, witnesses)
}

/// Constants for this n, then a scan of the Property-6 system with the
/// `(x_ξ, 2n)` atom removed, which must land every diagonal in class b).
fn obstruction_suite(family: &SplittingFamily, space: &Space) -> Outcome {
    let n = space.half();
    let t = thresholds(n);
    let (theta, rho, bound) = pair_lemma_constants(n);
    let scale = int((2 * n * n * (2 * n - 2)) as i64);
    let bound_ok = bound == rat(-92, 100) / scale;
    let mut c = property6_system(family);
    for (xi, pair) in c.pairs.iter_mut().enumerate() {
        pair.1.add(space.split_point(xi, space.branches()), int(-1));
    }
    let mut witnesses = Vec::new();
    let (a, b, cc) = match obstruction_scan(&c, family, n) {
        Ok(report) => {
            for hit in &report.b {
                if !hit.value.is_zero() {
                    witnesses.push(json!({ "class": "b", "alpha": hit.alpha, "value": rational(&hit.value) }));
                }
            }
            (report.a.len(), report.b.len(), report.c.len())
        }
        Err(e) => {
            witnesses.push(json!({ "error": e.to_string() }));
            (0, 0, 0)
        }
    };
    let holds = claim3_holds(n);
    let summary = json!({
        "thresholds": { "a": rational(&t.a), "b": rational(&t.b), "c": rational(&t.c) },
        "claim3_bound": rational(&claim3_bound(n)),
        "claim3_holds": holds,
        "pair_lemma": { "theta": rational(&theta), "rho": rational(&rho), "bound": rational(&bound) },
        "truncated_scan": { "a": a, "b": b, "c": cc },
    });
    let ok = holds && bound_ok && b == space.index_count() && witnesses.is_empty();
    Outcome::new(ok, summary, witnesses)
}

fn fuzz_suite(config: &ExperimentConfig) -> Outcome {
    let s = fuzz_number_lemma(config.fuzz.instances, config.seed, config.fuzz.n_min, config.fuzz.n_max, true);
    let witnesses = s.failures.iter().map(|f| serde_json::to_value(f).expect("serializes")).collect();
    let summary = json!({
        "instances": s.instances,
        "discarded": s.discarded,
        "failures": s.failures.len(),
        "distribution": s.distribution,
    });
    Outcome::new(s.failures.is_empty(), summary, witnesses)
}
