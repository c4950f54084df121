use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::Space;

use super::amalgamate::{amalgamate, separating_depth, AmalgamationError};
use super::branch::BranchMap;
use super::condition::{extends, validate, Assignment, AssignmentTable, Condition, Violation};
use super::density::{
    add_index_with, deepen_with, transport, DefaultFiller, Filler, OrderBijection, SeededFiller,
};
use super::ForcingError;

/// How fresh values are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fill {
    /// `(constant 1, ξ)`.
    Default,
    /// Drawn from the chain's seeded generator.
    Seeded,
}

/// Request to force `R_{β_i} ⊆ A_{α_i, δ(i)}` and `(x_{α_i}, l) ∈ A_{β_i, ε(i, l)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternRequest {
    pub alpha_block: Vec<usize>,
    pub beta_block: Vec<usize>,
    /// Row i is `ε(i, ·)`.
    pub eps: Vec<BranchMap>,
    /// `δ(i)` as a branch in `[2n]`.
    pub delta: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Deepen { depth: usize, fill: Fill },
    AddIndex { index: usize, fill: Fill },
    RealizePattern(PatternRequest),
    /// Adds every missing index, then deepens to the resolution.
    Complete { fill: Fill },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = |fill: &Fill| if *fill == Fill::Seeded { " random" } else { "" };
        match self {
            Step::Deepen { depth, fill } => write!(f, "DEEPEN {depth}{}", tag(fill)),
            Step::AddIndex { index, fill } => write!(f, "ADD {index}{}", tag(fill)),
            Step::Complete { fill } => write!(f, "COMPLETE{}", tag(fill)),
            Step::RealizePattern(r) => {
                let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                let eps: Vec<String> = r
                    .eps
                    .iter()
                    .map(|m| list(&m.values().collect::<Vec<_>>()))
                    .collect();
                write!(
                    f,
                    "PATTERN {} {} {} {}",
                    list(&r.alpha_block),
                    list(&r.beta_block),
                    eps.join("/"),
                    list(&r.delta)
                )
            }
        }
    }
}

impl std::str::FromStr for Step {
    type Err = String;

    /// Inverse of `Display`: `DEEPEN k [random]`, `ADD ξ [random]`,
    /// `COMPLETE [random]` or `PATTERN a,b c,d e1/e2 d1,d2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let list = |w: &str| -> Result<Vec<usize>, String> {
            w.split(',')
                .map(|v| v.parse::<usize>().map_err(|e| format!("bad number {v:?}: {e}")))
                .collect()
        };
        let fill = |rest: &[&str]| match rest {
            [] => Ok(Fill::Default),
            ["random"] => Ok(Fill::Seeded),
            _ => Err(format!("unexpected trailing words in {s:?}")),
        };
        let number = |w: &str| w.parse::<usize>().map_err(|e| format!("bad number {w:?}: {e}"));
        match words.as_slice() {
            ["DEEPEN", k, rest @ ..] => Ok(Step::Deepen { depth: number(k)?, fill: fill(rest)? }),
            ["ADD", xi, rest @ ..] => Ok(Step::AddIndex { index: number(xi)?, fill: fill(rest)? }),
            ["COMPLETE", rest @ ..] => Ok(Step::Complete { fill: fill(rest)? }),
            ["PATTERN", a, b, eps, delta] => Ok(Step::RealizePattern(PatternRequest {
                alpha_block: list(a)?,
                beta_block: list(b)?,
                eps: eps.split('/').map(str::parse).collect::<Result<_, _>>()?,
                delta: list(delta)?,
            })),
            _ => Err(format!("unrecognised step {s:?}")),
        }
    }
}

/// The values a realized pattern forced for one pair `(α_i, β_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCertificate {
    pub alpha: usize,
    pub beta: usize,
    pub delta: usize,
    pub eps: BranchMap,
    pub depth: usize,
    /// `f_α(x_β|depth)`.
    pub alpha_value: Assignment,
    /// `f_β(x_α|depth)`.
    pub beta_value: Assignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternCertificate {
    pub step: usize,
    pub pairs: Vec<PairCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("blocks, ε rows and δ values must all have the same nonzero length")]
    Shape,
    #[error("index {index} is not below {count}")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("blocks must be strictly increasing and disjoint")]
    Blocks,
    #[error("amalgamation hypothesis F_p < E_α < E_β fails")]
    BlockOrder,
    #[error("amalgamation hypothesis x_α|n = x_β|n fails for ({alpha}, {beta}) at depth {depth}")]
    PrefixDisagreement {
        alpha: usize,
        beta: usize,
        depth: usize,
    },
    #[error("δ value {0} is not a branch")]
    DeltaOutOfRange(usize),
    #[error(transparent)]
    Forcing(#[from] ForcingError),
    #[error(transparent)]
    Amalgamation(#[from] AmalgamationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("step {step}: {source}")]
    Forcing { step: usize, source: ForcingError },
    #[error("step {step}: unrealizable pattern: {source}")]
    Pattern { step: usize, source: PatternError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub step: Step,
    pub condition: Condition,
}

/// A descending sequence of conditions, one per script step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub seed: u64,
    pub steps: Vec<ChainStep>,
    pub certificates: Vec<PatternCertificate>,
}

/// A failed chain audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditFailure {
    Invalid { step: usize, violations: Vec<Violation> },
    NotDescending { step: usize },
}

impl Chain {
    /// The last condition, or the trivial one for an empty script.
    pub fn finest(&self) -> Condition {
        self.steps
            .last()
            .map(|s| s.condition.clone())
            .unwrap_or_else(Condition::trivial)
    }

    pub fn is_complete(&self, space: &Space) -> bool {
        self.steps
            .last()
            .is_some_and(|s| s.condition.is_complete(space))
    }

    pub fn script(&self) -> Vec<Step> {
        self.steps.iter().map(|s| s.step.clone()).collect()
    }

    /// Every condition is valid and extends its predecessor.
    pub fn audit(&self, space: &Space) -> Result<(), AuditFailure> {
        let mut prev = Condition::trivial();
        for (step, s) in self.steps.iter().enumerate() {
            validate(&s.condition, space)
                .map_err(|violations| AuditFailure::Invalid { step, violations })?;
            if !extends(&s.condition, &prev, space) {
                return Err(AuditFailure::NotDescending { step });
            }
            prev = s.condition.clone();
        }
        Ok(())
    }
}

/// Runs `script` from the trivial condition. Deterministic in `(space, script, seed)`.
pub fn build_chain(space: &Space, script: &[Step], seed: u64) -> Result<Chain, ChainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = Condition::trivial();
    let mut steps = Vec::with_capacity(script.len());
    let mut certificates = Vec::new();
    for (i, step) in script.iter().enumerate() {
        let forcing = |source| ChainError::Forcing { step: i, source };
        let next = match step {
            Step::Deepen { depth, fill } => {
                with_filler(*fill, &mut rng, |f| deepen_with(&current, *depth, space, f))
                    .map_err(forcing)?
            }
            Step::AddIndex { index, fill } => {
                with_filler(*fill, &mut rng, |f| add_index_with(&current, *index, space, f))
                    .map_err(forcing)?
            }
            Step::Complete { fill } => with_filler(*fill, &mut rng, |f| {
                let mut c = current.clone();
                for xi in 0..space.index_count() {
                    c = add_index_with(&c, xi, space, f)?;
                }
                deepen_with(&c, space.resolution(), space, f)
            })
            .map_err(forcing)?,
            Step::RealizePattern(req) => {
                let mut filler = SeededFiller::new(&mut rng);
                let (q, pairs) = realize_pattern(&current, req, space, &mut filler)
                    .map_err(|source| ChainError::Pattern { step: i, source })?;
                certificates.push(PatternCertificate { step: i, pairs });
                q
            }
        };
        steps.push(ChainStep {
            step: step.clone(),
            condition: next.clone(),
        });
        current = next;
    }
    Ok(Chain {
        seed,
        steps,
        certificates,
    })
}

fn with_filler<T>(
    fill: Fill,
    rng: &mut ChaCha8Rng,
    run: impl FnOnce(&mut dyn Filler) -> T,
) -> T {
    match fill {
        Fill::Default => run(&mut DefaultFiller),
        Fill::Seeded => run(&mut SeededFiller::new(rng)),
    }
}

/// Extends `p` so that the pattern holds in every family derived below the result.
///
/// `p` plays the root: E_α is added on top of it (after separating its
/// prefixes), the copy on E_β is obtained by transport, and the two are
/// amalgamated with the requested ε and δ.
pub fn realize_pattern(
    p: &Condition,
    req: &PatternRequest,
    space: &Space,
    filler: &mut dyn Filler,
) -> Result<(Condition, Vec<PairCertificate>), PatternError> {
    let k = req.alpha_block.len();
    if k == 0 || req.beta_block.len() != k || req.eps.len() != k || req.delta.len() != k {
        return Err(PatternError::Shape);
    }
    let count = space.index_count();
    if let Some(&index) = req
        .alpha_block
        .iter()
        .chain(&req.beta_block)
        .find(|&&x| x >= count)
    {
        return Err(PatternError::IndexOutOfRange { index, count });
    }
    let increasing = |b: &[usize]| b.windows(2).all(|w| w[0] < w[1]);
    if !increasing(&req.alpha_block) || !increasing(&req.beta_block) {
        return Err(PatternError::Blocks);
    }
    if req.alpha_block.iter().any(|a| req.beta_block.contains(a)) {
        return Err(PatternError::Blocks);
    }
    let root_max = p.indices().last();
    if root_max.is_some_and(|r| r >= req.alpha_block[0])
        || req.alpha_block[k - 1] >= req.beta_block[0]
    {
        return Err(PatternError::BlockOrder);
    }
    if let Some(&d) = req.delta.iter().find(|&&d| !(1..=space.branches()).contains(&d)) {
        return Err(PatternError::DeltaOutOfRange(d));
    }

    let mut codes: Vec<_> = p.indices().map(|xi| space.code(xi)).collect();
    codes.extend(req.alpha_block.iter().map(|&a| space.code(a)));
    let depth = separating_depth(&codes, p.depth());
    for (&alpha, &beta) in req.alpha_block.iter().zip(&req.beta_block) {
        if depth > space.resolution()
            || space.code(alpha).prefix(depth) != space.code(beta).prefix(depth)
        {
            return Err(PatternError::PrefixDisagreement { alpha, beta, depth });
        }
    }
    let root = deepen_with(p, depth, space, filler)?;

    let mut tables: BTreeMap<usize, Arc<AssignmentTable>> = root.shared_tables().clone();
    let branches = space.branches();
    for &alpha in &req.alpha_block {
        let lower: Vec<usize> = tables.keys().copied().filter(|&x| x < alpha).collect();
        let t = AssignmentTable::from_fn(depth, space.code(alpha).prefix(depth), |s| {
            filler.fill(alpha, s, &lower, branches)
        });
        tables.insert(alpha, Arc::new(t));
    }
    let p1 = Condition::from_shared(depth, tables);
    let mut domain: Vec<usize> = root.indices().collect();
    let mut range = domain.clone();
    domain.extend(&req.alpha_block);
    range.extend(&req.beta_block);
    let e = OrderBijection::new(&domain, &range).expect("equal lengths");
    let p2 = transport(&p1, &e);

    let eps: BTreeMap<usize, BranchMap> = req
        .alpha_block
        .iter()
        .copied()
        .zip(req.eps.iter().cloned())
        .collect();
    let deltas: BTreeMap<usize, BranchMap> = req
        .alpha_block
        .iter()
        .zip(&req.delta)
        .map(|(&a, &d)| (a, BranchMap::constant(d, branches)))
        .collect();
    let q = amalgamate(&p1, &p2, &eps, &deltas, space)?.condition;
    let nq = q.depth();
    let pairs = req
        .alpha_block
        .iter()
        .zip(&req.beta_block)
        .enumerate()
        .map(|(i, (&alpha, &beta))| PairCertificate {
            alpha,
            beta,
            delta: req.delta[i],
            eps: req.eps[i].clone(),
            depth: nq,
            alpha_value: q
                .value(alpha, space.code(beta).prefix(nq))
                .expect("defined")
                .clone(),
            beta_value: q
                .value(beta, space.code(alpha).prefix(nq))
                .expect("defined")
                .clone(),
        })
        .collect();
    Ok((q, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BitString, SpaceConfig};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn steps_round_trip() {
        for text in [
            "DEEPEN 3",
            "ADD 4 random",
            "COMPLETE",
            "COMPLETE random",
            "PATTERN 1,2 3,4 1,2,2,1/4,4,3,3 4,1",
        ] {
            let step: Step = text.parse().unwrap();
            assert_eq!(step.to_string(), text);
        }
        assert!("DEEPEN".parse::<Step>().is_err());
        assert!("ADD 1 quickly".parse::<Step>().is_err());
    }

    #[test]
    fn three_step_chain() {
        let sp = Space::new(SpaceConfig::new(2, 3, vec![bs("010")])).unwrap();
        let script = [
            Step::AddIndex { index: 0, fill: Fill::Default },
            Step::Deepen { depth: 3, fill: Fill::Default },
            Step::Complete { fill: Fill::Default },
        ];
        let chain = build_chain(&sp, &script, 0).unwrap();
        assert_eq!(chain.steps.len(), 3);
        assert!(chain.is_complete(&sp));
        assert_eq!(chain.audit(&sp), Ok(()));
    }

    #[test]
    fn seeded_chains_are_deterministic() {
        let codes = ["0000", "0110", "1001", "1111"].iter().map(|c| bs(c)).collect();
        let sp = Space::new(SpaceConfig::new(3, 4, codes)).unwrap();
        let script = [
            Step::AddIndex { index: 1, fill: Fill::Seeded },
            Step::Deepen { depth: 2, fill: Fill::Seeded },
            Step::Complete { fill: Fill::Seeded },
        ];
        let a = build_chain(&sp, &script, 42).unwrap();
        let b = build_chain(&sp, &script, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.audit(&sp), Ok(()));
        assert!(a.is_complete(&sp));
    }

    #[test]
    fn pattern_on_twins() {
        // 0 is the root, 1 and 2 are twins agreeing on three bits
        let codes = ["0000", "1010", "1011"].iter().map(|c| bs(c)).collect();
        let sp = Space::new(SpaceConfig::new(2, 4, codes)).unwrap();
        let req = PatternRequest {
            alpha_block: vec![1],
            beta_block: vec![2],
            eps: vec!["1,1,3,3".parse().unwrap()],
            delta: vec![4],
        };
        let script = [
            Step::AddIndex { index: 0, fill: Fill::Seeded },
            Step::RealizePattern(req),
            Step::Complete { fill: Fill::Seeded },
        ];
        let chain = build_chain(&sp, &script, 3).unwrap();
        assert_eq!(chain.audit(&sp), Ok(()));
        let cert = &chain.certificates[0].pairs[0];
        assert_eq!(cert.depth, 4);
        assert_eq!(cert.alpha_value, Assignment::constant(4, 4, 1));
        assert_eq!(cert.beta_value, Assignment::new("1,1,3,3".parse().unwrap(), 1));
        let fin = chain.finest();
        assert_eq!(fin.value(1, bs("1011")), Some(&cert.alpha_value));
    }

    #[test]
    fn pattern_without_prefix_agreement_fails() {
        let codes = ["0000", "1010", "1011"].iter().map(|c| bs(c)).collect();
        let sp = Space::new(SpaceConfig::new(2, 4, codes)).unwrap();
        let req = PatternRequest {
            alpha_block: vec![1],
            beta_block: vec![2],
            eps: vec!["1,1,3,3".parse().unwrap()],
            delta: vec![4],
        };
        let script = [
            Step::AddIndex { index: 0, fill: Fill::Default },
            Step::Deepen { depth: 4, fill: Fill::Default },
            Step::RealizePattern(req.clone()),
        ];
        let err = build_chain(&sp, &script, 0).unwrap_err();
        assert!(matches!(
            err,
            ChainError::Pattern { step: 2, source: PatternError::PrefixDisagreement { .. } }
        ));
        let swapped = PatternRequest {
            alpha_block: vec![2],
            beta_block: vec![1],
            ..req
        };
        let err = build_chain(&sp, &[Step::RealizePattern(swapped)], 0).unwrap_err();
        assert!(matches!(err, ChainError::Pattern { source: PatternError::BlockOrder, .. }));
    }
}
