use num_traits::Signed;
use thiserror::Error;

use crate::family::SplittingFamily;
use crate::measure::BiorthCandidate;
use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("n = {0} but the thresholds need n ≥ 2")]
    TooFew(usize),
    #[error("μ_{index} has {support} atoms, at most {limit} allowed")]
    Support { index: usize, support: usize, limit: usize },
    #[error("f_{0} lives on a different space")]
    Universe(usize),
}

/// The three cut-offs of the obstruction lemma for a given n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// `0.01 / (2n²(2n−2))`; class a) is `|∫ f_α dμ_β|` above it.
    pub a: Rational,
    /// `0.99`; class b) is a diagonal below it.
    pub b: Rational,
    /// `−0.89 / (2n²(2n−2))`; class c) is `∫ f_β dμ_α` below it.
    pub c: Rational,
}

fn scale(n: usize) -> Rational {
    let n = n as i64;
    int(2 * n * n * (2 * n - 2))
}

pub fn thresholds(n: usize) -> Thresholds {
    Thresholds {
        a: rat(1, 100) / scale(n),
        b: rat(99, 100),
        c: rat(-89, 100) / scale(n),
    }
}

/// `(2n − 1)·0.96/(2n) − 0.03`, the diagonal bound when no branch dominates.
pub fn claim3_bound(n: usize) -> Rational {
    let n = n as i64;
    int(2 * n - 1) * rat(96, 100) / int(2 * n) - rat(3, 100)
}

pub fn claim3_holds(n: usize) -> bool {
    claim3_bound(n) < rat(99, 100)
}

/// `(θ, ρ) = (0.96/(2n), 0.04/(2n)²)` as fed to the pair lemma, with the
/// resulting bound `−0.92/(2n²(2n−2))`.
pub fn pair_lemma_constants(n: usize) -> (Rational, Rational, Rational) {
    let two_n = int(2 * n as i64);
    let theta = rat(96, 100) / &two_n;
    let rho = rat(4, 100) / (&two_n * &two_n);
    let bound = super::number_lemma_bound(&theta, &rho, n);
    (theta, rho, bound)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionHit {
    pub alpha: usize,
    pub beta: usize,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub thresholds: Thresholds,
    /// α < β with `|∫ f_α dμ_β| > a`.
    pub a: Vec<ObstructionHit>,
    /// α with `∫ f_α dμ_α < b`; `beta` repeats α.
    pub b: Vec<ObstructionHit>,
    /// α < β with `∫ f_β dμ_α < c`.
    pub c: Vec<ObstructionHit>,
}

impl ObstructionReport {
    pub fn fires(&self) -> bool {
        !(self.a.is_empty() && self.b.is_empty() && self.c.is_empty())
    }
}

/// Every pairwise integral of the candidate, sorted into classes a, b, c.
pub fn obstruction_scan(
    c: &BiorthCandidate,
    family: &SplittingFamily,
    n: usize,
) -> Result<ObstructionReport, ObstructionError> {
    if n < 2 {
        return Err(ObstructionError::TooFew(n));
    }
    let limit = 2 * n - 1;
    for (index, (f, mu)) in c.pairs.iter().enumerate() {
        if f.universe() != family.space().len() {
            return Err(ObstructionError::Universe(index));
        }
        if mu.support_size() > limit {
            return Err(ObstructionError::Support {
                index,
                support: mu.support_size(),
                limit,
            });
        }
    }
    let t = thresholds(n);
    let mut report = ObstructionReport {
        a: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
        thresholds: t.clone(),
    };
    for alpha in 0..c.len() {
        let value = c.pairing(alpha, alpha);
        if value < t.b {
            report.b.push(ObstructionHit { alpha, beta: alpha, value });
        }
        for beta in alpha + 1..c.len() {
            let value = c.pairing(beta, alpha);
            if value.abs() > t.a {
                report.a.push(ObstructionHit { alpha, beta, value });
            }
            let value = c.pairing(alpha, beta);
            if value < t.c {
                report.c.push(ObstructionHit { alpha, beta, value });
            }
        }
    }
    Ok(report)
}
