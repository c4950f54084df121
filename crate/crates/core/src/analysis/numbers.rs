use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberLemmaError {
    #[error("need an even number of values, got {0}")]
    OddLength(usize),
    #[error("n = {0} but the lemma needs n ≥ 2")]
    TooFew(usize),
    #[error("ρ must be positive")]
    RhoNotPositive,
    #[error("θ must exceed ρ")]
    ThetaNotAboveRho,
    #[error("|Σ r| must be below ρ")]
    SumTooLarge,
    #[error("no value exceeds θ")]
    NoLargeValue,
    #[error("no value is zero")]
    NoZero,
    #[error("no opposite-parity pair is below the bound")]
    NoPair,
}

/// `(2nρ − θ) / (n(2n − 2))`.
pub fn number_lemma_bound(theta: &Rational, rho: &Rational, n: usize) -> Rational {
    let n = int(n as i64);
    let two_n = &n * int(2);
    (&two_n * rho - theta) / (&n * (two_n - int(2)))
}

/// First pair `(i, j)`, 1-based with `i < j` and `i + j` odd, such that
/// `r_i + r_j` is below [`number_lemma_bound`].
pub fn number_lemma_pair(
    theta: &Rational,
    rho: &Rational,
    r: &[Rational],
) -> Result<(usize, usize), NumberLemmaError> {
    if r.len() % 2 != 0 {
        return Err(NumberLemmaError::OddLength(r.len()));
    }
    let n = r.len() / 2;
    if n < 2 {
        return Err(NumberLemmaError::TooFew(n));
    }
    if !rho.is_positive() {
        return Err(NumberLemmaError::RhoNotPositive);
    }
    if theta <= rho {
        return Err(NumberLemmaError::ThetaNotAboveRho);
    }
    if &r.iter().sum::<Rational>().abs() >= rho {
        return Err(NumberLemmaError::SumTooLarge);
    }
    if !r.iter().any(|v| v > theta) {
        return Err(NumberLemmaError::NoLargeValue);
    }
    if !r.iter().any(Zero::is_zero) {
        return Err(NumberLemmaError::NoZero);
    }
    let bound = number_lemma_bound(theta, rho, n);
    for i in 1..=r.len() {
        for j in (i + 1..=r.len()).step_by(2) {
            if r[i - 1].clone() + &r[j - 1] < bound {
                return Ok((i, j));
            }
        }
    }
    Err(NumberLemmaError::NoPair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn worked_example() {
        let r = [rat(6, 5), int(0), rat(-7, 10), rat(-2, 5)];
        assert_eq!(number_lemma_bound(&int(1), &rat(1, 2), 2), rat(1, 4));
        assert_eq!(number_lemma_pair(&int(1), &rat(1, 2), &r), Ok((2, 3)));
    }

    #[test]
    fn preconditions() {
        let theta = int(1);
        let rho = rat(1, 2);
        // Σ r = ρ exactly
        let r = [rat(6, 5), int(0), rat(-7, 10), int(0)];
        assert_eq!(number_lemma_pair(&theta, &rho, &r), Err(NumberLemmaError::SumTooLarge));
        let r = [int(2), int(-2)];
        assert_eq!(number_lemma_pair(&theta, &rho, &r), Err(NumberLemmaError::TooFew(1)));
        let r = [int(2), int(0), int(-2)];
        assert_eq!(number_lemma_pair(&theta, &rho, &r), Err(NumberLemmaError::OddLength(3)));
        let r = [rat(6, 5), int(0), rat(-7, 10), rat(-2, 5)];
        assert_eq!(number_lemma_pair(&rho, &theta, &r), Err(NumberLemmaError::ThetaNotAboveRho));
        assert_eq!(number_lemma_pair(&theta, &int(0), &r), Err(NumberLemmaError::RhoNotPositive));
        let r = [rat(1, 2), int(0), rat(-1, 4), rat(-1, 4)];
        assert_eq!(number_lemma_pair(&theta, &rho, &r), Err(NumberLemmaError::NoLargeValue));
        let r = [rat(3, 2), rat(-1, 2), rat(-1, 2), rat(-1, 2)];
        assert_eq!(number_lemma_pair(&theta, &rho, &r), Err(NumberLemmaError::NoZero));
    }
}
