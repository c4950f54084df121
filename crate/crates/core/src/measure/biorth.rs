use num_traits::{One, Signed, Zero};

use crate::family::SplittingFamily;
use crate::rational::{int, Rational};

use super::simple::{integrate, AtomicMeasure, SimpleFunction};

/// Pairs `(f_i, μ_i)` in index order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiorthCandidate {
    pub pairs: Vec<(SimpleFunction, AtomicMeasure)>,
}

impl BiorthCandidate {
    pub fn new(pairs: Vec<(SimpleFunction, AtomicMeasure)>) -> Self {
        BiorthCandidate { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `μ_i(f_j)`.
    pub fn pairing(&self, i: usize, j: usize) -> Rational {
        integrate(&self.pairs[j].0, &self.pairs[i].1)
    }
}

/// `μ_i(f_j) = value` violates the checked property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingWitness {
    pub i: usize,
    pub j: usize,
    pub value: Rational,
}

/// `f_ξ = χ_{A_{ξ,2n}}` and `μ_ξ = Σ_{k=1}^{n} (δ_{(x_ξ,2k)} − δ_{(x_ξ,2k−1)})`.
pub fn property6_system(family: &SplittingFamily) -> BiorthCandidate {
    let space = family.space();
    let top = space.branches();
    let pairs = (0..space.index_count())
        .map(|xi| {
            let f = SimpleFunction::indicator(family.set(xi, top).clone());
            let mu = AtomicMeasure::from_atoms((1..=space.half()).flat_map(|k| {
                [
                    (space.split_point(xi, 2 * k), int(1)),
                    (space.split_point(xi, 2 * k - 1), int(-1)),
                ]
            }));
            (f, mu)
        })
        .collect();
    BiorthCandidate { pairs }
}

/// First `(i, j)` in row order with `μ_i(f_j) ≠ [i = j]`.
pub fn check_biorthogonal(c: &BiorthCandidate) -> Result<(), PairingWitness> {
    for i in 0..c.len() {
        for j in 0..c.len() {
            let value = c.pairing(i, j);
            let expected = if i == j { Rational::one() } else { Rational::zero() };
            if value != expected {
                return Err(PairingWitness { i, j, value });
            }
        }
    }
    Ok(())
}

/// Diagonal 1, `μ_i(f_j) = 0` for j < i and `≥ 0` for j > i.
pub fn check_semibiorthogonal(c: &BiorthCandidate) -> Result<(), PairingWitness> {
    for i in 0..c.len() {
        for j in 0..c.len() {
            let value = c.pairing(i, j);
            let ok = match j.cmp(&i) {
                std::cmp::Ordering::Equal => value.is_one(),
                std::cmp::Ordering::Less => value.is_zero(),
                std::cmp::Ordering::Greater => !value.is_negative(),
            };
            if !ok {
                return Err(PairingWitness { i, j, value });
            }
        }
    }
    Ok(())
}

/// Biorthogonal with every functional of the form `δ_x − δ_y`.
pub fn check_nice(c: &BiorthCandidate) -> bool {
    c.pairs.iter().all(|(_, mu)| {
        let weights: Vec<&Rational> = mu.atoms().map(|(_, w)| w).collect();
        weights.len() == 2
            && weights.iter().any(|w| w.is_one())
            && weights.iter().any(|w| **w == -Rational::one())
    }) && check_biorthogonal(c).is_ok()
}
