use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::measure::{AtomicMeasure, SimpleFunction};
use crate::model::{BitString, PointId};
use crate::rational::{int, Rational};

use super::residue::SubalgebraChain;
use super::verify::verify_splitting;
use super::SplittingFamily;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("ε must be positive")]
    EpsilonNotPositive,
    #[error("function and family live on different point sets")]
    Universe,
    #[error("the family does not partition the space for index {0}")]
    NotPartition(usize),
    #[error("function is not measurable over the algebra generated by the family")]
    NotMeasurable,
    #[error("no depth m ≤ M peels index {0}")]
    NoDepth(usize),
}

/// `Σ_{l<2n} q_l χ_{A_{ξ,l} ∩ V_s}` with `s = x_ξ|m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalTerm {
    pub index: usize,
    pub prefix: BitString,
    /// `q_1, …, q_{2n-1}`.
    pub coefficients: Vec<Rational>,
}

/// `f = g + Σ_i Σ_{l<2n} q_{i,l} χ_{A_{ξ_i,l} ∩ V_{s_i}}`, with g a
/// combination of disjoint V-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Maximal V-nodes on which g is a nonzero constant.
    pub g: Vec<(BitString, Rational)>,
    /// In peeling order (largest index first).
    pub terms: Vec<CanonicalTerm>,
}

impl CanonicalForm {
    pub fn g_function(&self, family: &SplittingFamily) -> SimpleFunction {
        let space = family.space();
        let terms = self
            .g
            .iter()
            .map(|(s, c)| (c.clone(), space.v_set(s).expect("node within resolution")))
            .collect();
        SimpleFunction::from_terms(space.len(), terms)
    }

    /// The decomposition as one simple function.
    pub fn to_function(&self, family: &SplittingFamily) -> SimpleFunction {
        let space = family.space();
        let mut f = self.g_function(family);
        for t in &self.terms {
            let v = space.v_set(&t.prefix).expect("prefix within resolution");
            for (l, q) in t.coefficients.iter().enumerate() {
                f.add_term(q.clone(), family.set(t.index, l + 1).intersection(&v));
            }
        }
        f
    }

    /// `Σ_i max_l |q_{i,l}| · |μ|(V_{s_i} \ R_{ξ_i})`.
    pub fn tail(&self, mu: &AtomicMeasure, family: &SplittingFamily) -> Rational {
        let space = family.space();
        self.terms
            .iter()
            .map(|t| {
                let outside = space
                    .v_set(&t.prefix)
                    .expect("prefix within resolution")
                    .difference(&space.fiber(t.index));
                let max = t
                    .coefficients
                    .iter()
                    .map(|q| q.abs())
                    .max()
                    .unwrap_or_else(Rational::zero);
                max * mu.variation_on(&outside)
            })
            .sum()
    }
}

/// Peels indices from the largest down. At each ξ where the remainder h is
/// not `𝒜_ξ`-measurable, takes the least m such that h is constant on every
/// `A_{ξ,j} ∩ V_{x_ξ|m}`, the part of h off that V-set plus its `2n`-th
/// value on it is `𝒜_ξ`-measurable, and the new tail term is at most
/// `ε/2^i` for the i-th term.
pub fn canonical_form(
    f: &SimpleFunction,
    mu: &AtomicMeasure,
    epsilon: &Rational,
    family: &SplittingFamily,
) -> Result<CanonicalForm, CanonicalError> {
    if !epsilon.is_positive() {
        return Err(CanonicalError::EpsilonNotPositive);
    }
    let space = family.space();
    if f.universe() != space.len() {
        return Err(CanonicalError::Universe);
    }
    let report = verify_splitting(family);
    if let Some(bad) = report.failures.iter().find_map(|x| match x {
        super::SplittingFailure::Overlap { index, .. }
        | super::SplittingFailure::Uncovered { index, .. } => Some(*index),
        _ => None,
    }) {
        return Err(CanonicalError::NotPartition(bad));
    }

    let branches = space.branches();
    let labels: Vec<Vec<u8>> = (0..space.index_count()).map(|xi| family.labels(xi)).collect();
    let chain = SubalgebraChain::new(family);
    let mut h = f.values();
    if !chain
        .atoms(space.index_count())
        .is_measurable(|y| h[y.0].clone())
    {
        return Err(CanonicalError::NotMeasurable);
    }

    let mut terms = Vec::new();
    let mut budget = epsilon.clone();
    for xi in (0..space.index_count()).rev() {
        let atoms = chain.atoms(xi);
        if atoms.is_measurable(|y| h[y.0].clone()) {
            continue;
        }
        budget /= int(2);
        let code = space.code(xi);
        let mut chosen = None;
        for m in 0..=space.resolution() {
            let s = code.prefix(m);
            let range = space.v_range(&s).expect("m ≤ M");
            // (i) h constant on each A_{ξ,j} ∩ V_s
            let mut value: Vec<Option<Rational>> = vec![None; branches + 1];
            let constant = range.clone().all(|y| {
                let slot = &mut value[labels[xi][y] as usize];
                match slot {
                    Some(v) => *v == h[y],
                    None => {
                        *slot = Some(h[y].clone());
                        true
                    }
                }
            });
            if !constant {
                continue;
            }
            let top = value[branches].clone().expect("(x_ξ, 2n) ∈ V_s");
            // (ii) the remainder is 𝒜_ξ-measurable
            let measurable = atoms.is_measurable(|y| {
                if range.contains(&y.0) {
                    top.clone()
                } else {
                    h[y.0].clone()
                }
            });
            if !measurable {
                continue;
            }
            let coefficients: Vec<Rational> = (1..branches)
                .map(|l| value[l].clone().expect("(x_ξ, l) ∈ V_s") - &top)
                .collect();
            // (iii) tail budget
            let max = coefficients
                .iter()
                .map(|q| q.abs())
                .max()
                .unwrap_or_else(Rational::zero);
            let outside: Rational = range
                .clone()
                .filter(|&y| !matches!(space.point(PointId(y)), crate::model::Point::Split { index, .. } if index == xi))
                .map(|y| mu.weight(PointId(y)).abs())
                .sum();
            if max * outside > budget {
                continue;
            }
            chosen = Some((s, range, top, coefficients));
            break;
        }
        let Some((prefix, range, top, coefficients)) = chosen else {
            return Err(CanonicalError::NoDepth(xi));
        };
        for y in range {
            h[y] = top.clone();
        }
        terms.push(CanonicalTerm {
            index: xi,
            prefix,
            coefficients,
        });
    }

    Ok(CanonicalForm {
        g: compress(family, &h),
        terms,
    })
}

/// Maximal V-nodes on which `values` is constant, dropping zero nodes.
/// `values` must be constant on every fibre.
fn compress(family: &SplittingFamily, values: &[Rational]) -> Vec<(BitString, Rational)> {
    let space = family.space();
    let mut out = Vec::new();
    let mut stack = vec![BitString::EMPTY];
    while let Some(s) = stack.pop() {
        let range = space.v_range(&s).expect("within resolution");
        let first = &values[range.start];
        if values[range.clone()].iter().all(|v| v == first) {
            if !first.is_zero() {
                out.push((s, first.clone()));
            }
        } else {
            assert!(s.len() < space.resolution(), "values split a fibre");
            stack.push(s.push(true));
            stack.push(s.push(false));
        }
    }
    out
}
