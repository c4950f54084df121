//! Splitting families: derivation from a chain, the axiom checks, the
//! residue lemma and the canonical form of simple functions.

mod canonical;
mod residue;
mod verify;

pub use canonical::{canonical_form, CanonicalError, CanonicalForm, CanonicalTerm};
pub use residue::{in_subalgebra, residue_in_subalgebra, residue_table, SubalgebraChain};
pub use verify::{
    verify_balanced, verify_splitting, BalanceFailure, SplittingFailure, SplittingReport,
};

use thiserror::Error;

use crate::forcing::{validate, Chain, Condition, Violation};
use crate::model::{ClopenSet, Point, PointId, Space};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("chain is not complete: its finest condition must contain every index at full depth")]
    IncompleteChain,
    #[error("finest condition is invalid: {}", .0[0])]
    InvalidCondition(Vec<Violation>),
    #[error("expected {expected} sets per index for {indices} indices")]
    Shape { expected: usize, indices: usize },
}

/// The sets `A_{ξ,j}` over a finite space, stored explicitly so that
/// arbitrary (including invalid) families can be represented and checked.
#[derive(Clone, Debug)]
pub struct SplittingFamily {
    space: Space,
    /// `sets[ξ][j-1] = A_{ξ,j}`.
    sets: Vec<Vec<ClopenSet>>,
    source: Option<Condition>,
}

impl SplittingFamily {
    /// A family given set by set; `sets[ξ]` lists `A_{ξ,1}, …, A_{ξ,2n}`.
    pub fn from_sets(space: &Space, sets: Vec<Vec<ClopenSet>>) -> Result<Self, FamilyError> {
        let shape = FamilyError::Shape {
            expected: space.branches(),
            indices: space.index_count(),
        };
        if sets.len() != space.index_count()
            || sets
                .iter()
                .any(|row| row.len() != space.branches() || row.iter().any(|s| s.universe() != space.len()))
        {
            return Err(shape);
        }
        Ok(SplittingFamily {
            space: space.clone(),
            sets,
            source: None,
        })
    }

    /// A family from per-index labels (`labels[ξ][y]` is the j with y ∈ A_{ξ,j}).
    pub fn from_labels(space: &Space, labels: &[Vec<u8>]) -> Result<Self, FamilyError> {
        let sets = labels
            .iter()
            .map(|lab| {
                let mut row = vec![space.none(); space.branches()];
                for (y, &j) in lab.iter().enumerate() {
                    if let Some(set) = (j as usize).checked_sub(1).and_then(|k| row.get_mut(k)) {
                        set.insert(PointId(y));
                    }
                }
                row
            })
            .collect();
        SplittingFamily::from_sets(space, sets)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// The condition the family was read from, if derived.
    pub fn source(&self) -> Option<&Condition> {
        self.source.as_ref()
    }

    /// `A_{ξ,j}`, `j` 1-based.
    pub fn set(&self, index: usize, j: usize) -> &ClopenSet {
        &self.sets[index][j - 1]
    }

    pub fn sets(&self, index: usize) -> &[ClopenSet] {
        &self.sets[index]
    }

    pub fn member(&self, y: PointId, index: usize, j: usize) -> bool {
        self.sets[index][j - 1].contains(y)
    }

    /// Smallest j with `y ∈ A_{ξ,j}`.
    pub fn label(&self, index: usize, y: PointId) -> Option<usize> {
        self.sets[index]
            .iter()
            .position(|s| s.contains(y))
            .map(|k| k + 1)
    }

    /// Bit `j-1` is set iff `y ∈ A_{ξ,j}`.
    pub fn mask(&self, index: usize, y: PointId) -> u64 {
        self.sets[index]
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(y))
            .fold(0, |m, (k, _)| m | 1 << k)
    }

    /// [`label`](Self::label) at every point, 0 where undefined.
    pub fn labels(&self, index: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.space.len()];
        for (k, s) in self.sets[index].iter().enumerate().rev() {
            for y in s.iter() {
                out[y.0] = (k + 1) as u8;
            }
        }
        out
    }
}

/// The family determined by a complete chain.
pub fn derive_family(space: &Space, chain: &Chain) -> Result<SplittingFamily, FamilyError> {
    derive_from_condition(space, &chain.finest())
}

/// Reads every label off a complete condition, for ξ in increasing order:
/// on `R_ξ` the branch, elsewhere `φ(1)` when `f_ξ(code) = (φ, ξ)` and
/// `φ(label_η)` when the source is an earlier η.
pub fn derive_from_condition(space: &Space, c: &Condition) -> Result<SplittingFamily, FamilyError> {
    if !c.is_complete(space) {
        return Err(FamilyError::IncompleteChain);
    }
    validate(c, space).map_err(FamilyError::InvalidCondition)?;
    let mut labels: Vec<Vec<u8>> = Vec::with_capacity(space.index_count());
    for xi in 0..space.index_count() {
        let table = c.table(xi).expect("complete");
        let lab: Vec<u8> = space
            .ids()
            .map(|y| match space.point(y) {
                Point::Split { index, branch } if index == xi => branch as u8,
                _ => {
                    let a = table.get(space.code_of(y)).expect("valid complete condition");
                    let j = if a.source == xi {
                        a.map.apply(1)
                    } else {
                        a.map.apply(labels[a.source][y.0] as usize)
                    };
                    j as u8
                }
            })
            .collect();
        labels.push(lab);
    }
    let mut family = SplittingFamily::from_labels(space, &labels)?;
    family.source = Some(c.clone());
    Ok(family)
}

/// A point where a coarser condition determines a label that the family disagrees with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceFailure {
    pub step: usize,
    pub index: usize,
    pub point: PointId,
}

/// Every condition of the chain agrees with the family wherever it
/// determines membership.
pub fn check_coherence(family: &SplittingFamily, chain: &Chain) -> Result<(), CoherenceFailure> {
    let space = family.space();
    let labels: Vec<Vec<u8>> = (0..space.index_count()).map(|xi| family.labels(xi)).collect();
    for (step, s) in chain.steps.iter().enumerate() {
        let p = &s.condition;
        let n = p.depth();
        for xi in p.indices() {
            for y in space.ids() {
                let Some(a) = p.value(xi, space.code_of(y).prefix(n)) else {
                    continue;
                };
                let expected = if a.source == xi {
                    a.map.apply(1)
                } else {
                    a.map.apply(labels[a.source][y.0] as usize)
                };
                if labels[xi][y.0] as usize != expected {
                    return Err(CoherenceFailure {
                        step,
                        index: xi,
                        point: y,
                    });
                }
            }
        }
    }
    Ok(())
}
