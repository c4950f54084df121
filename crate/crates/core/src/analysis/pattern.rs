use thiserror::Error;

use crate::family::SplittingFamily;
use crate::forcing::{BranchMap, PatternRequest};
use crate::model::PointId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("blocks must be nonempty and all of the same length")]
    Shape,
    #[error("index {0} appears in two blocks")]
    Overlap(usize),
    #[error("ε row {row} is not a balanced map on [{branches}]")]
    Eps { row: usize, branches: usize },
    #[error("δ({row}) = {value} is outside [{branches}]")]
    Delta { row: usize, value: usize, branches: usize },
}

/// Blocks `E_α = (ξ_α^1, …, ξ_α^k)` with the maps `ε` and `δ` the pattern
/// should realize between any two of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSpec {
    blocks: Vec<Vec<usize>>,
    eps: Vec<BranchMap>,
    delta: Vec<usize>,
}

impl PatternSpec {
    pub fn new(
        half: usize,
        blocks: Vec<Vec<usize>>,
        eps: Vec<BranchMap>,
        delta: Vec<usize>,
    ) -> Result<Self, SpecError> {
        let k = delta.len();
        if k == 0 || eps.len() != k || blocks.iter().any(|b| b.len() != k) {
            return Err(SpecError::Shape);
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(&x) = blocks.iter().flatten().find(|&&x| !seen.insert(x)) {
            return Err(SpecError::Overlap(x));
        }
        let branches = 2 * half;
        if let Some(row) = eps
            .iter()
            .position(|m| !m.is_total_on(branches) || !m.is_parity_balanced())
        {
            return Err(SpecError::Eps { row, branches });
        }
        if let Some((row, &value)) = delta
            .iter()
            .enumerate()
            .find(|(_, &d)| !(1..=branches).contains(&d))
        {
            return Err(SpecError::Delta { row, value, branches });
        }
        Ok(PatternSpec { blocks, eps, delta })
    }

    pub fn k(&self) -> usize {
        self.delta.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn eps(&self) -> &[BranchMap] {
        &self.eps
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    /// The chain step that forces the pattern between blocks α and β.
    pub fn request(&self, alpha: usize, beta: usize) -> PatternRequest {
        PatternRequest {
            alpha_block: self.blocks[alpha].clone(),
            beta_block: self.blocks[beta].clone(),
            eps: self.eps.clone(),
            delta: self.delta.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternFailure {
    /// α, β are not two distinct blocks in increasing order.
    Blocks { alpha: usize, beta: usize },
    /// A point of `R_{ξ_β^i}` outside `A_{ξ_α^i, δ(i)}`.
    Residue { i: usize, point: PointId },
    /// `(x_{ξ_α^i}, l) ∉ A_{ξ_β^i, ε(i, l)}`.
    Transfer { i: usize, l: usize },
}

/// Checks `R_{ξ_β^i} ⊆ A_{ξ_α^i, δ(i)}` and `(x_{ξ_α^i}, l) ∈ A_{ξ_β^i, ε(i, l)}`
/// for every row i and branch l.
pub fn verify_pattern(
    family: &SplittingFamily,
    spec: &PatternSpec,
    alpha: usize,
    beta: usize,
) -> Result<(), Vec<PatternFailure>> {
    let count = family.space().index_count();
    if alpha >= beta
        || beta >= spec.blocks.len()
        || spec.blocks[beta].iter().chain(&spec.blocks[alpha]).any(|&x| x >= count)
    {
        return Err(vec![PatternFailure::Blocks { alpha, beta }]);
    }
    let space = family.space();
    let mut failures = Vec::new();
    for i in 0..spec.k() {
        let (a, b) = (spec.blocks[alpha][i], spec.blocks[beta][i]);
        let target = family.set(a, spec.delta[i]);
        let fibre = space.fiber(b);
        failures.extend(
            fibre
                .iter()
                .filter(|&y| !target.contains(y))
                .map(|point| PatternFailure::Residue { i, point }),
        );
        for l in 1..=space.branches() {
            if !family.member(space.split_point(a, l), b, spec.eps[i].apply(l)) {
                failures.push(PatternFailure::Transfer { i, l });
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}
