use std::collections::BTreeMap;

use thiserror::Error;

use crate::forcing::BranchMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("{size} required values exceed n = {half}")]
    TooMany { size: usize, half: usize },
    #[error("value {value} is outside [{branches}]")]
    OutOfRange { value: usize, branches: usize },
}

/// `I ⊆ [2n]` with `|I| = n` and a parity-flipping bijection `σ: I → [2n] \ I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityPairing {
    pub half: usize,
    pub set: Vec<usize>,
    pub sigma: BTreeMap<usize, usize>,
}

impl ParityPairing {
    pub fn branches(&self) -> usize {
        2 * self.half
    }

    pub fn contains(&self, l: usize) -> bool {
        self.set.binary_search(&l).is_ok()
    }

    pub fn sigma(&self, l: usize) -> Option<usize> {
        self.sigma.get(&l).copied()
    }

    pub fn inverse(&self, l: usize) -> Option<usize> {
        self.sigma.iter().find(|(_, &v)| v == l).map(|(&k, _)| k)
    }
}

/// Fills `I` with `J` and then the smallest free values; odd members of `I`
/// go to even members of the complement and vice versa, smallest first.
pub fn parity_pairing(required: &[usize], half: usize) -> Result<ParityPairing, PairingError> {
    let branches = 2 * half;
    if let Some(&value) = required.iter().find(|&&j| !(1..=branches).contains(&j)) {
        return Err(PairingError::OutOfRange { value, branches });
    }
    let mut set: Vec<usize> = required.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() > half {
        return Err(PairingError::TooMany { size: set.len(), half });
    }
    let mut next = 1;
    while set.len() < half {
        if !set.contains(&next) {
            set.push(next);
        }
        next += 1;
    }
    set.sort_unstable();
    let rest: Vec<usize> = (1..=branches).filter(|l| !set.contains(l)).collect();
    let mut sigma = BTreeMap::new();
    for parity in [1, 0] {
        let from = set.iter().filter(|&&l| l % 2 == parity);
        let to = rest.iter().filter(|&&l| l % 2 != parity);
        sigma.extend(from.copied().zip(to.copied()));
    }
    Ok(ParityPairing { half, set, sigma })
}

/// Row i is `ε(i, l) = l` on `I_i` and `σ_i⁻¹(l)` off it.
pub fn build_eps(pairings: &[ParityPairing]) -> Vec<BranchMap> {
    pairings
        .iter()
        .map(|p| {
            BranchMap::new((1..=p.branches()).map(|l| {
                if p.contains(l) {
                    l
                } else {
                    p.inverse(l).expect("σ is onto the complement")
                }
            }))
        })
        .collect()
}
