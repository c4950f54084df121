use thiserror::Error;

use crate::family::SplittingFamily;
use crate::measure::BoxEntry;

use super::pairing::{parity_pairing, PairingError, ParityPairing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparationError {
    #[error("entry {0} does not lie in its own box")]
    NotInOwnBox(usize),
}

/// First `α < β` with `tuple_α ∈ box_β`, or `None` when the list is
/// left-separated.
pub fn refute_left_separation(entries: &[BoxEntry]) -> Result<Option<(usize, usize)>, SeparationError> {
    if let Some(bad) = entries.iter().position(|e| !e.contains(&e.tuple)) {
        return Err(SeparationError::NotInOwnBox(bad));
    }
    for (beta, later) in entries.iter().enumerate() {
        if let Some(alpha) = entries[..beta].iter().position(|e| later.contains(&e.tuple)) {
            return Ok(Some((alpha, beta)));
        }
    }
    Ok(None)
}

/// Coordinate m of a tuple: the point `(x_{ξ^i}, branch)` for the block
/// entry at `position` i, with neighbourhood `A_{ξ^i, branch}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub position: usize,
    pub branch: usize,
}

/// One entry per block.
pub fn left_separation_entries(
    family: &SplittingFamily,
    blocks: &[Vec<usize>],
    coords: &[Coordinate],
) -> Vec<BoxEntry> {
    let space = family.space();
    blocks
        .iter()
        .map(|block| BoxEntry {
            tuple: coords
                .iter()
                .map(|c| space.split_point(block[c.position], c.branch))
                .collect(),
            boxes: coords
                .iter()
                .map(|c| family.set(block[c.position], c.branch).clone())
                .collect(),
        })
        .collect()
}

/// `(I_i, σ_i)` for each block position, with `I_i` holding every branch a
/// coordinate at that position uses.
pub fn pairings_for(
    coords: &[Coordinate],
    k: usize,
    half: usize,
) -> Result<Vec<ParityPairing>, PairingError> {
    (0..k)
        .map(|i| {
            let used: Vec<usize> = coords
                .iter()
                .filter(|c| c.position == i)
                .map(|c| c.branch)
                .collect();
            parity_pairing(&used, half)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClopenSet, PointId};

    fn entry(point: usize, members: &[usize]) -> BoxEntry {
        BoxEntry {
            tuple: vec![PointId(point)],
            boxes: vec![ClopenSet::from_ids(8, members.iter().map(|&i| PointId(i)))],
        }
    }

    #[test]
    fn identical_entries() {
        let e = entry(0, &[0, 1]);
        assert_eq!(refute_left_separation(&[e.clone(), e]), Ok(Some((0, 1))));
    }

    #[test]
    fn reverse_nesting_is_separated() {
        // boxes shrink while each new point sits outside the later boxes
        let list = [entry(0, &[0, 1, 2, 3]), entry(1, &[1, 2, 3]), entry(2, &[2, 3])];
        assert_eq!(refute_left_separation(&list), Ok(None));
    }

    #[test]
    fn own_box_required() {
        assert_eq!(
            refute_left_separation(&[entry(0, &[0]), entry(5, &[1])]),
            Err(SeparationError::NotInOwnBox(1))
        );
    }
}
