use crate::family::SplittingFamily;
use crate::model::{ClopenSet, PointId};

/// A point of `K^m` with a product neighbourhood `B_1 × … × B_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxEntry {
    pub tuple: Vec<PointId>,
    pub boxes: Vec<ClopenSet>,
}

impl BoxEntry {
    pub fn contains(&self, tuple: &[PointId]) -> bool {
        tuple.len() == self.boxes.len() && tuple.iter().zip(&self.boxes).all(|(y, b)| b.contains(*y))
    }
}

/// Branches `1, 2, 4, …, 2n` used by the discrete tuples.
pub fn discrete_branches(half: usize) -> Vec<usize> {
    std::iter::once(1).chain((1..=half).map(|k| 2 * k)).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscreteReport {
    /// Ordered pairs `(ξ, η)` checked.
    pub checked: usize,
    /// How many tuples lay in their own box.
    pub inside: usize,
    /// How many tuples lay outside the other boxes.
    pub outside: usize,
    /// `(ξ, η)` with `tuple_ξ ∉ U_ξ` (when equal) or `tuple_η ∈ U_ξ`.
    pub failures: Vec<(usize, usize)>,
}

/// `tuple_ξ = ((x_ξ,1), (x_ξ,2), (x_ξ,4), …, (x_ξ,2n))` with the box
/// `A_{ξ,1} × A_{ξ,2} × A_{ξ,4} × … × A_{ξ,2n}`, checked over all ordered pairs.
pub fn discrete_witness(family: &SplittingFamily) -> (Vec<BoxEntry>, DiscreteReport) {
    let space = family.space();
    let branches = discrete_branches(space.half());
    let entries: Vec<BoxEntry> = (0..space.index_count())
        .map(|xi| BoxEntry {
            tuple: branches.iter().map(|&b| space.split_point(xi, b)).collect(),
            boxes: branches.iter().map(|&b| family.set(xi, b).clone()).collect(),
        })
        .collect();
    let mut report = DiscreteReport::default();
    for (xi, entry) in entries.iter().enumerate() {
        for (eta, other) in entries.iter().enumerate() {
            report.checked += 1;
            let inside = entry.contains(&other.tuple);
            match (xi == eta, inside) {
                (true, true) => report.inside += 1,
                (false, false) => report.outside += 1,
                _ => report.failures.push((xi, eta)),
            }
        }
    }
    (entries, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_for_small_n() {
        assert_eq!(discrete_branches(2), vec![1, 2, 4]);
        assert_eq!(discrete_branches(3), vec![1, 2, 4, 6]);
    }
}
