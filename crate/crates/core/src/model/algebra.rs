//! Boolean subalgebras of the finite clopen algebra, represented by their atoms.

use super::clopen::{ClopenSet, PointId};
use super::space::Space;

/// A partition of the point set into the atoms of a generated subalgebra.
///
/// Cells are numbered in order of their smallest member, so two partitions
/// with the same cells compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    cell_of: Vec<u32>,
    cells: usize,
}

impl Partition {
    /// The single-cell partition of the trivial algebra `{∅, K}`.
    pub fn trivial(universe: usize) -> Self {
        Partition {
            cell_of: vec![0; universe],
            cells: usize::from(universe > 0),
        }
    }

    pub fn generated_by<'a>(
        universe: usize,
        generators: impl IntoIterator<Item = &'a ClopenSet>,
    ) -> Self {
        let mut partition = Partition::trivial(universe);
        for g in generators {
            partition.refine(g);
        }
        partition
    }

    /// Splits every cell by membership in `set`.
    pub fn refine(&mut self, set: &ClopenSet) {
        assert_eq!(set.universe(), self.cell_of.len());
        self.refine_by(|id| set.contains(id));
    }

    /// Splits every cell by the value of `key` on each point.
    pub fn refine_by<K: PartialEq>(&mut self, key: impl Fn(PointId) -> K) {
        let mut slots: Vec<Vec<(K, u32)>> = (0..self.cells).map(|_| Vec::new()).collect();
        let mut next = 0u32;
        for (i, cell) in self.cell_of.iter_mut().enumerate() {
            let k = key(PointId(i));
            let slot = &mut slots[*cell as usize];
            let new = match slot.iter().find(|(seen, _)| *seen == k) {
                Some(&(_, id)) => id,
                None => {
                    slot.push((k, next));
                    next += 1;
                    next - 1
                }
            };
            *cell = new;
        }
        self.cells = next as usize;
    }

    pub fn cell_count(&self) -> usize {
        self.cells
    }

    pub fn cell_of(&self, id: PointId) -> usize {
        self.cell_of[id.0] as usize
    }

    pub fn cells(&self) -> Vec<ClopenSet> {
        let mut out = vec![ClopenSet::empty(self.cell_of.len()); self.cells];
        for (i, &c) in self.cell_of.iter().enumerate() {
            out[c as usize].insert(PointId(i));
        }
        out
    }

    /// Whether `set` is a union of cells, i.e. belongs to the algebra.
    pub fn contains_set(&self, set: &ClopenSet) -> bool {
        self.is_measurable(|id| set.contains(id))
    }

    /// Whether a function on points is constant on every cell.
    pub fn is_measurable<T: PartialEq>(&self, value: impl Fn(PointId) -> T) -> bool {
        let mut seen: Vec<Option<T>> = (0..self.cells).map(|_| None).collect();
        for (i, &c) in self.cell_of.iter().enumerate() {
            let v = value(PointId(i));
            match &seen[c as usize] {
                Some(prev) if *prev != v => return false,
                Some(_) => {}
                None => seen[c as usize] = Some(v),
            }
        }
        true
    }

    /// First point of the cell containing `id` whose value differs, if the
    /// function is not constant on that cell.
    pub fn first_split_cell<T: PartialEq>(
        &self,
        value: impl Fn(PointId) -> T,
    ) -> Option<(PointId, PointId)> {
        let mut seen: Vec<Option<(PointId, T)>> = (0..self.cells).map(|_| None).collect();
        for (i, &c) in self.cell_of.iter().enumerate() {
            let v = value(PointId(i));
            match &seen[c as usize] {
                Some((first, prev)) if *prev != v => return Some((*first, PointId(i))),
                Some(_) => {}
                None => seen[c as usize] = Some((PointId(i), v)),
            }
        }
        None
    }
}

/// Atoms of the subalgebra generated by `generators`, ordered by smallest member.
pub fn algebra_atoms(space: &Space, generators: &[ClopenSet]) -> Vec<ClopenSet> {
    Partition::generated_by(space.len(), generators).cells()
}

/// Whether `candidate` belongs to the subalgebra generated by `generators`.
pub fn in_generated_algebra(space: &Space, candidate: &ClopenSet, generators: &[ClopenSet]) -> bool {
    Partition::generated_by(space.len(), generators).contains_set(candidate)
}
