use std::fmt;

use fixedbitset::FixedBitSet;

/// Position of a point in the space's canonical enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the (finite) point set. Every subset of the finite model is
/// clopen; which ones belong to a generated subalgebra is decided in
/// [`super::algebra`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    bits: FixedBitSet,
}

impl ClopenSet {
    pub fn empty(universe: usize) -> Self {
        ClopenSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ClopenSet { bits }
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = PointId>) -> Self {
        let mut set = ClopenSet::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn from_range(universe: usize, range: std::ops::Range<usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(range);
        ClopenSet { bits }
    }

    /// Number of points in the ambient space.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, id: PointId) -> bool {
        self.bits.contains(id.0)
    }

    pub fn insert(&mut self, id: PointId) {
        self.bits.insert(id.0);
    }

    pub fn remove(&mut self, id: PointId) {
        self.bits.set(id.0, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = PointId> + '_ {
        self.bits.ones().map(PointId)
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        self.check_universe(other);
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        ClopenSet { bits }
    }

    pub fn intersection(&self, other: &ClopenSet) -> ClopenSet {
        self.check_universe(other);
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ClopenSet { bits }
    }

    pub fn difference(&self, other: &ClopenSet) -> ClopenSet {
        self.check_universe(other);
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        ClopenSet { bits }
    }

    pub fn complement(&self) -> ClopenSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        ClopenSet { bits }
    }

    pub fn is_subset(&self, other: &ClopenSet) -> bool {
        self.check_universe(other);
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> bool {
        self.check_universe(other);
        self.bits.is_disjoint(&other.bits)
    }

    pub fn first(&self) -> Option<PointId> {
        self.bits.minimum().map(PointId)
    }

    fn check_universe(&self, other: &ClopenSet) {
        assert_eq!(
            self.universe(),
            other.universe(),
            "sets over different point sets"
        );
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}
