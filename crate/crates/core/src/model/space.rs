use std::fmt;
use std::ops::Range;

use super::bits::{BitString, MAX_RESOLUTION};
use super::clopen::{ClopenSet, PointId};
use super::ModelError;

/// Parameters of a finite truncation of the split Cantor set.
///
/// `half` is n (each chosen code splits into `2n` points), `codes[ξ]` is the
/// code `x_ξ` of split index ξ, and `resolution` is the common length of
/// every code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceConfig {
    pub half: usize,
    pub resolution: usize,
    pub codes: Vec<BitString>,
}

impl SpaceConfig {
    pub fn new(half: usize, resolution: usize, codes: Vec<BitString>) -> Self {
        SpaceConfig {
            half,
            resolution,
            codes,
        }
    }

    pub fn index_count(&self) -> usize {
        self.codes.len()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.half < 2 {
            return Err(ModelError::HalfTooSmall(self.half));
        }
        if self.codes.is_empty() {
            return Err(ModelError::NoIndices);
        }
        if self.resolution > MAX_RESOLUTION {
            return Err(ModelError::ResolutionTooLarge {
                resolution: self.resolution,
                max: MAX_RESOLUTION,
            });
        }
        if (self.codes.len() as u64) > 1u64 << self.resolution {
            return Err(ModelError::ResolutionTooSmall {
                resolution: self.resolution,
                indices: self.codes.len(),
            });
        }
        for (index, code) in self.codes.iter().enumerate() {
            if code.len() != self.resolution {
                return Err(ModelError::CodeLength {
                    index,
                    len: code.len(),
                    resolution: self.resolution,
                });
            }
        }
        let mut sorted: Vec<(BitString, usize)> =
            self.codes.iter().copied().zip(0..).collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ModelError::DuplicateCode {
                    first: w[0].1,
                    second: w[1].1,
                    code: w[0].0,
                });
            }
        }
        Ok(())
    }
}

/// A point of the model: a ground code outside the chosen codes, or one of
/// the `2n` copies `(x_ξ, i)` of a chosen code. Branches are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Ground(BitString),
    Split { index: usize, branch: usize },
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Ground(code) => write!(f, "{code}"),
            Point::Split { index, branch } => write!(f, "(x{index},{branch})"),
        }
    }
}

/// The materialized finite space.
///
/// Points are enumerated in code order, with the `2n` copies of a chosen
/// code occupying consecutive positions. Every `V_s` is therefore a
/// contiguous range of point ids.
#[derive(Clone, Debug)]
pub struct Space {
    config: SpaceConfig,
    /// (code value, split index), sorted by code value.
    by_code: Vec<(u64, usize)>,
    points: Vec<Point>,
}

impl Space {
    pub fn new(config: SpaceConfig) -> Result<Space, ModelError> {
        config.validate()?;
        let mut by_code: Vec<(u64, usize)> = config
            .codes
            .iter()
            .enumerate()
            .map(|(xi, c)| (c.value(), xi))
            .collect();
        by_code.sort_unstable();
        let m = config.resolution;
        let branches = 2 * config.half;
        let mut points =
            Vec::with_capacity((1usize << m) + config.codes.len() * (branches - 1));
        let mut next_split = by_code.iter().peekable();
        for c in 0..(1u64 << m) {
            match next_split.peek() {
                Some(&&(code, index)) if code == c => {
                    next_split.next();
                    points.extend((1..=branches).map(|branch| Point::Split { index, branch }));
                }
                _ => points.push(Point::Ground(BitString::raw(c, m))),
            }
        }
        Ok(Space {
            config,
            by_code,
            points,
        })
    }

    pub fn config(&self) -> &SpaceConfig {
        &self.config
    }

    /// n, half the number of branches.
    pub fn half(&self) -> usize {
        self.config.half
    }

    /// N = 2n.
    pub fn branches(&self) -> usize {
        2 * self.config.half
    }

    /// Λ, the number of split indices.
    pub fn index_count(&self) -> usize {
        self.config.codes.len()
    }

    /// M, the code length.
    pub fn resolution(&self) -> usize {
        self.config.resolution
    }

    pub fn code(&self, index: usize) -> BitString {
        self.config.codes[index]
    }

    pub fn codes(&self) -> &[BitString] {
        &self.config.codes
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> {
        (0..self.points.len()).map(PointId)
    }

    pub fn point(&self, id: PointId) -> Point {
        self.points[id.0]
    }

    /// The split index whose code is `code`, if any.
    pub fn index_of_code(&self, code: BitString) -> Option<usize> {
        if code.len() != self.resolution() {
            return None;
        }
        self.by_code
            .binary_search_by_key(&code.value(), |&(c, _)| c)
            .ok()
            .map(|pos| self.by_code[pos].1)
    }

    /// Number of chosen codes strictly below `value`.
    fn split_codes_below(&self, value: u64) -> usize {
        self.by_code.partition_point(|&(c, _)| c < value)
    }

    /// Id of the first point whose code is `value` (or the end of the
    /// enumeration when `value == 2^M`).
    fn start_of_code(&self, value: u64) -> usize {
        value as usize + self.split_codes_below(value) * (self.branches() - 1)
    }

    pub fn id_of(&self, point: &Point) -> Option<PointId> {
        match *point {
            Point::Ground(code) => {
                if code.len() != self.resolution() || self.index_of_code(code).is_some() {
                    None
                } else {
                    Some(PointId(self.start_of_code(code.value())))
                }
            }
            Point::Split { index, branch } => {
                if index < self.index_count() && (1..=self.branches()).contains(&branch) {
                    Some(self.split_point(index, branch))
                } else {
                    None
                }
            }
        }
    }

    /// Id of `(x_index, branch)`; `branch` is 1-based.
    pub fn split_point(&self, index: usize, branch: usize) -> PointId {
        debug_assert!((1..=self.branches()).contains(&branch));
        PointId(self.start_of_code(self.code(index).value()) + branch - 1)
    }

    /// The code of a point: its own code for ground points, `x_ξ` for `(x_ξ, i)`.
    pub fn code_of(&self, id: PointId) -> BitString {
        match self.points[id.0] {
            Point::Ground(code) => code,
            Point::Split { index, .. } => self.code(index),
        }
    }

    /// Contiguous id range of `V_s`.
    pub fn v_range(&self, s: &BitString) -> Result<Range<usize>, ModelError> {
        let m = self.resolution();
        if s.len() > m {
            return Err(ModelError::StringTooLong {
                len: s.len(),
                resolution: m,
            });
        }
        let shift = m - s.len();
        let lo = s.value() << shift;
        let hi = (s.value() + 1) << shift;
        Ok(self.start_of_code(lo)..self.start_of_code(hi))
    }

    /// `V_s`: ground points extending `s` together with every fibre `R_ξ`
    /// whose code extends `s`.
    pub fn v_set(&self, s: &BitString) -> Result<ClopenSet, ModelError> {
        Ok(ClopenSet::from_range(self.len(), self.v_range(s)?))
    }

    /// The fibre `R_ξ = {(x_ξ,1), …, (x_ξ,2n)}`.
    pub fn fiber(&self, index: usize) -> ClopenSet {
        let start = self.split_point(index, 1).0;
        ClopenSet::from_range(self.len(), start..start + self.branches())
    }

    pub fn all(&self) -> ClopenSet {
        ClopenSet::full(self.len())
    }

    pub fn none(&self) -> ClopenSet {
        ClopenSet::empty(self.len())
    }

    pub fn is_ground(&self, id: PointId) -> bool {
        matches!(self.points[id.0], Point::Ground(_))
    }
}
