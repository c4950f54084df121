//! The finite truncation of the unordered 2n-split Cantor set.
//!
//! `2^ω` is replaced by `2^M` (every ground point is a full-length code) and
//! the split indices by `0..Λ`. The ground set is all of `2^M` minus the
//! chosen codes, so `V_s` cardinalities are exact.

mod algebra;
mod bits;
mod clopen;
mod space;

pub use algebra::{algebra_atoms, in_generated_algebra, Partition};
pub use bits::{BitString, MAX_RESOLUTION};
pub use clopen::{ClopenSet, PointId};
pub use space::{Point, Space, SpaceConfig};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("n must be at least 2 (got {0})")]
    HalfTooSmall(usize),
    #[error("at least one split index is required")]
    NoIndices,
    #[error("resolution {resolution} cannot hold {indices} distinct codes")]
    ResolutionTooSmall { resolution: usize, indices: usize },
    #[error("resolution {resolution} exceeds the supported maximum {max}")]
    ResolutionTooLarge { resolution: usize, max: usize },
    #[error("code of index {index} has length {len}, expected {resolution}")]
    CodeLength {
        index: usize,
        len: usize,
        resolution: usize,
    },
    #[error("indices {first} and {second} share the code {code}")]
    DuplicateCode {
        first: usize,
        second: usize,
        code: BitString,
    },
    #[error("string of length {len} exceeds resolution {resolution}")]
    StringTooLong { len: usize, resolution: usize },
    #[error("value {value} does not fit in {len} bits")]
    ValueOverflow { value: u64, len: usize },
    #[error("invalid bit {0:?}")]
    BadBit(char),
}
