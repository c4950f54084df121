//! The forcing poset as data: conditions, the extension order, the density
//! extensions, amalgamation of isomorphic conditions, Δ-systems and chains.

mod amalgamate;
mod branch;
mod chain;
mod condition;
mod delta;
mod density;
pub mod sample;

pub use amalgamate::{amalgamate, check_eq1, separating_depth, Amalgam, AmalgamationError};
pub use branch::BranchMap;
pub use chain::{
    build_chain, realize_pattern, AuditFailure, Chain, ChainError, ChainStep, Fill,
    PairCertificate, PatternCertificate, PatternError, PatternRequest, Step,
};
pub use condition::{extends, validate, Assignment, AssignmentTable, Condition, Violation};
pub use delta::{delta_system, DeltaSystem, EXACT_LIMIT};
pub use density::{
    add_index, add_index_with, deepen, deepen_with, isomorphic, random_balanced_map, transport,
    DefaultFiller, Filler, OrderBijection, SeededFiller,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("depth {needed} needed, resolution is {resolution}")]
    ResolutionExhausted { needed: usize, resolution: usize },
    #[error("index {index} is not below {count}")]
    IndexOutOfRange { index: usize, count: usize },
}
