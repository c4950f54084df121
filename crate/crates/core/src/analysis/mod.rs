//! Finite kernels of the obstruction and separation arguments: the pair
//! lemma on rationals, parity pairings and the ε maps built from them,
//! pattern verification, the a/b/c scanner and a left-separation refuter.

mod numbers;
mod obstruction;
mod pairing;
mod pattern;
mod separation;

pub use numbers::{number_lemma_bound, number_lemma_pair, NumberLemmaError};
pub use obstruction::{
    claim3_bound, claim3_holds, obstruction_scan, pair_lemma_constants, thresholds, ObstructionError,
    ObstructionHit, ObstructionReport, Thresholds,
};
pub use pairing::{build_eps, parity_pairing, ParityPairing, PairingError};
pub use pattern::{verify_pattern, PatternFailure, PatternSpec, SpecError};
pub use separation::{
    left_separation_entries, pairings_for, refute_left_separation, Coordinate, SeparationError,
};
