//! Exact integration of simple functions against atomic measures, and the
//! biorthogonal systems built from a balanced family.

mod biorth;
mod discrete;
mod nice;
mod simple;

pub use biorth::{
    check_biorthogonal, check_nice, check_semibiorthogonal, property6_system, BiorthCandidate,
    PairingWitness,
};
pub use discrete::{discrete_branches, discrete_witness, BoxEntry, DiscreteReport};
pub use nice::{extract_nice_3supported, ExtractError, Extraction, ExtractionReport, NiceCase};
pub use simple::{integrate, AtomicMeasure, SimpleFunction};
