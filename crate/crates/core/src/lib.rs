//! Finite models of generic unordered 2n-split Cantor sets.
//!
//! [`model`] holds the truncated space, [`forcing`] runs the poset that
//! builds splitting families, [`family`] derives and checks them,
//! [`measure`] does exact integration against atomic measures, and
//! [`analysis`] holds the arithmetic and combinatorial lemmas.

pub mod analysis;
pub mod family;
pub mod forcing;
pub mod measure;
pub mod model;
pub mod rational;
