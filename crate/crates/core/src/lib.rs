//! Parametric bicycle frame construction, beam-element structural
//! evaluation under three standard load cases, and dataset-level analysis.

// Negated comparisons such as `!(a > b)` also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod fea;
pub mod geometry;
pub mod load_cases;
pub mod materials;
pub mod sampling;
