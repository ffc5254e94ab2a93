//! Exact construction of the Frobenius–Virasoro vertex algebra `V_F` of a
//! finite-dimensional commutative Frobenius algebra `F`, with checkers for the
//! identities it satisfies.

pub mod algebroid;
pub mod envelope;
pub mod format;
pub mod frobenius;
pub mod linalg;
pub mod modes;
pub mod scalar;
pub mod verify;
