//! Evaluation engines for the universal invariant.

pub mod algebra_z;
pub mod verma;
pub mod vn;
