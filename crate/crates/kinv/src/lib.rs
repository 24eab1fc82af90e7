//! Exact-arithmetic universal knot invariants for long knots given as
//! braid words: the ribbon Hopf algebra 𝔻 with its R-matrix and normal
//! ordering, Verma-module evaluation of the colored Jones function,
//! Alexander polynomials via the reduced Burau representation, and the
//! large-color (Melvin–Morton–Rozansky) expansion with first-order
//! extraction and cross-verification.
//!
//! Everything is computed over ℚ — no floating point anywhere. Truncated
//! h-series track the order through which their coefficients are trusted.

pub mod error;
pub mod exec;
pub mod rat;

pub mod hseries;
pub mod laurent;
pub mod mpoly;

pub mod algebra;
pub mod diagrams;
pub mod engine;

pub mod alexander;
pub mod mmr;

pub mod report;
pub mod suites;

pub use error::{Error, Result};
