//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("generator {gen} out of range for {strands} strands")]
    GeneratorRange { gen: i64, strands: usize },

    #[error("braid closure has {components} components; a long knot needs exactly one")]
    MultiComponent { components: usize },

    #[error("unknown knot name `{0}`")]
    UnknownKnot(String),

    #[error("series constant term is not invertible")]
    NonInvertibleConstant,

    #[error("exp requires a zero constant term")]
    ExpNonzeroConstant,

    #[error("log requires constant term 1")]
    LogConstantNotOne,

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("coefficient of h^{requested} requested beyond valid order {valid}")]
    OrderExceeded { requested: usize, valid: usize },

    #[error("missing binding for variable {0}")]
    MissingBinding(String),

    #[error("{0} is not a twisting element")]
    NotTwisting(String),

    #[error("linear system inconsistent at order {order}: {detail}")]
    InconsistentSystem { order: usize, detail: String },

    #[error("linear system underdetermined: {equations} equations, {unknowns} unknowns")]
    Underdetermined { equations: usize, unknowns: usize },

    #[error("module evaluation did not collapse to the highest weight vector: {0}")]
    NotHighestWeight(String),

    #[error("normalization impossible: {0}")]
    Normalization(String),

    #[error("internal consistency failure in {step}: {detail}")]
    Internal { step: String, detail: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn internal(step: &str, detail: impl Into<String>) -> Self {
        Error::Internal { step: step.to_string(), detail: detail.into() }
    }
}
