use thiserror::Error;

use crate::descriptor::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid duality dimension: polynomial of degree {degree} cannot be reversed at cap {cap}")]
    InvalidDualityDimension { degree: usize, cap: usize },

    #[error("invalid cell model: {0}")]
    InvalidCellModel(String),

    #[error("cocycle condition fails on 2-simplex {simplex:?}")]
    CocycleViolation { simplex: Vec<u32> },

    #[error("edge sign listed for ({0}, {1}), which is not an edge of the model")]
    UnknownEdge(u32, u32),

    #[error("edge sign {0} is not +1 or -1")]
    InvalidSign(i64),

    #[error("invalid descriptor: {}", join_violations(.0))]
    InvalidDescriptor(Vec<Violation>),

    #[error("orientation required: {0}")]
    NotOriented(String),

    #[error("relative homology unavailable: {0}")]
    MissingRelativeHomology(String),

    #[error(
        "critical submanifold `{name}` has a non-palindromic Poincaré polynomial {poly}; duality needs it oriented"
    )]
    NotPalindromic { name: String, poly: String },

    #[error("inadmissible Morse vector for `{name}`: {detail}")]
    Inadmissible { name: String, detail: String },

    #[error("no Morse vector for `{0}` and no cell model to default to")]
    MissingChoice(String),

    #[error("Morse vector given for unknown submanifold `{0}`")]
    UnknownChoice(String),

    #[error("invalid flow dataset: {0}")]
    InvalidFlowDataset(String),

    #[error("flow line {from} -> {to} does not have relative index one ({from_index} -> {to_index})")]
    RelativeIndex {
        from: String,
        to: String,
        from_index: usize,
        to_index: usize,
    },

    #[error("flow line references undeclared point `{0}`")]
    DanglingPoint(String),

    #[error("coverage mismatch between datasets: {0}")]
    CoverageMismatch(String),

    #[error("top chain of the zero vector is undefined")]
    ZeroChain,

    #[error("chain complex audit failed: {0}")]
    ComplexNotClosed(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {message}")]
    Parse { context: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
