use std::io;

use thiserror::Error;

use crate::graph::{LabelId, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no rule for nonterminal label {0}")]
    UnknownNonterminal(LabelId),

    #[error("unknown label {0}")]
    UnknownLabel(LabelId),

    #[error("label {label} has rank {expected}, edge has {actual} nodes")]
    RankMismatch {
        label: LabelId,
        expected: usize,
        actual: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("id {0} has no dictionary entry")]
    DanglingId(u64),

    #[error("node {node} carries conflicting labels {first:?} and {second:?}")]
    ConflictingLabels {
        node: NodeId,
        first: String,
        second: String,
    },

    #[error("digram count table is empty")]
    EmptyCounts,

    #[error("{edges} candidate edges exceed the exhaustive search limit of {limit}")]
    SizeLimitExceeded { edges: usize, limit: usize },

    #[error("sequence is not monotone at index {0}")]
    NotMonotone(usize),

    #[error("value {value} is outside the universe {universe}")]
    OutOfUniverse { value: u64, universe: u64 },

    #[error("point ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("truncated bit stream")]
    Truncated,

    #[error("not an itr container (bad magic)")]
    BadMagic,

    #[error("unsupported container version {0:?}")]
    BadVersion(char),

    #[error("section lengths do not match the file size")]
    SectionLength,

    #[error("corrupt container: {0}")]
    Corrupt(String),

    #[error("container was not compressed with node labels as edges")]
    NotItrPlus,

    #[error("malformed query pattern: {0}")]
    BadPattern(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::Corrupt(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
