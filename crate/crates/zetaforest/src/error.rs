//! Crate-wide error type and the machine-readable rejection codes used by the
//! cone-to-MZV pipeline diagnostics.

use std::fmt;

/// Reason codes attached to pipeline rejections so that callers (in particular
/// the CLI `check` command) can report *why* a cone was rejected, not just that
/// it was.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReasonCode {
    /// The representing matrix has an entry outside {0, 1}.
    NotUnimodular,
    /// Two rows of the representing matrix coincide, so the row relation is
    /// not antisymmetric and the cone is not maximal.
    DuplicateRows,
    /// Some nonzero entry a[i][j] is not backed by the row relation i <= j.
    NotPosetCompatible,
    /// The Hasse diagram of the row poset has a column with more than one
    /// nonzero entry, so the poset is not a rooted forest.
    NotForestHasse,
    /// A root of the extracted forest carries a decoration below 2, so the
    /// associated series diverges.
    DivergentRoot,
    /// A non-root vertex carries decoration 0, which the tree pipeline does
    /// not cover (the binarisation of a 0-decorated vertex is undefined).
    ZeroDecoration,
    /// The matrix passes the row-poset tests but is not the path matrix of
    /// its own poset; its rows are linearly dependent, so it does not
    /// represent a maximal cone.
    NotMaximal,
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ReasonCode::NotUnimodular => "NOT_UNIMODULAR",
            ReasonCode::DuplicateRows => "DUPLICATE_ROWS",
            ReasonCode::NotPosetCompatible => "NOT_POSET_COMPATIBLE",
            ReasonCode::NotForestHasse => "NOT_FOREST_HASSE",
            ReasonCode::DivergentRoot => "DIVERGENT_ROOT",
            ReasonCode::ZeroDecoration => "ZERO_DECORATION",
            ReasonCode::NotMaximal => "NOT_MAXIMAL",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Input text could not be parsed; `position` is a byte offset.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// A word that is not convergent (must start with x and end with y) was
    /// used where an MZV index is required.
    #[error("not a convergent word: {0}")]
    NotConvergentWord(String),

    /// An {x,y}-forest outside the image of the branched binarisation map.
    #[error("not binarizable: {0}")]
    NotBinarizable(String),

    /// An {x,y}-forest operation that requires convergence was applied to a
    /// non-convergent forest.
    #[error("not a convergent forest: {0}")]
    NotConvergentForest(String),

    /// Pipeline rejection with a machine-readable reason code.
    #[error("{code}: {message}")]
    Rejected { code: ReasonCode, message: String },

    /// Mordell-Tornheim index outside the convergent, covered domain.
    #[error("divergent or not covered: {0}")]
    Divergent(String),

    /// A numerical evaluation that was refused or failed.
    #[error("numeric: {0}")]
    Numeric(String),

    /// Structurally invalid input (wrong shapes, empty where nonempty needed).
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn rejected(code: ReasonCode, message: impl Into<String>) -> Self {
        Error::Rejected {
            code,
            message: message.into(),
        }
    }

    /// The rejection code, if this error carries one.
    pub fn reason_code(&self) -> Option<ReasonCode> {
        match self {
            Error::Rejected { code, .. } => Some(*code),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
