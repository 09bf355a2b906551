//! Error types shared across the library.

use thiserror::Error;

/// A single invariant violation found by validation, with the path of the
/// offending vertex (`.` for the root, then `.k` child steps).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
    /// Violations that `normalize` repairs (nested sums, cables of the
    /// unknot) rather than genuine invalidity.
    pub flattening: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn only_flattening(&self) -> bool {
        self.violations.iter().all(|v| v.flattening)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "at {}: {}", v.path, v.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KnotError {
    #[error("invalid tree:\n{0}")]
    InvalidTree(ValidationReport),
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("permutation targets do not form a bijection")]
    NotABijection,
    #[error("bad signed-cycle notation: {0}")]
    BadCycleNotation(String),
    #[error("knot class is not invertible")]
    NotInvertible,
    #[error("no concrete inversion action available: {0}")]
    NonConcreteAction(String),
    #[error("coset enumeration exceeded the limit of {limit} cosets")]
    IndexTooLarge { limit: usize },
    #[error("matrix does not have finite order dividing {claimed}")]
    NotFiniteOrder { claimed: u64 },
    #[error("enumeration exceeded the limit of {limit}")]
    LimitExceeded { limit: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("semantic error: {0}")]
    Semantic(ValidationReport),
}

impl ParseError {
    pub fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("schema error: {0}")]
pub struct SchemaError(pub String);
