use std::fmt;

use dirackit_core::GeomError;
use thiserror::Error;

/// One-based source position.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("{pos}: syntax error: found {found}, expected one of: {}", .expected.join(", "))]
    Syntax { pos: Pos, found: String, expected: Vec<String> },
    #[error("{pos}: unknown name `{name}`")]
    UnknownName { pos: Pos, name: String },
    #[error("{pos}: `{name}` is already defined")]
    Duplicate { pos: Pos, name: String },
    #[error("{pos}: {what} expects {expected}, got {got}")]
    Arity { pos: Pos, what: String, expected: String, got: usize },
    #[error("{pos}: {msg}")]
    Type { pos: Pos, msg: String },
    #[error("{pos}: {source}")]
    Geom { pos: Pos, source: GeomError },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Syntax { pos, .. }
            | DslError::UnknownName { pos, .. }
            | DslError::Duplicate { pos, .. }
            | DslError::Arity { pos, .. }
            | DslError::Type { pos, .. }
            | DslError::Geom { pos, .. } => *pos,
        }
    }

    /// Process exit code: 2 for syntax errors, 3 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            DslError::Syntax { .. } => 2,
            _ => 3,
        }
    }

    pub(crate) fn type_err(pos: Pos, msg: impl Into<String>) -> Self {
        DslError::Type { pos, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, DslError>;

pub(crate) trait AtPos<T> {
    fn at(self, pos: Pos) -> Result<T>;
}

impl<T> AtPos<T> for std::result::Result<T, GeomError> {
    fn at(self, pos: Pos) -> Result<T> {
        self.map_err(|source| DslError::Geom { pos, source })
    }
}

impl<T> AtPos<T> for std::result::Result<T, dirackit_exact::AlgebraError> {
    fn at(self, pos: Pos) -> Result<T> {
        self.map_err(|e| DslError::Geom { pos, source: GeomError::from(e) })
    }
}
