//! A small document language for exact Dirac-structure computations.
//!
//! A document declares charts, binds tensors, sections, frames and maps, and
//! lists commands. [`parse_document`] checks syntax and names,
//! [`run_document`] evaluates everything and collects one report per
//! command.
//!
//! ```
//! let doc = dirackit::parse_document(
//!     "manifold M dim 2 coords x y; bivector p = @x^@y; check-dirac p;",
//! ).unwrap();
//! let report = dirackit::run_document(&doc).unwrap();
//! assert_eq!(report.commands[0].verdict, Some(true));
//! ```

pub mod ast;
mod check;
pub mod error;
mod eval;
mod exec;
pub mod format;
mod syntax;

pub use ast::{render_document, Document, Expr};
pub use check::check_document;
pub use error::{DslError, Pos, Result};
pub use exec::{run_document, CommandReport, RunReport};
pub use syntax::{parse_expr, parse_syntax};

/// Parses a document and resolves its names.
pub fn parse_document(text: &str) -> Result<Document> {
    let d = parse_syntax(text)?;
    check_document(&d)?;
    Ok(d)
}
