//! On-disk documents: the JSON model and design formats and the tabular
//! export of a model's meaning.
//!
//! A model document authors compatibility by listing the *incompatible*
//! cross-issue pairs; every other cross-issue pair is compatible. Keys are
//! serialized in a fixed order:
//!
//! ```json
//! {
//!   "name": "demo",
//!   "issues": [{ "id": "Lang", "label": "Language" }],
//!   "alternatives": [{ "id": "Java", "label": "Java", "issue": "Lang", "triggers": [] }],
//!   "incompatible": []
//! }
//! ```
//!
//! Whether two alternatives of the same issue are compatible makes no
//! observable difference: conformity only ever compares the alternatives
//! chosen for *distinct* issues (plus each with itself), and forcing only
//! relates alternatives of distinct issues. Models therefore fix such pairs
//! as incompatible, and documents never list them.

mod design;
mod document;
mod export;

use std::fmt;

use thiserror::Error;

pub use design::{parse_design, DesignDocument};
pub use document::{
    parse_model, serialize_model, AlternativeEntry, IncompatiblePair, IssueEntry, ModelDocument,
};
pub use export::{export_designs, import_designs_csv, ExportError, ExportFormat, TableWriter};

const PAIR_ARITY: &str = "pair-arity:";
const DUPLICATE_ID: &str = "duplicate-id:";
const DUPLICATE_KEY: &str = "duplicate-key:";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Not valid JSON.
    Syntax,
    /// Valid JSON of the wrong shape (missing field, wrong type, ...).
    Schema,
    DuplicateKey,
    DuplicateId,
    PairArity,
}

impl ParseErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Schema => "schema",
            ParseErrorKind::DuplicateKey => "duplicate-key",
            ParseErrorKind::DuplicateId => "duplicate-id",
            ParseErrorKind::PairArity => "pair-arity",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl From<serde_json::Error> for ParseError {
    fn from(err: serde_json::Error) -> Self {
        let (line, column) = (err.line(), err.column());
        let full = err.to_string();
        let suffix = format!(" at line {line} column {column}");
        let raw = full.strip_suffix(&suffix).unwrap_or(&full);
        let (kind, message) = if let Some(rest) = raw.strip_prefix(PAIR_ARITY) {
            (ParseErrorKind::PairArity, rest.trim())
        } else if let Some(rest) = raw.strip_prefix(DUPLICATE_ID) {
            (ParseErrorKind::DuplicateId, rest.trim())
        } else if let Some(rest) = raw.strip_prefix(DUPLICATE_KEY) {
            (ParseErrorKind::DuplicateKey, rest.trim())
        } else if raw.starts_with("duplicate field") {
            (ParseErrorKind::DuplicateKey, raw)
        } else if err.is_data() {
            (ParseErrorKind::Schema, raw)
        } else {
            (ParseErrorKind::Syntax, raw)
        };
        ParseError {
            kind,
            message: message.to_owned(),
            line,
            column,
        }
    }
}
