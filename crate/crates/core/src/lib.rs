//! Architectural decision models and their denotational semantics.
//!
//! A [`Model`] is a set of decision issues, the alternatives that solve
//! them, a symmetric and reflexive compatibility relation between
//! alternatives, and a triggering relation that lets a chosen alternative
//! raise new issues. A [`Design`] maps issues to chosen alternatives; the
//! *meaning* of a model is the set of designs that conform to it, and a
//! model is consistent when that set is non-empty.
//!
//! The crate is split along those lines:
//!
//! - [`model`]: the model tuple, well-formedness validation and the derived
//!   relations (`alternatives_to`, `incompatible_with`, `forced_by`, ...).
//! - [`semantics`]: conformity, meaning enumeration, consistency, viability
//!   and a brute-force oracle.
//! - [`session`]: an interactive decision process that resolves one issue
//!   at a time.
//! - [`formats`]: the JSON model/design documents and tabular export.
//! - [`generate`]: random well-formed model documents for property tests.

pub mod fixtures;
pub mod formats;
pub mod generate;
mod ids;
pub mod model;
pub mod semantics;
pub mod session;

pub use formats::{DesignDocument, ModelDocument, ParseError, ParseErrorKind};
pub use ids::{AlternativeId, IssueId};
pub use model::{
    build_model, Alternative, Issue, Model, ModelError, ModelParts, Rule, ValidationReport,
    Violation,
};
pub use semantics::{
    brute_force_meaning, collect_meaning, conforms, is_consistent, is_viable, meaning_of,
    well_founded_filter, Condition, ConformityReport, ConformityViolation, Design, Meaning,
    OracleError,
};
pub use session::{DecisionSession, SessionError, SessionStatus};
