//! Bundled example models.

use crate::formats::{parse_model, AlternativeEntry, IncompatiblePair, IssueEntry, ModelDocument};
use crate::model::{build_model, Model};

/// Canonical text of the RAPP robot-application model.
pub const RAPP_DOCUMENT: &str = include_str!("../fixtures/rapp.adm.json");

pub fn rapp_document() -> ModelDocument {
    parse_model(RAPP_DOCUMENT).expect("bundled RAPP document parses")
}

/// RAPP robot applications: app type, platform instance, robot type,
/// submission form and ROS language.
pub fn rapp() -> Model {
    build_model(&rapp_document()).expect("bundled RAPP document is well-formed")
}

fn issue(id: &str) -> IssueEntry {
    IssueEntry {
        id: id.into(),
        label: id.into(),
    }
}

fn alternative(id: &str, issue: &str, triggers: &[&str]) -> AlternativeEntry {
    AlternativeEntry {
        id: id.into(),
        label: id.into(),
        issue: issue.into(),
        triggers: triggers.iter().map(|&t| t.into()).collect(),
    }
}

/// The only entry alternative `A` triggers `I2`, whose only alternative `B`
/// is incompatible with `A`.
pub fn inconsistent_toy_document() -> ModelDocument {
    ModelDocument {
        name: "inconsistent".into(),
        issues: vec![issue("I1"), issue("I2")],
        alternatives: vec![alternative("A", "I1", &["I2"]), alternative("B", "I2", &[])],
        incompatible: vec![IncompatiblePair::new("A", "B")],
    }
}

pub fn inconsistent_toy() -> Model {
    build_model(&inconsistent_toy_document()).expect("well-formed")
}

/// Entry point `E` plus issues `I1` and `I2` whose alternatives trigger each
/// other, so `{E->X, I1->A, I2->B}` conforms without a founded chain.
pub fn mutual_trigger_document() -> ModelDocument {
    ModelDocument {
        name: "mutual-trigger".into(),
        issues: vec![issue("E"), issue("I1"), issue("I2")],
        alternatives: vec![
            alternative("X", "E", &[]),
            alternative("A", "I1", &["I2"]),
            alternative("B", "I2", &["I1"]),
        ],
        incompatible: Vec::new(),
    }
}

pub fn mutual_trigger() -> Model {
    build_model(&mutual_trigger_document()).expect("well-formed")
}
