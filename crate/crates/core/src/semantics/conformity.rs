use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Design;
use crate::model::Model;

/// The conformity condition a violation instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// A resolved issue is not declared by the model.
    C1,
    /// The selection for an issue is not one of its alternatives.
    C2,
    /// Two selections are incompatible.
    C3,
    /// An issue that must be resolved (entry point, or triggered by a
    /// selection) is not.
    #[serde(rename = "C4-missing")]
    C4Missing,
    /// A resolved issue is neither an entry point nor triggered by any
    /// selection.
    #[serde(rename = "C4-extra")]
    C4Extra,
}

impl Condition {
    pub fn as_str(self) -> &'static str {
        match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::C3 => "C3",
            Condition::C4Missing => "C4-missing",
            Condition::C4Extra => "C4-extra",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformityViolation {
    pub condition: Condition,
    pub message: String,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformityReport {
    pub conforms: bool,
    pub violations: Vec<ConformityViolation>,
}

impl ConformityReport {
    pub fn conditions(&self) -> Vec<Condition> {
        self.violations.iter().map(|v| v.condition).collect()
    }
}

impl fmt::Display for ConformityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conforms {
            return writeln!(f, "conforms");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.condition, v.message)?;
        }
        Ok(())
    }
}

/// Checks a design against the four conformity conditions and reports
/// every violation with its witnesses.
///
/// The compatibility condition is evaluated over all ordered pairs of
/// resolved issues, including an issue paired with itself, so a model value
/// whose compatibility is not reflexive is caught here too.
pub fn conforms(design: &Design, model: &Model) -> ConformityReport {
    let idx = model.index();
    let mut violations = Vec::new();
    let entries = design.canonical_entries(model);

    // Positions of the model alternatives selected for model issues.
    let mut selected = Vec::with_capacity(entries.len());
    for (issue, alt) in &entries {
        let Ok(i) = model.issue_pos(issue.as_str()) else {
            violations.push(ConformityViolation {
                condition: Condition::C1,
                message: format!("issue {issue} is not defined by the model"),
                witnesses: vec![issue.to_string()],
            });
            continue;
        };
        match model.alt_pos(alt.as_str()) {
            Ok(a) if idx.alt_issue[a] == Some(i) => selected.push(a),
            found => {
                violations.push(ConformityViolation {
                    condition: Condition::C2,
                    message: format!("{alt} is not an alternative of issue {issue}"),
                    witnesses: vec![issue.to_string(), alt.to_string()],
                });
                if let Ok(a) = found {
                    selected.push(a);
                }
            }
        }
    }

    let mut reported = BTreeSet::new();
    for &a in &selected {
        for &b in &selected {
            if !idx.compatible(a, b) && reported.insert((a.min(b), a.max(b))) {
                let (x, y) = (&model.alternatives()[a].id, &model.alternatives()[b].id);
                violations.push(ConformityViolation {
                    condition: Condition::C3,
                    message: format!("{x} incompatible with {y}"),
                    witnesses: vec![x.to_string(), y.to_string()],
                });
            }
        }
    }

    for (i, issue) in model.issues().iter().enumerate() {
        let resolved = design.contains_issue(issue.id.as_str());
        let triggering: Vec<&str> = selected
            .iter()
            .filter(|&&a| idx.triggers[a].contains(&i))
            .map(|&a| model.alternatives()[a].id.as_str())
            .collect();
        let entry = idx.is_entry(i);
        let required = entry || !triggering.is_empty();
        if required && !resolved {
            let message = if entry {
                format!("entry-point issue {} is unresolved", issue.id)
            } else {
                format!(
                    "issue {} is triggered by {} but unresolved",
                    issue.id,
                    triggering.join(", ")
                )
            };
            violations.push(ConformityViolation {
                condition: Condition::C4Missing,
                message,
                witnesses: vec![issue.id.to_string()],
            });
        } else if resolved && !required {
            violations.push(ConformityViolation {
                condition: Condition::C4Extra,
                message: format!(
                    "issue {} is resolved but no selected alternative triggers it",
                    issue.id
                ),
                witnesses: vec![issue.id.to_string()],
            });
        }
    }

    ConformityReport {
        conforms: violations.is_empty(),
        violations,
    }
}
