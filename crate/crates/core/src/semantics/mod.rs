//! Conformity of designs, the meaning of a model and consistency.
//!
//! The meaning of a model is the set of all designs that conform to it; a
//! model is consistent when its meaning is non-empty. Conformity follows the
//! four conditions literally, including the biconditional on trigger
//! support: on models with trigger cycles, resolved issues may support each
//! other with no chain from an entry point. [`well_founded_filter`] drops
//! such designs for callers who want only founded ones.

mod conformity;
mod design;
mod oracle;
mod search;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

pub use conformity::{conforms, Condition, ConformityReport, ConformityViolation};
pub use design::Design;
pub use oracle::{brute_force_meaning, OracleError, ORACLE_MAX_ALTERNATIVES, ORACLE_MAX_ISSUES};
pub use search::{for_each_design, for_each_extension};

use crate::model::Model;

/// Conforming designs in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meaning {
    pub designs: Vec<Design>,
    /// Set when an enumeration limit cut the list short.
    pub truncated: bool,
}

impl Meaning {
    pub fn len(&self) -> usize {
        self.designs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.designs.is_empty()
    }

    pub fn as_set(&self) -> BTreeSet<&Design> {
        self.designs.iter().collect()
    }
}

/// All conforming designs, or the first `limit` of them in canonical order.
/// `truncated` is set only when further designs exist past the limit.
pub fn meaning_of(model: &Model, limit: Option<usize>) -> Meaning {
    collect_meaning(model, limit, false)
}

/// Like [`meaning_of`], optionally keeping only well-founded designs; the
/// limit applies after filtering.
pub fn collect_meaning(model: &Model, limit: Option<usize>, well_founded: bool) -> Meaning {
    let mut meaning = Meaning::default();
    for_each_design(model, |design| {
        if well_founded && !is_well_founded(model, &design) {
            return ControlFlow::Continue(());
        }
        if limit.is_some_and(|l| meaning.designs.len() >= l) {
            meaning.truncated = true;
            return ControlFlow::Break(());
        }
        meaning.designs.push(design);
        ControlFlow::Continue(())
    });
    meaning
}

/// Stops at the first conforming design found.
pub fn is_consistent(model: &Model) -> bool {
    is_viable(model, &Design::new())
}

/// Whether some conforming design contains `partial`.
pub fn is_viable(model: &Model, partial: &Design) -> bool {
    let mut found = false;
    for_each_extension(model, partial, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

/// Whether every resolved issue of `design` is reached from a resolved entry
/// point through a chain of selections that trigger one another.
pub fn is_well_founded(model: &Model, design: &Design) -> bool {
    let mut founded: BTreeSet<&str> = model
        .entry_points()
        .into_iter()
        .map(|i| i.as_str())
        .filter(|i| design.contains_issue(i))
        .collect();
    let mut frontier: Vec<&str> = founded.iter().copied().collect();
    while let Some(issue) = frontier.pop() {
        let Some(alt) = design.get(issue) else {
            continue;
        };
        let Ok(triggered) = model.triggered_issues(alt.as_str()) else {
            continue;
        };
        for t in triggered {
            if design.contains_issue(t.as_str()) && founded.insert(t.as_str()) {
                frontier.push(t.as_str());
            }
        }
    }
    design
        .iter()
        .all(|(issue, _)| founded.contains(issue.as_str()))
}

/// Keeps only well-founded designs. A no-op on models without trigger
/// cycles.
pub fn well_founded_filter(model: &Model, meaning: Meaning) -> Meaning {
    Meaning {
        designs: meaning
            .designs
            .into_iter()
            .filter(|d| is_well_founded(model, d))
            .collect(),
        truncated: meaning.truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formats::{AlternativeEntry, IncompatiblePair, IssueEntry, ModelDocument};
    use crate::model::build_model;

    fn design(entries: &[(&str, &str)]) -> Design {
        entries.iter().copied().collect()
    }

    fn doc(
        issues: &[&str],
        alts: &[(&str, &str, &[&str])],
        pairs: &[(&str, &str)],
    ) -> ModelDocument {
        ModelDocument {
            name: "t".into(),
            issues: issues
                .iter()
                .map(|i| IssueEntry {
                    id: (*i).into(),
                    label: (*i).into(),
                })
                .collect(),
            alternatives: alts
                .iter()
                .map(|(id, issue, triggers)| AlternativeEntry {
                    id: (*id).into(),
                    label: (*id).into(),
                    issue: (*issue).into(),
                    triggers: triggers.iter().map(|&t| t.into()).collect(),
                })
                .collect(),
            incompatible: pairs
                .iter()
                .map(|&(a, b)| IncompatiblePair::new(a, b))
                .collect(),
        }
    }

    #[test]
    fn empty_model_has_only_the_empty_design() {
        let model = build_model(&ModelDocument::empty("e")).unwrap();
        let meaning = meaning_of(&model, None);
        assert_eq!(meaning.designs, vec![Design::new()]);
        assert!(!meaning.truncated);
        assert!(is_consistent(&model));
        assert!(conforms(&Design::new(), &model).conforms);
    }

    #[test]
    fn single_issue_two_alternatives() {
        let model = build_model(&doc(&["I"], &[("A", "I", &[]), ("B", "I", &[])], &[])).unwrap();
        let meaning = meaning_of(&model, None);
        assert_eq!(
            meaning.designs,
            vec![design(&[("I", "A")]), design(&[("I", "B")])]
        );
    }

    #[test]
    fn toy_inconsistent_model() {
        let model = fixtures::inconsistent_toy();
        assert!(meaning_of(&model, None).is_empty());
        assert!(!is_consistent(&model));
        assert_eq!(
            meaning_of(&model, None),
            brute_force_meaning(&model).unwrap()
        );
    }

    #[test]
    fn mutual_trigger_cycle_supports_itself() {
        // E is the only entry point; I1 and I2 trigger each other.
        let model = fixtures::mutual_trigger();
        let meaning = meaning_of(&model, None);
        let cyclic = design(&[("E", "X"), ("I1", "A"), ("I2", "B")]);
        assert!(meaning.designs.contains(&cyclic));
        assert!(conforms(&cyclic, &model).conforms);
        assert!(!is_well_founded(&model, &cyclic));
        let filtered = well_founded_filter(&model, meaning.clone());
        assert_eq!(filtered.designs, vec![design(&[("E", "X")])]);
        assert_eq!(meaning, brute_force_meaning(&model).unwrap());
    }

    #[test]
    fn limit_sets_truncated_only_when_more_exist() {
        let model = build_model(&doc(&["I"], &[("A", "I", &[]), ("B", "I", &[])], &[])).unwrap();
        let one = meaning_of(&model, Some(1));
        assert_eq!(one.len(), 1);
        assert!(one.truncated);
        let two = meaning_of(&model, Some(2));
        assert_eq!(two.len(), 2);
        assert!(!two.truncated);
        assert!(meaning_of(&model, Some(0)).truncated);
    }

    #[test]
    fn viability_respects_partial_designs() {
        let model = build_model(&doc(
            &["I", "J"],
            &[("A", "I", &[]), ("B", "I", &[]), ("C", "J", &[])],
            &[("A", "C")],
        ))
        .unwrap();
        assert!(is_viable(&model, &design(&[("I", "B")])));
        assert!(!is_viable(&model, &design(&[("I", "A")])));
        assert!(!is_viable(&model, &design(&[("J", "A")])));
        assert!(!is_viable(&model, &design(&[("Nope", "A")])));
        assert_eq!(is_viable(&model, &Design::new()), is_consistent(&model));
    }

    #[test]
    fn conformity_reports_each_condition() {
        let model = build_model(&doc(
            &["I", "J", "K"],
            &[
                ("A", "I", &["K"]),
                ("B", "I", &[]),
                ("C", "J", &[]),
                ("D", "K", &[]),
            ],
            &[("B", "C")],
        ))
        .unwrap();
        let report = conforms(&design(&[("Z", "A")]), &model);
        assert!(report.conditions().contains(&Condition::C1));
        let report = conforms(&design(&[("I", "C"), ("J", "C")]), &model);
        assert_eq!(report.violations[0].condition, Condition::C2);
        let report = conforms(&design(&[("I", "B"), ("J", "C")]), &model);
        assert_eq!(report.conditions(), vec![Condition::C3]);
        assert_eq!(report.violations[0].witnesses, vec!["B", "C"]);
        let report = conforms(&design(&[("I", "A"), ("J", "C")]), &model);
        assert_eq!(report.conditions(), vec![Condition::C4Missing]);
        assert_eq!(report.violations[0].witnesses, vec!["K"]);
        let report = conforms(&design(&[("I", "B"), ("K", "D")]), &model);
        assert_eq!(
            report.conditions(),
            vec![Condition::C4Missing, Condition::C4Extra]
        );
    }
}
