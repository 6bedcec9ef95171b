//! Random well-formed model documents, sized for the brute-force oracle.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formats::{AlternativeEntry, IncompatiblePair, IssueEntry, ModelDocument};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub max_issues: usize,
    pub max_alternatives: usize,
    /// Probability that a given cross-issue pair is incompatible.
    pub incompatibility: f64,
    /// Probability that an alternative triggers a given other issue.
    pub trigger: f64,
    /// Allow triggers towards earlier issues, which can close cycles.
    pub cyclic: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_issues: 8,
            max_alternatives: 6,
            incompatibility: 0.15,
            trigger: 0.08,
            cyclic: false,
        }
    }
}

/// A random document that [`build_model`](crate::model::build_model)
/// accepts. Issues may have zero alternatives.
pub fn random_document<R: Rng + ?Sized>(rng: &mut R, config: &GenConfig) -> ModelDocument {
    let issue_count = rng.gen_range(0..=config.max_issues);
    let issues: Vec<IssueEntry> = (0..issue_count)
        .map(|i| IssueEntry {
            id: format!("I{i}").into(),
            label: format!("Issue {i}"),
        })
        .collect();

    let mut alternatives = Vec::new();
    for (i, _) in issues.iter().enumerate() {
        let count = if rng.gen_bool(0.05) {
            0
        } else {
            rng.gen_range(1..=config.max_alternatives.max(1))
        };
        for k in 0..count {
            let triggers = (0..issue_count)
                .filter(|&t| t != i && (config.cyclic || t > i) && rng.gen_bool(config.trigger))
                .map(|t| format!("I{t}").into())
                .collect();
            alternatives.push(AlternativeEntry {
                id: format!("A{i}_{k}").into(),
                label: format!("Alternative {i}.{k}"),
                issue: format!("I{i}").into(),
                triggers,
            });
        }
    }

    let mut incompatible = Vec::new();
    for (x, a) in alternatives.iter().enumerate() {
        for b in &alternatives[x + 1..] {
            if a.issue != b.issue && rng.gen_bool(config.incompatibility) {
                incompatible.push(if rng.gen_bool(0.5) {
                    IncompatiblePair(a.id.clone(), b.id.clone())
                } else {
                    IncompatiblePair(b.id.clone(), a.id.clone())
                });
            }
        }
    }
    incompatible.shuffle(rng);

    ModelDocument {
        name: format!("random-{issue_count}"),
        issues,
        alternatives,
        incompatible,
    }
}
