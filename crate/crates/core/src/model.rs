//! The decision model tuple, its well-formedness rules and derived relations.
//!
//! A model is `(issues, alternatives, issueFor, compatibleWith, triggeredBy)`:
//!
//! - every alternative solves exactly one declared issue;
//! - compatibility is symmetric and reflexive;
//! - an alternative never triggers its own issue.
//!
//! Compatibility between two distinct alternatives of the same issue carries
//! no meaning (a design picks at most one alternative per issue, and forcing
//! only looks across issues), so models are normalized to treat such pairs
//! as incompatible. [`validate`](Model::validate) enforces that convention
//! alongside the rules above.
//!
//! Lookups take `&str` and return items in declaration order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formats::ModelDocument;
use crate::ids::{AlternativeId, IssueId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub id: IssueId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub id: AlternativeId,
    pub label: String,
    pub issue: IssueId,
}

/// Raw model components, with no invariants enforced.
///
/// Alternatives missing from `compatible` have an empty compatibility set;
/// alternatives missing from `triggers` trigger nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelParts {
    pub name: String,
    pub issues: Vec<Issue>,
    pub alternatives: Vec<Alternative>,
    pub compatible: BTreeMap<AlternativeId, BTreeSet<AlternativeId>>,
    pub triggers: BTreeMap<AlternativeId, BTreeSet<IssueId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown issue `{0}`")]
    UnknownIssue(IssueId),
    #[error("unknown alternative `{0}`")]
    UnknownAlternative(AlternativeId),
}

/// Position-based view of a model used by the derived relations and the
/// semantic search. Dangling references are dropped here; they are reported
/// by validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Index {
    pub(crate) issue_pos: HashMap<IssueId, usize>,
    pub(crate) alt_pos: HashMap<AlternativeId, usize>,
    pub(crate) alt_issue: Vec<Option<usize>>,
    pub(crate) by_issue: Vec<Vec<usize>>,
    /// Row-major `|alternatives| x |alternatives|` matrix; `compat[a * n + b]`
    /// holds iff `b` is in `compatibleWith(a)`.
    compat: Vec<bool>,
    pub(crate) triggers: Vec<Vec<usize>>,
    pub(crate) supporters: Vec<Vec<usize>>,
}

impl Index {
    fn new(parts: &ModelParts) -> Self {
        let mut issue_pos = HashMap::new();
        for (pos, issue) in parts.issues.iter().enumerate() {
            issue_pos.entry(issue.id.clone()).or_insert(pos);
        }
        let mut alt_pos = HashMap::new();
        for (pos, alt) in parts.alternatives.iter().enumerate() {
            alt_pos.entry(alt.id.clone()).or_insert(pos);
        }
        let n = parts.alternatives.len();
        let alt_issue: Vec<Option<usize>> = parts
            .alternatives
            .iter()
            .map(|a| issue_pos.get(&a.issue).copied())
            .collect();
        let mut by_issue = vec![Vec::new(); parts.issues.len()];
        for (pos, issue) in alt_issue.iter().enumerate() {
            if let Some(i) = issue {
                by_issue[*i].push(pos);
            }
        }
        let mut compat = vec![false; n * n];
        let mut triggers = vec![Vec::new(); n];
        let mut supporters = vec![Vec::new(); parts.issues.len()];
        for (a, alt) in parts.alternatives.iter().enumerate() {
            if let Some(set) = parts.compatible.get(&alt.id) {
                for b in set.iter().filter_map(|id| alt_pos.get(id)) {
                    compat[a * n + b] = true;
                }
            }
            if let Some(set) = parts.triggers.get(&alt.id) {
                let mut issues: Vec<usize> = set
                    .iter()
                    .filter_map(|id| issue_pos.get(id).copied())
                    .collect();
                issues.sort_unstable();
                issues.dedup();
                for &i in &issues {
                    supporters[i].push(a);
                }
                triggers[a] = issues;
            }
        }
        Index {
            issue_pos,
            alt_pos,
            alt_issue,
            by_issue,
            compat,
            triggers,
            supporters,
        }
    }

    pub(crate) fn alt_count(&self) -> usize {
        self.alt_issue.len()
    }

    pub(crate) fn compatible(&self, a: usize, b: usize) -> bool {
        self.compat[a * self.alt_count() + b]
    }

    pub(crate) fn is_entry(&self, issue: usize) -> bool {
        self.supporters[issue].is_empty()
    }
}

/// An architectural decision model.
///
/// Construct one from a document with [`build_model`], which validates and
/// normalizes; [`Model::from_parts`] accepts anything and is meant for tests
/// and tools that want to inspect broken values with [`Model::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    parts: ModelParts,
    index: Index,
}

impl Model {
    /// Wraps raw parts without checking any invariant.
    pub fn from_parts(parts: ModelParts) -> Self {
        let index = Index::new(&parts);
        Model { parts, index }
    }

    pub fn parts(&self) -> &ModelParts {
        &self.parts
    }

    pub fn into_parts(self) -> ModelParts {
        self.parts
    }

    pub(crate) fn index(&self) -> &Index {
        &self.index
    }

    pub fn name(&self) -> &str {
        &self.parts.name
    }

    pub fn issues(&self) -> &[Issue] {
        &self.parts.issues
    }

    pub fn alternatives(&self) -> &[Alternative] {
        &self.parts.alternatives
    }

    pub fn issue(&self, id: &str) -> Result<&Issue, ModelError> {
        self.issue_pos(id).map(|i| &self.parts.issues[i])
    }

    pub fn alternative(&self, id: &str) -> Result<&Alternative, ModelError> {
        self.alt_pos(id).map(|a| &self.parts.alternatives[a])
    }

    pub(crate) fn issue_pos(&self, id: &str) -> Result<usize, ModelError> {
        self.index
            .issue_pos
            .get(id)
            .copied()
            .ok_or_else(|| ModelError::UnknownIssue(id.into()))
    }

    pub(crate) fn alt_pos(&self, id: &str) -> Result<usize, ModelError> {
        self.index
            .alt_pos
            .get(id)
            .copied()
            .ok_or_else(|| ModelError::UnknownAlternative(id.into()))
    }

    fn alt_ids(&self, positions: impl IntoIterator<Item = usize>) -> Vec<&AlternativeId> {
        positions
            .into_iter()
            .map(|a| &self.parts.alternatives[a].id)
            .collect()
    }

    /// The issue an alternative solves.
    pub fn issue_for(&self, alternative: &str) -> Result<&IssueId, ModelError> {
        let a = self.alt_pos(alternative)?;
        Ok(&self.parts.alternatives[a].issue)
    }

    /// `{ a : issueFor(a) = issue }`.
    pub fn alternatives_to(&self, issue: &str) -> Result<Vec<&AlternativeId>, ModelError> {
        let i = self.issue_pos(issue)?;
        Ok(self.alt_ids(self.index.by_issue[i].iter().copied()))
    }

    pub fn compatible_with(&self, alternative: &str) -> Result<Vec<&AlternativeId>, ModelError> {
        let a = self.alt_pos(alternative)?;
        Ok(self.alt_ids((0..self.index.alt_count()).filter(|&b| self.index.compatible(a, b))))
    }

    /// `alternatives \ compatibleWith(a)`. With same-issue normalization this
    /// includes every other alternative of `a`'s own issue.
    pub fn incompatible_with(&self, alternative: &str) -> Result<Vec<&AlternativeId>, ModelError> {
        let a = self.alt_pos(alternative)?;
        Ok(self.alt_ids((0..self.index.alt_count()).filter(|&b| !self.index.compatible(a, b))))
    }

    /// The part of [`incompatible_with`](Self::incompatible_with) that lies
    /// outside `a`'s own issue, i.e. what a document authors explicitly.
    pub fn cross_issue_incompatible(
        &self,
        alternative: &str,
    ) -> Result<Vec<&AlternativeId>, ModelError> {
        let a = self.alt_pos(alternative)?;
        let own = self.index.alt_issue[a];
        Ok(self.alt_ids(
            (0..self.index.alt_count())
                .filter(|&b| self.index.alt_issue[b] != own && !self.index.compatible(a, b)),
        ))
    }

    /// The alternatives *forced by* `a` (despite the name): those `a'` on a
    /// different issue that are compatible with `a` while every other
    /// alternative of `a'`'s issue is incompatible with `a`.
    pub fn forced_by(&self, alternative: &str) -> Result<Vec<&AlternativeId>, ModelError> {
        let a = self.alt_pos(alternative)?;
        let idx = &self.index;
        let own = idx.alt_issue[a];
        let forced = (0..idx.alt_count()).filter(|&b| {
            idx.compatible(a, b)
                && idx.alt_issue[b] != own
                && idx.alt_issue[b].is_none_or(|issue| {
                    idx.by_issue[issue]
                        .iter()
                        .all(|&other| other == b || !idx.compatible(a, other))
                })
        });
        Ok(self.alt_ids(forced))
    }

    /// Issues triggered by no alternative.
    pub fn entry_points(&self) -> Vec<&IssueId> {
        (0..self.parts.issues.len())
            .filter(|&i| self.index.is_entry(i))
            .map(|i| &self.parts.issues[i].id)
            .collect()
    }

    pub fn triggered_issues(&self, alternative: &str) -> Result<Vec<&IssueId>, ModelError> {
        let a = self.alt_pos(alternative)?;
        Ok(self.index.triggers[a]
            .iter()
            .map(|&i| &self.parts.issues[i].id)
            .collect())
    }

    /// Issues lying on a cycle of the issue-level trigger graph, where
    /// `i -> j` when some alternative of `i` triggers `j`.
    pub fn trigger_cycle_issues(&self) -> Vec<&IssueId> {
        let n = self.parts.issues.len();
        let mut succ = vec![BTreeSet::new(); n];
        for (a, issue) in self.index.alt_issue.iter().enumerate() {
            if let Some(i) = issue {
                succ[*i].extend(self.index.triggers[a].iter().copied());
            }
        }
        // i is on a cycle iff i is reachable from one of its successors.
        (0..n)
            .filter(|&start| {
                let mut seen = vec![false; n];
                let mut stack: Vec<usize> = succ[start].iter().copied().collect();
                while let Some(i) = stack.pop() {
                    if i == start {
                        return true;
                    }
                    if !std::mem::replace(&mut seen[i], true) {
                        stack.extend(succ[i].iter().copied());
                    }
                }
                false
            })
            .map(|i| &self.parts.issues[i].id)
            .collect()
    }

    pub fn has_trigger_cycle(&self) -> bool {
        !self.trigger_cycle_issues().is_empty()
    }

    /// Checks every well-formedness rule and collects the lints.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let parts = &self.parts;
        check_identifiers(
            parts.issues.iter().map(|i| i.id.as_str()),
            parts.alternatives.iter().map(|a| a.id.as_str()),
            &mut report,
        );

        let issue_ids: BTreeSet<&str> = parts.issues.iter().map(|i| i.id.as_str()).collect();
        let alt_ids: BTreeSet<&str> = parts.alternatives.iter().map(|a| a.id.as_str()).collect();
        for alt in &parts.alternatives {
            if !issue_ids.contains(alt.issue.as_str()) {
                report.violation(
                    Rule::DanglingIssueFor,
                    format!(
                        "alternative `{}` solves undeclared issue `{}`",
                        alt.id, alt.issue
                    ),
                    [alt.id.as_str(), alt.issue.as_str()],
                );
            }
        }
        for (a, set) in &parts.compatible {
            for b in std::iter::once(a).chain(set) {
                if !alt_ids.contains(b.as_str()) {
                    report.violation(
                        Rule::UnknownReference,
                        format!("compatibility of `{a}` mentions undeclared alternative `{b}`"),
                        [a.as_str(), b.as_str()],
                    );
                }
            }
        }
        for (a, set) in &parts.triggers {
            if !alt_ids.contains(a.as_str()) {
                report.violation(
                    Rule::UnknownReference,
                    format!("triggers declared for undeclared alternative `{a}`"),
                    [a.as_str()],
                );
            }
            for i in set {
                if !issue_ids.contains(i.as_str()) {
                    report.violation(
                        Rule::UnknownReference,
                        format!("alternative `{a}` triggers undeclared issue `{i}`"),
                        [a.as_str(), i.as_str()],
                    );
                }
            }
        }

        let empty = BTreeSet::new();
        let compat_of = |id: &AlternativeId| parts.compatible.get(id).unwrap_or(&empty);
        for (pos, alt) in parts.alternatives.iter().enumerate() {
            let compat = compat_of(&alt.id);
            if !compat.contains(&alt.id) {
                report.violation(
                    Rule::CompatIrreflexive,
                    format!("alternative `{}` is not compatible with itself", alt.id),
                    [alt.id.as_str()],
                );
            }
            for other in &parts.alternatives[pos + 1..] {
                let forward = compat.contains(&other.id);
                let backward = compat_of(&other.id).contains(&alt.id);
                if forward != backward {
                    let (from, to) = if forward { (alt, other) } else { (other, alt) };
                    report.violation(
                        Rule::CompatAsymmetric,
                        format!(
                            "`{}` lists `{}` as compatible but not the other way round",
                            from.id, to.id
                        ),
                        [from.id.as_str(), to.id.as_str()],
                    );
                }
                if alt.issue == other.issue && (forward || backward) {
                    report.violation(
                        Rule::SameIssueCompatible,
                        format!(
                            "`{}` and `{}` both solve `{}` and must be incompatible",
                            alt.id, other.id, alt.issue
                        ),
                        [alt.id.as_str(), other.id.as_str()],
                    );
                }
            }
            if parts
                .triggers
                .get(&alt.id)
                .is_some_and(|t| t.contains(&alt.issue))
            {
                report.violation(
                    Rule::SelfTrigger,
                    format!(
                        "alternative `{}` triggers its own issue `{}`",
                        alt.id, alt.issue
                    ),
                    [alt.id.as_str(), alt.issue.as_str()],
                );
            }
        }

        report.lints = self.lints();
        report
    }

    /// Non-fatal findings: trigger cycles and issues without alternatives.
    pub fn lints(&self) -> Vec<Violation> {
        let mut lints = Vec::new();
        let cycle = self.trigger_cycle_issues();
        if !cycle.is_empty() {
            lints.push(Violation {
                rule: Rule::TriggerCycle,
                message: format!(
                    "issues {} trigger each other in a cycle",
                    join_ticked(cycle.iter().map(|i| i.as_str()))
                ),
                witnesses: cycle.iter().map(|i| i.to_string()).collect(),
            });
        }
        for (i, issue) in self.parts.issues.iter().enumerate() {
            if self.index.by_issue[i].is_empty() {
                let message = if self.index.is_entry(i) {
                    format!(
                        "entry-point issue `{}` has no alternatives; the model is inconsistent",
                        issue.id
                    )
                } else {
                    format!(
                        "issue `{}` has no alternatives; its triggering alternatives can never be chosen",
                        issue.id
                    )
                };
                lints.push(Violation {
                    rule: Rule::UnresolvableIssue,
                    message,
                    witnesses: vec![issue.id.to_string()],
                });
            }
        }
        lints
    }
}

fn join_ticked<'a>(items: impl Iterator<Item = &'a str>) -> String {
    items
        .map(|s| format!("`{s}`"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn check_identifiers<'a>(
    issues: impl Iterator<Item = &'a str>,
    alternatives: impl Iterator<Item = &'a str>,
    report: &mut ValidationReport,
) {
    let mut seen = BTreeSet::new();
    for id in issues {
        if id.is_empty() {
            report.violation(Rule::EmptyId, "issue with an empty id".into(), []);
        } else if !seen.insert(id) {
            report.violation(
                Rule::DuplicateIssue,
                format!("issue `{id}` is declared more than once"),
                [id],
            );
        }
    }
    let mut seen = BTreeSet::new();
    for id in alternatives {
        if id.is_empty() {
            report.violation(Rule::EmptyId, "alternative with an empty id".into(), []);
        } else if !seen.insert(id) {
            report.violation(
                Rule::DuplicateAlternative,
                format!("alternative `{id}` is declared more than once"),
                [id],
            );
        }
    }
}

/// Builds a normalized model from a document.
///
/// Compatibility is the complement of the listed incompatible pairs across
/// issues, made symmetric, reflexive, and empty between distinct
/// alternatives of one issue. On failure every violated rule is reported.
pub fn build_model(doc: &ModelDocument) -> Result<Model, ValidationReport> {
    let mut report = ValidationReport::default();
    check_identifiers(
        doc.issues.iter().map(|i| i.id.as_str()),
        doc.alternatives.iter().map(|a| a.id.as_str()),
        &mut report,
    );

    let issue_ids: BTreeSet<&str> = doc.issues.iter().map(|i| i.id.as_str()).collect();
    let issue_of: HashMap<&str, &str> = doc
        .alternatives
        .iter()
        .map(|a| (a.id.as_str(), a.issue.as_str()))
        .collect();

    for alt in &doc.alternatives {
        if !issue_ids.contains(alt.issue.as_str()) {
            report.violation(
                Rule::DanglingIssueFor,
                format!(
                    "alternative `{}` solves undeclared issue `{}`",
                    alt.id, alt.issue
                ),
                [alt.id.as_str(), alt.issue.as_str()],
            );
        }
        for t in &alt.triggers {
            if !issue_ids.contains(t.as_str()) {
                report.violation(
                    Rule::UnknownReference,
                    format!("alternative `{}` triggers undeclared issue `{t}`", alt.id),
                    [alt.id.as_str(), t.as_str()],
                );
            } else if *t == alt.issue {
                report.violation(
                    Rule::SelfTrigger,
                    format!("alternative `{}` triggers its own issue `{t}`", alt.id),
                    [alt.id.as_str(), t.as_str()],
                );
            }
        }
    }

    let mut incompatible: BTreeSet<(&str, &str)> = BTreeSet::new();
    for pair in &doc.incompatible {
        let (a, b) = (pair.0.as_str(), pair.1.as_str());
        if a == b {
            report.violation(
                Rule::SelfIncompatible,
                format!("alternative `{a}` cannot be incompatible with itself"),
                [a],
            );
            continue;
        }
        let mut known = true;
        for x in [a, b] {
            if !issue_of.contains_key(x) {
                report.violation(
                    Rule::UnknownReference,
                    format!("incompatible pair mentions undeclared alternative `{x}`"),
                    [a, b],
                );
                known = false;
            }
        }
        if known && issue_of[a] == issue_of[b] {
            report.violation(
                Rule::SameIssuePair,
                format!(
                    "`{a}` and `{b}` both solve `{}`; same-issue alternatives are always incompatible",
                    issue_of[a]
                ),
                [a, b],
            );
        }
        incompatible.insert((a, b));
        incompatible.insert((b, a));
    }

    if !report.is_well_formed() {
        return Err(report);
    }

    let mut compatible = BTreeMap::new();
    let mut triggers = BTreeMap::new();
    for alt in &doc.alternatives {
        let set: BTreeSet<AlternativeId> = doc
            .alternatives
            .iter()
            .filter(|other| {
                other.id == alt.id
                    || (other.issue != alt.issue
                        && !incompatible.contains(&(alt.id.as_str(), other.id.as_str())))
            })
            .map(|other| other.id.clone())
            .collect();
        compatible.insert(alt.id.clone(), set);
        if !alt.triggers.is_empty() {
            triggers.insert(alt.id.clone(), alt.triggers.iter().cloned().collect());
        }
    }

    Ok(Model::from_parts(ModelParts {
        name: doc.name.clone(),
        issues: doc
            .issues
            .iter()
            .map(|i| Issue {
                id: i.id.clone(),
                label: i.label.clone(),
            })
            .collect(),
        alternatives: doc
            .alternatives
            .iter()
            .map(|a| Alternative {
                id: a.id.clone(),
                label: a.label.clone(),
                issue: a.issue.clone(),
            })
            .collect(),
        compatible,
        triggers,
    }))
}

/// Validates a document: build failures, or the built model's lints.
pub fn validate_document(doc: &ModelDocument) -> ValidationReport {
    match build_model(doc) {
        Ok(model) => model.validate(),
        Err(report) => report,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    EmptyId,
    DuplicateIssue,
    DuplicateAlternative,
    DanglingIssueFor,
    UnknownReference,
    SelfTrigger,
    SelfIncompatible,
    SameIssuePair,
    CompatAsymmetric,
    CompatIrreflexive,
    SameIssueCompatible,
    // lints
    TriggerCycle,
    UnresolvableIssue,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::EmptyId => "empty-id",
            Rule::DuplicateIssue => "duplicate-issue",
            Rule::DuplicateAlternative => "duplicate-alternative",
            Rule::DanglingIssueFor => "dangling-issue-for",
            Rule::UnknownReference => "unknown-reference",
            Rule::SelfTrigger => "self-trigger",
            Rule::SelfIncompatible => "self-incompatible",
            Rule::SameIssuePair => "same-issue-pair",
            Rule::CompatAsymmetric => "compat-asymmetric",
            Rule::CompatIrreflexive => "compat-irreflexive",
            Rule::SameIssueCompatible => "same-issue-compatible",
            Rule::TriggerCycle => "trigger-cycle",
            Rule::UnresolvableIssue => "unresolvable-issue",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub well_formed: bool,
    pub violations: Vec<Violation>,
    pub lints: Vec<Violation>,
}

impl Default for ValidationReport {
    fn default() -> Self {
        ValidationReport {
            well_formed: true,
            violations: Vec::new(),
            lints: Vec::new(),
        }
    }
}

impl ValidationReport {
    pub fn is_well_formed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.violations.iter().map(|v| v.rule).collect()
    }

    fn violation<'a>(
        &mut self,
        rule: Rule,
        message: String,
        witnesses: impl IntoIterator<Item = &'a str>,
    ) {
        self.violations.push(Violation {
            rule,
            message,
            witnesses: witnesses.into_iter().map(str::to_owned).collect(),
        });
        self.well_formed = false;
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_well_formed() {
            writeln!(f, "well-formed")?;
        }
        for v in &self.violations {
            writeln!(f, "error[{}]: {}", v.rule, v.message)?;
        }
        for v in &self.lints {
            writeln!(f, "warning[{}]: {}", v.rule, v.message)?;
        }
        Ok(())
    }
}
