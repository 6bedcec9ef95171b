//! Interactive decision process over a model.
//!
//! A session starts with the entry points pending. Choosing an alternative
//! resolves its issue and makes the issues it triggers pending; choices
//! incompatible with earlier ones are rejected. Retracting a choice also
//! drops every choice that lost its trigger support, transitively.
//!
//! At all times the choices satisfy the first three conformity conditions,
//! and `pending ∪ dom(choices)` is exactly the set of entry points plus the
//! issues triggered by the chosen alternatives; a session with nothing
//! pending holds a conforming design.

use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::{AlternativeId, IssueId};
use crate::model::Model;
use crate::semantics::{is_viable, Design};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("the model's trigger relation is cyclic; sessions need an acyclic model")]
    CyclicModel,
    #[error("issue `{0}` is not pending")]
    NotPending(IssueId),
    #[error("`{alternative}` is not an alternative of issue `{issue}`")]
    WrongIssue {
        issue: IssueId,
        alternative: AlternativeId,
    },
    #[error("`{requested}` is incompatible with the chosen `{chosen}`")]
    IncompatibleChoice {
        chosen: AlternativeId,
        requested: AlternativeId,
    },
    #[error("issue `{0}` has no choice to retract")]
    NotResolved(IssueId),
}

impl SessionError {
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::CyclicModel => "cyclic-model",
            SessionError::NotPending(_) => "not-pending",
            SessionError::WrongIssue { .. } => "wrong-issue",
            SessionError::IncompatibleChoice { .. } => "incompatible-choice",
            SessionError::NotResolved(_) => "not-resolved",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Choose,
    Retract,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HistoryEntry {
    pub action: Action,
    pub issue: IssueId,
    pub alternative: AlternativeId,
    /// Set on retractions caused by retracting another choice.
    pub cascade: bool,
    /// Milliseconds since the Unix epoch.
    pub at: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionStatus {
    pub complete: bool,
    pub viable: bool,
    pub pending_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeOption {
    pub alternative: AlternativeId,
    pub viable: bool,
}

/// An alternative ruled out by the current choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExcludedAlternative {
    pub alternative: AlternativeId,
    pub conflicts_with: Vec<AlternativeId>,
}

#[derive(Debug, Clone)]
pub struct DecisionSession {
    model: Arc<Model>,
    choices: Design,
    pending: Vec<IssueId>,
    history: Vec<HistoryEntry>,
}

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

impl DecisionSession {
    pub fn new(model: Arc<Model>) -> Result<Self, SessionError> {
        if model.has_trigger_cycle() {
            return Err(SessionError::CyclicModel);
        }
        let mut session = DecisionSession {
            model,
            choices: Design::new(),
            pending: Vec::new(),
            history: Vec::new(),
        };
        session.refresh_pending();
        Ok(session)
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn choices(&self) -> &Design {
        &self.choices
    }

    /// Unresolved issues that must be resolved, in declaration order.
    pub fn pending(&self) -> &[IssueId] {
        &self.pending
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    fn is_pending(&self, issue: &str) -> bool {
        self.pending.iter().any(|p| p.as_str() == issue)
    }

    /// Entry points plus issues triggered by a chosen alternative.
    fn required(&self, issue: &str) -> bool {
        let entry = self
            .model
            .entry_points()
            .iter()
            .any(|e| e.as_str() == issue);
        entry
            || self.choices.iter().any(|(_, alt)| {
                self.model
                    .triggered_issues(alt.as_str())
                    .is_ok_and(|t| t.iter().any(|t| t.as_str() == issue))
            })
    }

    fn refresh_pending(&mut self) {
        self.pending = self
            .model
            .issues()
            .iter()
            .filter(|i| !self.choices.contains_issue(i.id.as_str()) && self.required(i.id.as_str()))
            .map(|i| i.id.clone())
            .collect();
    }

    fn conflicts(&self, alternative: &str) -> Vec<AlternativeId> {
        let Ok(incompatible) = self.model.incompatible_with(alternative) else {
            return Vec::new();
        };
        self.choices
            .canonical_entries(&self.model)
            .into_iter()
            .filter(|(_, chosen)| incompatible.contains(chosen))
            .map(|(_, chosen)| chosen.clone())
            .collect()
    }

    /// Alternatives of a pending issue compatible with every choice so far,
    /// each flagged with whether a conforming design still extends it.
    pub fn allowed_alternatives(
        &self,
        issue: &str,
    ) -> Result<Vec<AlternativeOption>, SessionError> {
        if !self.is_pending(issue) {
            return Err(SessionError::NotPending(issue.into()));
        }
        let alternatives = self.model.alternatives_to(issue).unwrap_or_default();
        Ok(alternatives
            .into_iter()
            .filter(|a| self.conflicts(a.as_str()).is_empty())
            .map(|a| {
                let mut extended = self.choices.clone();
                extended.insert(issue, a.clone());
                AlternativeOption {
                    alternative: a.clone(),
                    viable: is_viable(&self.model, &extended),
                }
            })
            .collect())
    }

    /// Alternatives of a pending issue that conflict with a choice, with the
    /// conflicting chosen alternatives.
    pub fn excluded_alternatives(
        &self,
        issue: &str,
    ) -> Result<Vec<ExcludedAlternative>, SessionError> {
        if !self.is_pending(issue) {
            return Err(SessionError::NotPending(issue.into()));
        }
        let alternatives = self.model.alternatives_to(issue).unwrap_or_default();
        Ok(alternatives
            .into_iter()
            .filter_map(|a| {
                let conflicts_with = self.conflicts(a.as_str());
                (!conflicts_with.is_empty()).then(|| ExcludedAlternative {
                    alternative: a.clone(),
                    conflicts_with,
                })
            })
            .collect())
    }

    /// Resolves a pending issue. Viability is not required.
    pub fn choose(&mut self, issue: &str, alternative: &str) -> Result<(), SessionError> {
        if !self.is_pending(issue) {
            return Err(SessionError::NotPending(issue.into()));
        }
        if self.model.issue_for(alternative).map(|i| i.as_str()) != Ok(issue) {
            return Err(SessionError::WrongIssue {
                issue: issue.into(),
                alternative: alternative.into(),
            });
        }
        if let Some(chosen) = self.conflicts(alternative).into_iter().next() {
            return Err(SessionError::IncompatibleChoice {
                chosen,
                requested: alternative.into(),
            });
        }
        self.choices.insert(issue, alternative);
        self.history.push(HistoryEntry {
            action: Action::Choose,
            issue: issue.into(),
            alternative: alternative.into(),
            cascade: false,
            at: now_millis(),
        });
        self.refresh_pending();
        Ok(())
    }

    /// Removes the choice for `issue` and every choice left without trigger
    /// support. Returns the issues whose choices were removed, starting with
    /// `issue`.
    pub fn retract(&mut self, issue: &str) -> Result<Vec<IssueId>, SessionError> {
        let Some(alternative) = self.choices.remove(issue) else {
            return Err(SessionError::NotResolved(issue.into()));
        };
        let at = now_millis();
        self.history.push(HistoryEntry {
            action: Action::Retract,
            issue: issue.into(),
            alternative,
            cascade: false,
            at,
        });
        let mut removed = vec![IssueId::from(issue)];
        loop {
            let orphan = self
                .choices
                .canonical_entries(&self.model)
                .into_iter()
                .find(|(i, _)| !self.required(i.as_str()))
                .map(|(i, _)| i.clone());
            let Some(orphan) = orphan else { break };
            let alternative = self
                .choices
                .remove(orphan.as_str())
                .expect("orphan is chosen");
            self.history.push(HistoryEntry {
                action: Action::Retract,
                issue: orphan.clone(),
                alternative,
                cascade: true,
                at,
            });
            removed.push(orphan);
        }
        self.refresh_pending();
        Ok(removed)
    }

    pub fn status(&self) -> SessionStatus {
        SessionStatus {
            complete: self.pending.is_empty(),
            viable: is_viable(&self.model, &self.choices),
            pending_count: self.pending.len(),
        }
    }
}
