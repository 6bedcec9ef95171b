use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ids::{AlternativeId, IssueId};
use crate::model::Model;

/// A partial function from issues to the alternatives selected for them.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Design(BTreeMap<IssueId, AlternativeId>);

impl Design {
    pub fn new() -> Self {
        Design::default()
    }

    /// Selects `alternative` for `issue`, returning the previous selection.
    pub fn insert(
        &mut self,
        issue: impl Into<IssueId>,
        alternative: impl Into<AlternativeId>,
    ) -> Option<AlternativeId> {
        self.0.insert(issue.into(), alternative.into())
    }

    pub fn remove(&mut self, issue: &str) -> Option<AlternativeId> {
        self.0.remove(issue)
    }

    pub fn get(&self, issue: &str) -> Option<&AlternativeId> {
        self.0.get(issue)
    }

    pub fn contains_issue(&self, issue: &str) -> bool {
        self.0.contains_key(issue)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, IssueId, AlternativeId> {
        self.0.iter()
    }

    /// The resolved issues.
    pub fn dom(&self) -> BTreeSet<&IssueId> {
        self.0.keys().collect()
    }

    /// The selected alternatives.
    pub fn rng(&self) -> BTreeSet<&AlternativeId> {
        self.0.values().collect()
    }

    /// True when every entry of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &Design) -> bool {
        self.0.iter().all(|(i, a)| other.0.get(i) == Some(a))
    }

    /// Entries in model declaration order; issues unknown to the model come
    /// last, ordered by id.
    pub fn canonical_entries<'a>(
        &'a self,
        model: &'a Model,
    ) -> Vec<(&'a IssueId, &'a AlternativeId)> {
        let mut entries: Vec<_> = model
            .issues()
            .iter()
            .filter_map(|i| self.0.get_key_value(i.id.as_str()))
            .collect();
        entries.extend(
            self.0
                .iter()
                .filter(|(i, _)| model.issue(i.as_str()).is_err()),
        );
        entries
    }

    /// Sort key for the canonical enumeration order: per issue in declaration
    /// order, the position of the chosen alternative among that issue's
    /// alternatives, with unresolved sorting last.
    pub fn order_key(&self, model: &Model) -> Vec<usize> {
        let idx = model.index();
        model
            .issues()
            .iter()
            .enumerate()
            .map(|(i, issue)| {
                self.0
                    .get(issue.id.as_str())
                    .and_then(|a| {
                        idx.by_issue[i]
                            .iter()
                            .position(|&b| model.alternatives()[b].id == *a)
                    })
                    .unwrap_or(usize::MAX)
            })
            .collect()
    }
}

impl<I: Into<IssueId>, A: Into<AlternativeId>> FromIterator<(I, A)> for Design {
    fn from_iter<T: IntoIterator<Item = (I, A)>>(iter: T) -> Self {
        Design(
            iter.into_iter()
                .map(|(i, a)| (i.into(), a.into()))
                .collect(),
        )
    }
}

impl<'a> IntoIterator for &'a Design {
    type Item = (&'a IssueId, &'a AlternativeId);
    type IntoIter = btree_map::Iter<'a, IssueId, AlternativeId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
