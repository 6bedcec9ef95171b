//! Backtracking enumeration of conforming designs.
//!
//! Issues are decided in declaration order; each issue takes one of its
//! alternatives (in declaration order) or stays unresolved, which is tried
//! last. Designs therefore come out in canonical order and can be streamed.
//!
//! Pruning, all of it sound with respect to the conformity conditions:
//!
//! - an alternative incompatible with an earlier selection is skipped;
//! - an entry point, or an issue already triggered by a selection, cannot
//!   stay unresolved;
//! - an alternative triggering an issue already left unresolved is skipped;
//! - forward check: every undecided issue that must be resolved still has a
//!   usable alternative, and every selected issue without trigger support
//!   so far can still get it from an undecided issue.
//!
//! Cycle-supported designs fall out of the same search: a triggered issue
//! may be resolved before its supporter is chosen, as long as support
//! arrives by the end.

use std::ops::ControlFlow;

use super::{conforms, Design};
use crate::model::{Index, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Undecided,
    Unresolved,
    Chosen(usize),
}

struct Search<'m> {
    model: &'m Model,
    idx: &'m Index,
    fixed: Vec<Option<usize>>,
    slots: Vec<Slot>,
    /// Per alternative: how many selections are incompatible with it.
    blocked: Vec<u32>,
    /// Per issue: how many selections trigger it.
    support: Vec<u32>,
}

impl<'m> Search<'m> {
    fn new(model: &'m Model, fixed: Vec<Option<usize>>) -> Self {
        let idx = model.index();
        Search {
            model,
            idx,
            fixed,
            slots: vec![Slot::Undecided; model.issues().len()],
            blocked: vec![0; idx.alt_count()],
            support: vec![0; model.issues().len()],
        }
    }

    fn usable(&self, a: usize) -> bool {
        self.blocked[a] == 0
            && self.idx.compatible(a, a)
            && self.idx.triggers[a]
                .iter()
                .all(|&t| self.slots[t] != Slot::Unresolved)
    }

    fn domain(&self, issue: usize) -> &[usize] {
        match &self.fixed[issue] {
            Some(a) => std::slice::from_ref(a),
            None => &self.idx.by_issue[issue],
        }
    }

    fn choose(&mut self, issue: usize, a: usize) {
        self.slots[issue] = Slot::Chosen(a);
        for b in 0..self.idx.alt_count() {
            if !self.idx.compatible(a, b) || !self.idx.compatible(b, a) {
                self.blocked[b] += 1;
            }
        }
        for &t in &self.idx.triggers[a] {
            self.support[t] += 1;
        }
    }

    fn unchoose(&mut self, issue: usize, a: usize) {
        self.slots[issue] = Slot::Undecided;
        for b in 0..self.idx.alt_count() {
            if !self.idx.compatible(a, b) || !self.idx.compatible(b, a) {
                self.blocked[b] -= 1;
            }
        }
        for &t in &self.idx.triggers[a] {
            self.support[t] -= 1;
        }
    }

    fn required(&self, issue: usize) -> bool {
        self.idx.is_entry(issue) || self.support[issue] > 0 || self.fixed[issue].is_some()
    }

    fn forward_ok(&self, next: usize) -> bool {
        let n = self.slots.len();
        for u in next..n {
            if self.required(u) && !self.domain(u).iter().any(|&a| self.usable(a)) {
                return false;
            }
        }
        for j in 0..next {
            if let Slot::Chosen(_) = self.slots[j] {
                if self.idx.is_entry(j) || self.support[j] > 0 {
                    continue;
                }
                let can_support = self.idx.supporters[j].iter().any(|&b| {
                    self.idx.alt_issue[b].is_some_and(|u| {
                        u >= next && self.fixed[u].is_none_or(|f| f == b) && self.usable(b)
                    })
                });
                if !can_support {
                    return false;
                }
            }
        }
        true
    }

    fn design(&self) -> Design {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| match slot {
                Slot::Chosen(a) => Some((
                    self.model.issues()[i].id.clone(),
                    self.model.alternatives()[*a].id.clone(),
                )),
                _ => None,
            })
            .collect()
    }

    fn run(
        &mut self,
        pos: usize,
        emit: &mut dyn FnMut(Design) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if pos == self.slots.len() {
            let supported = self.slots.iter().enumerate().all(|(i, slot)| {
                !matches!(slot, Slot::Chosen(_)) || self.idx.is_entry(i) || self.support[i] > 0
            });
            if !supported {
                return ControlFlow::Continue(());
            }
            let design = self.design();
            let conforming = conforms(&design, self.model).conforms;
            debug_assert!(conforming, "search produced a non-conforming design");
            return if conforming {
                emit(design)
            } else {
                ControlFlow::Continue(())
            };
        }

        let candidates: Vec<usize> = self.domain(pos).to_vec();
        for a in candidates {
            if !self.usable(a) {
                continue;
            }
            self.choose(pos, a);
            if self.forward_ok(pos + 1) {
                self.run(pos + 1, emit)?;
            }
            self.unchoose(pos, a);
        }

        if !self.required(pos) {
            self.slots[pos] = Slot::Unresolved;
            if self.forward_ok(pos + 1) {
                let flow = self.run(pos + 1, emit);
                if flow.is_break() {
                    self.slots[pos] = Slot::Undecided;
                    return flow;
                }
            }
            self.slots[pos] = Slot::Undecided;
        }
        ControlFlow::Continue(())
    }
}

/// Streams every conforming design of `model`, in canonical order, to
/// `emit`; stops early when `emit` breaks.
pub fn for_each_design(model: &Model, emit: impl FnMut(Design) -> ControlFlow<()>) {
    for_each_extension(model, &Design::new(), emit);
}

/// Streams the conforming designs that contain every entry of `partial`.
pub fn for_each_extension(
    model: &Model,
    partial: &Design,
    mut emit: impl FnMut(Design) -> ControlFlow<()>,
) {
    let mut fixed = vec![None; model.issues().len()];
    for (issue, alt) in partial {
        let (Ok(i), Ok(a)) = (model.issue_pos(issue.as_str()), model.alt_pos(alt.as_str())) else {
            return;
        };
        if model.index().alt_issue[a] != Some(i) {
            return;
        }
        fixed[i] = Some(a);
    }
    let mut search = Search::new(model, fixed);
    if search.forward_ok(0) {
        let _ = search.run(0, &mut emit);
    }
}
