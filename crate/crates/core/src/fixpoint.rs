//! Gate-system evaluation for a fixed assignment.
//!
//! The correct loop semantics for non-repairable basic events is the least
//! fixed point of the monotone gate equations, reached by initializing every
//! gate FALSE and sweeping synchronously until stable. Relaxation from an
//! arbitrary starting state is also provided; it is what the trajectory
//! simulator uses to carry loop memory between events, and it is where
//! oscillation becomes observable.
//!
//! Sweeps are synchronous (Jacobi): every gate body is evaluated against the
//! previous state, never against values already updated in the same sweep.
//! The least fixed point is schedule-independent, but oscillation cycles are
//! not, so the schedule is fixed here on purpose.

use crate::eval::Evaluator;
use crate::model::{Assignment, FaultTree, StateVector};

/// Outcome of relaxation from an arbitrary start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelaxOutcome {
    Fixpoint(StateVector),
    /// The detected cycle, in sweep order; applying one more sweep to the
    /// last state yields the first. Length is at least 2.
    Oscillation(Vec<StateVector>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelaxResult {
    pub outcome: RelaxOutcome,
    /// Synchronous sweeps performed before the repeat was detected.
    pub sweeps: usize,
}

impl RelaxResult {
    pub fn fixpoint(&self) -> Option<&StateVector> {
        match &self.outcome {
            RelaxOutcome::Fixpoint(s) => Some(s),
            RelaxOutcome::Oscillation(_) => None,
        }
    }

    pub fn is_oscillation(&self) -> bool {
        matches!(self.outcome, RelaxOutcome::Oscillation(_))
    }
}

/// The unique least gate state satisfying every gate equation under `a`.
///
/// Panics if `a` is not total over the tree's basic events.
pub fn eval_least_fixpoint(tree: &FaultTree, a: &Assignment) -> StateVector {
    let ev = Evaluator::new(tree);
    let basics = ev.assignment_bits(a);
    let bits = ev.least_fixpoint(&basics);
    ev.bits_to_state(&bits)
}

/// Synchronous sweeps from `start` under fixed `a`, stopping at the first
/// repeated state. A repeat of the immediately preceding state is a
/// fixpoint; any earlier repeat closes an oscillation cycle.
///
/// Panics if `a` or `start` is not total for the tree.
pub fn relax_from_state(tree: &FaultTree, a: &Assignment, start: &StateVector) -> RelaxResult {
    let ev = Evaluator::new(tree);
    let basics = ev.assignment_bits(a);
    let start_bits = ev.state_bits(start);
    relax_bits(&ev, &basics, start_bits)
}

/// One synchronous application of every gate equation to `state`. A state
/// is consistent exactly when this maps it to itself.
///
/// Panics if `a` or `state` is not total for the tree.
pub fn sweep_once(tree: &FaultTree, a: &Assignment, state: &StateVector) -> StateVector {
    let ev = Evaluator::new(tree);
    let basics = ev.assignment_bits(a);
    let bits = ev.sweep(&basics, &ev.state_bits(state));
    ev.bits_to_state(&bits)
}

pub(crate) fn relax_bits(ev: &Evaluator, basics: &[bool], start: Vec<bool>) -> RelaxResult {
    use std::collections::HashMap;

    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut trace: Vec<Vec<bool>> = Vec::new();
    let mut cur = start;
    loop {
        seen.insert(cur.clone(), trace.len());
        trace.push(cur.clone());
        let next = ev.sweep(basics, &cur);
        if let Some(&first) = seen.get(&next) {
            let sweeps = trace.len();
            if first == trace.len() - 1 {
                return RelaxResult {
                    outcome: RelaxOutcome::Fixpoint(ev.bits_to_state(&next)),
                    sweeps,
                };
            }
            let cycle = trace[first..].iter().map(|bits| ev.bits_to_state(bits)).collect();
            return RelaxResult { outcome: RelaxOutcome::Oscillation(cycle), sweeps };
        }
        cur = next;
    }
}
