//! Event-driven simulation of basic-event state changes with loop memory.
//!
//! Starting from the all-FALSE assignment and the all-FALSE gate state, the
//! simulator applies trajectory events in time order (equal timestamps form
//! one batch) and, after each batch, relaxes the gate system from the
//! previous gate state under the updated assignment. Gate dynamics are
//! treated as fast relative to basic-event dynamics: the system settles to a
//! fixpoint (or a detected cycle) before the next event is consumed.
//!
//! This is where loop memory lives: a latched TRUE survives relaxation even
//! after the event that caused it is repaired, which is exactly why two
//! trajectories ending in the same assignment can disagree on the TOP when
//! repairable events are involved.

use thiserror::Error;

use crate::eval::Evaluator;
use crate::fixpoint::{relax_bits, RelaxOutcome, RelaxResult};
use crate::model::{Assignment, EventKind, FaultTree, StateVector};
use crate::parse::Trajectory;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimError {
    #[error("basic event `{id}` is non-repairable but transitions TRUE to FALSE at t={time}")]
    IllegalRepair { id: String, time: f64 },
    #[error("unknown basic event `{id}` at t={time}")]
    UnknownBasic { id: String, time: f64 },
}

/// One relaxation step of the timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStep {
    pub time: f64,
    /// Assignment in force after this timestamp's batch.
    pub assignment: Assignment,
    pub result: RelaxResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// One entry per distinct event time, in order. If an oscillation was
    /// detected the timeline ends at the oscillating step.
    pub timeline: Vec<SimStep>,
    /// Gate state after the last step; absent when the run oscillated.
    pub final_state: Option<StateVector>,
    pub oscillated: bool,
}

/// Runs a trajectory against the tree.
///
/// Non-repairable basics may only move FALSE to TRUE; setting an event to
/// its current value is a legal no-op. Events must be time-ordered (the
/// trajectory parser guarantees this).
pub fn simulate(tree: &FaultTree, trajectory: &Trajectory) -> Result<SimResult, SimError> {
    let ev = Evaluator::new(tree);
    let mut basics = vec![false; ev.n_basics()];
    let mut gates = vec![false; ev.n_gates()];
    let mut timeline = Vec::new();

    let events = &trajectory.events;
    debug_assert!(events.windows(2).all(|w| w[0].time <= w[1].time));

    let mut i = 0;
    while i < events.len() {
        let time = events[i].time;
        while i < events.len() && events[i].time == time {
            let e = &events[i];
            let pos = tree.basic_position(&e.basic_id).ok_or_else(|| SimError::UnknownBasic {
                id: e.basic_id.clone(),
                time,
            })?;
            let kind = tree.basics()[pos].kind;
            if basics[pos] && !e.value && kind == EventKind::NonRepairable {
                return Err(SimError::IllegalRepair { id: e.basic_id.clone(), time });
            }
            basics[pos] = e.value;
            i += 1;
        }

        let result = relax_bits(&ev, &basics, gates.clone());
        let oscillated = result.is_oscillation();
        if let RelaxOutcome::Fixpoint(state) = &result.outcome {
            gates = ev.state_bits(state);
        }
        timeline.push(SimStep { time, assignment: ev.bits_to_assignment(&basics), result });
        if oscillated {
            return Ok(SimResult { timeline, final_state: None, oscillated: true });
        }
    }

    Ok(SimResult {
        timeline,
        final_state: Some(ev.bits_to_state(&gates)),
        oscillated: false,
    })
}
