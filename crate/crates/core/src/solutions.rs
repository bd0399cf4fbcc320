//! Exhaustive enumeration of every gate-state vector consistent with the
//! equation system for one assignment, dual-solution detection, and state
//! tables over all assignments.
//!
//! Only gates inside non-trivial strongly connected components are
//! enumerated; acyclic gates are functionally determined and propagated in
//! dependency order. A candidate state is a solution when one synchronous
//! sweep maps it to itself. The set of solutions of a monotone system always
//! has a unique pointwise minimum, and that minimum is the least fixed
//! point; both facts are asserted on every call.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::eval::Evaluator;
use crate::loops::{gate_scc_partition, DependencyGraph};
use crate::model::{Assignment, FaultTree, StateVector};

pub const MAX_LOOP_GATES: usize = 20;
pub const MAX_TABLE_BASICS: usize = 20;
pub const MAX_DEFAULT_CANDIDATE_GATES: usize = 12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolutionError {
    #[error("{count} gates in loops exceed the enumeration limit of {max}")]
    TooManyLoopGates { count: usize, max: usize },
    #[error("{count} basic events exceed the table limit of {max}")]
    TooManyBasics { count: usize, max: usize },
    #[error("{count} gates exceed the default candidate limit of {max}; pass explicit candidates")]
    TooManyGates { count: usize, max: usize },
}

/// Every consistent gate-state vector for one assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionReport {
    pub assignment: Assignment,
    /// All solutions, sorted; never empty.
    pub solutions: Vec<StateVector>,
    /// The pointwise-least solution; equals the least fixed point.
    pub least: StateVector,
    /// Per gate: does its value differ across solutions?
    pub dual: BTreeMap<String, bool>,
}

impl SolutionReport {
    pub fn is_dual(&self, gate: &str) -> bool {
        self.dual.get(gate).copied().unwrap_or(false)
    }
}

enum Step {
    /// Gate takes the next free bit of the enumeration counter.
    Guess(usize),
    /// Acyclic gate, computed from already-settled values.
    Compute(usize),
}

/// Enumeration plan shared by [`enumerate_solutions`] and
/// [`build_state_table`].
struct LoopEnumerator<'t> {
    ev: Evaluator<'t>,
    steps: Vec<Step>,
    loop_gate_count: usize,
}

impl<'t> LoopEnumerator<'t> {
    fn new(tree: &'t FaultTree) -> Result<Self, SolutionError> {
        let graph = DependencyGraph::of(tree);
        let mut steps = Vec::new();
        let mut loop_gate_count = 0;
        for comp in gate_scc_partition(tree) {
            let trivial = comp.len() == 1 && !graph.has_edge(comp[0], comp[0]);
            for g in comp {
                if trivial {
                    steps.push(Step::Compute(g));
                } else {
                    steps.push(Step::Guess(g));
                    loop_gate_count += 1;
                }
            }
        }
        if loop_gate_count > MAX_LOOP_GATES {
            return Err(SolutionError::TooManyLoopGates {
                count: loop_gate_count,
                max: MAX_LOOP_GATES,
            });
        }
        Ok(LoopEnumerator { ev: Evaluator::new(tree), steps, loop_gate_count })
    }

    /// All consistent gate states under `basics`, in enumeration order.
    fn solutions_bits(&self, basics: &[bool]) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        let mut state = vec![false; self.ev.n_gates()];
        for combo in 0u64..(1u64 << self.loop_gate_count) {
            let mut bit = 0;
            for step in &self.steps {
                match *step {
                    Step::Guess(g) => {
                        state[g] = combo & (1 << bit) != 0;
                        bit += 1;
                    }
                    Step::Compute(g) => {
                        state[g] = self.ev.eval_gate(g, basics, &state);
                    }
                }
            }
            if self.ev.is_consistent(basics, &state) {
                out.push(state.clone());
            }
        }
        out
    }
}

/// Finds every gate-state vector satisfying the equations under `a`.
///
/// Panics if `a` is not total; errors when more than [`MAX_LOOP_GATES`]
/// gates sit inside loops.
pub fn enumerate_solutions(
    tree: &FaultTree,
    a: &Assignment,
) -> Result<SolutionReport, SolutionError> {
    let en = LoopEnumerator::new(tree)?;
    let basics = en.ev.assignment_bits(a);
    let sol_bits = en.solutions_bits(&basics);
    assert!(!sol_bits.is_empty(), "a monotone system always has its least fixed point");

    let mut least_bits = sol_bits[0].clone();
    for s in &sol_bits[1..] {
        for (m, &v) in least_bits.iter_mut().zip(s) {
            *m = *m && v;
        }
    }
    let lfp = en.ev.least_fixpoint(&basics);
    assert_eq!(least_bits, lfp, "pointwise minimum of the solutions must be the least fixed point");

    let mut dual = BTreeMap::new();
    for (gi, gate) in tree.gates().iter().enumerate() {
        let first = sol_bits[0][gi];
        dual.insert(gate.id.clone(), sol_bits.iter().any(|s| s[gi] != first));
    }

    let mut solutions: Vec<StateVector> =
        sol_bits.iter().map(|bits| en.ev.bits_to_state(bits)).collect();
    solutions.sort();

    Ok(SolutionReport {
        assignment: a.clone(),
        solutions,
        least: en.ev.bits_to_state(&least_bits),
        dual,
    })
}

/// One row of a state table.
#[derive(Debug, Clone, PartialEq)]
pub struct StateRow {
    /// Basic-event values, aligned to the table's `basics` order.
    pub assignment: Vec<bool>,
    /// Per candidate: does one synchronous sweep map it to itself?
    pub available: Vec<bool>,
    /// Least solution, aligned to the table's `gates` order.
    pub least: Vec<bool>,
    /// Dual flags, aligned to the table's `gates` order.
    pub dual: Vec<bool>,
}

/// Availability of candidate gate states across every assignment. Rows are
/// in binary counting order with the first declared basic as the most
/// significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTable {
    pub basics: Vec<String>,
    pub gates: Vec<String>,
    pub candidates: Vec<StateVector>,
    pub rows: Vec<StateRow>,
}

impl StateTable {
    /// CSV with a header line; candidate columns are labelled by position.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let mut cols: Vec<String> = self.basics.clone();
        cols.extend(self.gates.iter().map(|g| format!("least:{g}")));
        cols.extend(self.gates.iter().map(|g| format!("dual:{g}")));
        cols.extend((0..self.candidates.len()).map(|i| format!("avail:{i}")));
        out.push_str(&cols.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = row
                .assignment
                .iter()
                .chain(&row.least)
                .chain(&row.dual)
                .chain(&row.available)
                .map(|&b| if b { "1" } else { "0" })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Builds the full state table. With `candidates = None`, every combination
/// of gate values is used as a candidate (guarded by
/// [`MAX_DEFAULT_CANDIDATE_GATES`]).
///
/// Panics if an explicit candidate is not total for the tree.
pub fn build_state_table(
    tree: &FaultTree,
    candidates: Option<&[StateVector]>,
) -> Result<StateTable, SolutionError> {
    let n_basics = tree.basics().len();
    if n_basics > MAX_TABLE_BASICS {
        return Err(SolutionError::TooManyBasics { count: n_basics, max: MAX_TABLE_BASICS });
    }
    let en = LoopEnumerator::new(tree)?;
    let n_gates = en.ev.n_gates();

    let candidate_vectors: Vec<StateVector> = match candidates {
        Some(list) => list.to_vec(),
        None => {
            if n_gates > MAX_DEFAULT_CANDIDATE_GATES {
                return Err(SolutionError::TooManyGates {
                    count: n_gates,
                    max: MAX_DEFAULT_CANDIDATE_GATES,
                });
            }
            (0u64..(1u64 << n_gates))
                .map(|combo| {
                    let bits: Vec<bool> =
                        (0..n_gates).map(|j| combo & (1 << (n_gates - 1 - j)) != 0).collect();
                    en.ev.bits_to_state(&bits)
                })
                .collect()
        }
    };
    let candidate_bits: Vec<Vec<bool>> =
        candidate_vectors.iter().map(|c| en.ev.state_bits(c)).collect();

    let mut rows = Vec::with_capacity(1usize << n_basics);
    for idx in 0u64..(1u64 << n_basics) {
        let assignment: Vec<bool> =
            (0..n_basics).map(|j| idx & (1 << (n_basics - 1 - j)) != 0).collect();

        let available = candidate_bits
            .iter()
            .map(|cand| &en.ev.sweep(&assignment, cand) == cand)
            .collect();

        let sols = en.solutions_bits(&assignment);
        assert!(!sols.is_empty());
        let mut least = sols[0].clone();
        for s in &sols[1..] {
            for (m, &v) in least.iter_mut().zip(s) {
                *m = *m && v;
            }
        }
        let dual = (0..n_gates)
            .map(|gi| sols.iter().any(|s| s[gi] != sols[0][gi]))
            .collect();

        rows.push(StateRow { assignment, available, least, dual });
    }

    Ok(StateTable {
        basics: tree.basics().iter().map(|b| b.id.clone()).collect(),
        gates: tree.gates().iter().map(|g| g.id.clone()).collect(),
        candidates: candidate_vectors,
        rows,
    })
}
