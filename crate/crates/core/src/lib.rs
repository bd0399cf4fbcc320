//! Fault-tree analysis for trees with logical loops.
//!
//! Classical minimal-cut-set analysis assumes an acyclic tree. When a TOP or
//! intermediate gate feeds back into a lower gate, the tree becomes a system
//! of monotone Boolean equations that can have several consistent solutions.
//! This crate treats loops head-on:
//!
//! * [`model`] — the validated in-memory tree (AND/OR/K-out-of-N gates, no
//!   negation, cycles allowed) plus assignments and gate-state vectors.
//! * [`parse`] — the text DSL, trajectory CSV, and canonical serializer.
//! * [`loops`] — gate dependency graph, strongly connected components, and
//!   loop classification (ordinary / linear / non-linear interrelated).
//! * [`fixpoint`] — least-fixed-point evaluation (the correct semantics for
//!   non-repairable events) and relaxation from arbitrary states, with
//!   oscillation detection.
//! * [`cutset`] — loop-aware minimal cut sets by DNF normalization,
//!   self-loop elimination, and substitution.
//! * [`solutions`] — exhaustive enumeration of all consistent gate states,
//!   dual-solution detection, and full state tables.
//! * [`sim`] — event-driven trajectory simulation with loop memory; this is
//!   where repairable events visibly break the analytic answer.
//! * [`quantify`] — TOP probability by enumeration, inclusion-exclusion
//!   over cut sets, or the rare-event bound.

pub mod cutset;
mod eval;
pub mod fixpoint;
pub mod loops;
pub mod model;
pub mod parse;
pub mod quantify;
pub mod sim;
pub mod solutions;

pub use cutset::{
    eliminate_self, equation_system, minimal_cut_sets, normalize, CutsetError, Dnf,
    EquationSystem, Product, DEFAULT_PRODUCT_CAP,
};
pub use fixpoint::{eval_least_fixpoint, relax_from_state, sweep_once, RelaxOutcome, RelaxResult};
pub use loops::{
    analyze_structure, analyze_structure_with_cap, DependencyGraph, LoopClass, SccComponent,
    SccReport,
};
pub use model::{
    Assignment, BasicEventDef, EventKind, Expr, FaultTree, GateDef, ModelError, StateVector,
};
pub use parse::{parse_trajectory, parse_tree, serialize, ParseError, Trajectory, TrajectoryEvent};
pub use quantify::{top_probability, QuantError, QuantMethod, QuantResult};
pub use sim::{simulate, SimError, SimResult, SimStep};
pub use solutions::{
    build_state_table, enumerate_solutions, SolutionError, SolutionReport, StateRow, StateTable,
};
