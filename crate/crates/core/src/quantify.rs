//! TOP probability from independent basic-event probabilities, for
//! non-repairable trees.
//!
//! Three routes: exhaustive enumeration over assignments weighted by the
//! least fixed point, exact inclusion-exclusion over the minimal cut sets,
//! and the rare-event upper bound (sum of cut-set probabilities). The first
//! two agree to within double-precision rounding; the third never
//! underestimates.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cutset::{minimal_cut_sets_with_cap, CutsetError, DEFAULT_PRODUCT_CAP};
use crate::eval::Evaluator;
use crate::model::{EventKind, FaultTree};

pub const MAX_ENUMERATION_BASICS: usize = 20;
pub const MAX_INCLUSION_EXCLUSION_CUTSETS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantMethod {
    ExhaustiveEnumeration,
    InclusionExclusion,
    RareEventApprox,
}

impl QuantMethod {
    pub fn label(self) -> &'static str {
        match self {
            QuantMethod::ExhaustiveEnumeration => "ExhaustiveEnumeration",
            QuantMethod::InclusionExclusion => "InclusionExclusion",
            QuantMethod::RareEventApprox => "RareEventApprox",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuantError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("basic events without probability: {}", ids.join(", "))]
    MissingProbability { ids: Vec<String> },
    #[error("repairable basic events reachable from target: {}", ids.join(", "))]
    RepairableUnsupported { ids: Vec<String> },
    #[error("{count} {what} exceed the limit of {max}")]
    TooLarge { what: &'static str, count: usize, max: usize },
    #[error("product cap exceeded ({cap})")]
    CapExceeded { cap: usize },
}

impl From<CutsetError> for QuantError {
    fn from(e: CutsetError) -> Self {
        match e {
            CutsetError::CapExceeded { cap } => QuantError::CapExceeded { cap },
            CutsetError::RepairableUnsupported { ids } => {
                QuantError::RepairableUnsupported { ids }
            }
            CutsetError::UnknownGate(id) => QuantError::UnknownGate(id),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantResult {
    pub method: QuantMethod,
    /// TOP probability; the rare-event sum is clamped to 1 when it
    /// overshoots.
    pub value: f64,
    /// True when the rare-event sum exceeded 1 and was clamped.
    pub clamped: bool,
    /// Number of minimal cut sets, for the cut-set-based methods.
    pub cutset_count: Option<usize>,
}

/// TOP probability with the default product cap.
pub fn top_probability(
    tree: &FaultTree,
    top: &str,
    method: QuantMethod,
) -> Result<QuantResult, QuantError> {
    top_probability_with_cap(tree, top, method, DEFAULT_PRODUCT_CAP)
}

pub fn top_probability_with_cap(
    tree: &FaultTree,
    top: &str,
    method: QuantMethod,
    cap: usize,
) -> Result<QuantResult, QuantError> {
    let reach = tree
        .reachable_from(top)
        .ok_or_else(|| QuantError::UnknownGate(top.to_string()))?;

    let repairable: Vec<String> = reach
        .basics
        .iter()
        .filter(|id| tree.basic(id).map(|b| b.kind) == Some(EventKind::Repairable))
        .cloned()
        .collect();
    if !repairable.is_empty() {
        return Err(QuantError::RepairableUnsupported { ids: repairable });
    }
    let missing: Vec<String> = reach
        .basics
        .iter()
        .filter(|id| tree.basic(id).map(|b| b.prob.is_none()) == Some(true))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(QuantError::MissingProbability { ids: missing });
    }

    match method {
        QuantMethod::ExhaustiveEnumeration => enumerate(tree, top, &reach.basics),
        QuantMethod::InclusionExclusion | QuantMethod::RareEventApprox => {
            let mcs = minimal_cut_sets_with_cap(tree, top, cap)?;
            let probs: BTreeMap<&str, f64> = reach
                .basics
                .iter()
                .map(|id| (id.as_str(), tree.basic(id).unwrap().prob.unwrap()))
                .collect();
            if method == QuantMethod::InclusionExclusion {
                inclusion_exclusion(&mcs, &probs)
            } else {
                rare_event(&mcs, &probs)
            }
        }
    }
}

/// Sums P(assignment) over every assignment of the reachable basics whose
/// least fixed point turns the target on.
fn enumerate(
    tree: &FaultTree,
    top: &str,
    reachable: &std::collections::BTreeSet<String>,
) -> Result<QuantResult, QuantError> {
    // Declaration order keeps the summation order reproducible.
    let positions: Vec<usize> = tree
        .basics()
        .iter()
        .enumerate()
        .filter(|(_, b)| reachable.contains(&b.id))
        .map(|(i, _)| i)
        .collect();
    if positions.len() > MAX_ENUMERATION_BASICS {
        return Err(QuantError::TooLarge {
            what: "basic events",
            count: positions.len(),
            max: MAX_ENUMERATION_BASICS,
        });
    }
    let probs: Vec<f64> = positions.iter().map(|&i| tree.basics()[i].prob.unwrap()).collect();

    let ev = Evaluator::new(tree);
    let top_idx = tree.gate_position(top).expect("validated target");
    let mut basics = vec![false; ev.n_basics()];
    let mut total = 0.0f64;
    for mask in 0u64..(1u64 << positions.len()) {
        let mut weight = 1.0f64;
        for (j, &pos) in positions.iter().enumerate() {
            let failed = mask & (1 << j) != 0;
            basics[pos] = failed;
            weight *= if failed { probs[j] } else { 1.0 - probs[j] };
        }
        if weight > 0.0 && ev.least_fixpoint(&basics)[top_idx] {
            total += weight;
        }
    }
    Ok(QuantResult {
        method: QuantMethod::ExhaustiveEnumeration,
        value: total,
        clamped: false,
        cutset_count: None,
    })
}

fn inclusion_exclusion(
    mcs: &crate::cutset::Dnf,
    probs: &BTreeMap<&str, f64>,
) -> Result<QuantResult, QuantError> {
    let m = mcs.len();
    if m > MAX_INCLUSION_EXCLUSION_CUTSETS {
        return Err(QuantError::TooLarge {
            what: "cut sets",
            count: m,
            max: MAX_INCLUSION_EXCLUSION_CUTSETS,
        });
    }

    // Dense event indexing so subset unions are bit operations.
    let ids: Vec<&str> = mcs
        .products()
        .flat_map(|p| p.literals())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let chunks = ids.len().div_ceil(64);
    let masks: Vec<Vec<u64>> = mcs
        .products()
        .map(|p| {
            let mut mask = vec![0u64; chunks];
            for lit in p.literals() {
                let i = index[lit];
                mask[i / 64] |= 1 << (i % 64);
            }
            mask
        })
        .collect();
    let event_probs: Vec<f64> = ids.iter().map(|id| probs[id]).collect();

    let mut total = 0.0f64;
    let mut union = vec![0u64; chunks];
    for subset in 1u64..(1u64 << m) {
        union.iter_mut().for_each(|w| *w = 0);
        for (ci, mask) in masks.iter().enumerate() {
            if subset & (1 << ci) != 0 {
                for (u, w) in union.iter_mut().zip(mask) {
                    *u |= w;
                }
            }
        }
        let mut term = 1.0f64;
        for (chunk, base) in union.iter().enumerate() {
            let mut word = *base;
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                term *= event_probs[chunk * 64 + bit];
                word &= word - 1;
            }
        }
        if subset.count_ones() % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(QuantResult {
        method: QuantMethod::InclusionExclusion,
        value: total,
        clamped: false,
        cutset_count: Some(m),
    })
}

fn rare_event(
    mcs: &crate::cutset::Dnf,
    probs: &BTreeMap<&str, f64>,
) -> Result<QuantResult, QuantError> {
    let mut total = 0.0f64;
    for p in mcs.products() {
        total += p.literals().map(|lit| probs[lit]).product::<f64>();
    }
    let clamped = total > 1.0;
    Ok(QuantResult {
        method: QuantMethod::RareEventApprox,
        value: if clamped { 1.0 } else { total },
        clamped,
        cutset_count: Some(mcs.len()),
    })
}
