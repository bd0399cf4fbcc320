//! In-memory fault-tree model: basic events, gate expressions (possibly
//! cyclic), validation, and K-out-of-N expansion.
//!
//! A [`FaultTree`] is immutable after construction. [`FaultTree::new`]
//! validates every reference, so downstream analyses never meet a dangling
//! identifier. Gates may reference each other in cycles, including direct
//! self-reference; the loop semantics live in the analysis modules.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

/// Whether a basic event can return from failed to working.
///
/// Non-repairable events only ever move FALSE to TRUE; repairable events may
/// also move TRUE to FALSE, which is what breaks purely analytic treatment of
/// loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    NonRepairable,
    Repairable,
}

/// A leaf input of the tree.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicEventDef {
    pub id: String,
    pub kind: EventKind,
    /// Failure probability at the analysis time, if quantification is wanted.
    pub prob: Option<f64>,
}

impl BasicEventDef {
    pub fn nonrepairable(id: impl Into<String>) -> Self {
        BasicEventDef { id: id.into(), kind: EventKind::NonRepairable, prob: None }
    }

    pub fn repairable(id: impl Into<String>) -> Self {
        BasicEventDef { id: id.into(), kind: EventKind::Repairable, prob: None }
    }

    pub fn with_prob(mut self, prob: f64) -> Self {
        self.prob = Some(prob);
        self
    }
}

/// Negation-free gate expression.
///
/// There is deliberately no NOT/NAND/XOR node: every expression is monotone
/// by construction. `Ref` leaves name either a basic event or another gate;
/// the owning [`FaultTree`] resolves which. `KooN` inputs are identifiers,
/// matching the DSL form `koon(k, a, b, c)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Ref(String),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    KooN { k: usize, inputs: Vec<String> },
}

impl Expr {
    pub fn var(id: impl Into<String>) -> Expr {
        Expr::Ref(id.into())
    }

    pub fn and(children: Vec<Expr>) -> Expr {
        Expr::And(children)
    }

    pub fn or(children: Vec<Expr>) -> Expr {
        Expr::Or(children)
    }

    pub fn koon<S: Into<String>>(k: usize, inputs: impl IntoIterator<Item = S>) -> Expr {
        Expr::KooN { k, inputs: inputs.into_iter().map(Into::into).collect() }
    }

    /// All identifiers referenced anywhere in the expression, including
    /// K-out-of-N inputs.
    pub fn referenced_ids(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Ref(id) => {
                out.insert(id.as_str());
            }
            Expr::And(children) | Expr::Or(children) => {
                for c in children {
                    c.collect_refs(out);
                }
            }
            Expr::KooN { inputs, .. } => {
                for id in inputs {
                    out.insert(id.as_str());
                }
            }
        }
    }

    pub fn contains_koon(&self) -> bool {
        match self {
            Expr::Ref(_) => false,
            Expr::And(children) | Expr::Or(children) => children.iter().any(Expr::contains_koon),
            Expr::KooN { .. } => true,
        }
    }

    /// Replaces every K-out-of-N node by the equivalent OR over all C(n, k)
    /// AND-combinations of k distinct inputs. The result contains no `KooN`
    /// node and no negation; expanding an already expanded expression returns
    /// a structurally equal one.
    ///
    /// Degenerate thresholds collapse: 1-of-n becomes a plain OR and n-of-n a
    /// plain AND, so a single combination is never wrapped in a spurious
    /// one-child node.
    pub fn expand_koon(&self) -> Expr {
        match self {
            Expr::Ref(id) => Expr::Ref(id.clone()),
            Expr::And(children) => Expr::And(children.iter().map(Expr::expand_koon).collect()),
            Expr::Or(children) => Expr::Or(children.iter().map(Expr::expand_koon).collect()),
            Expr::KooN { k, inputs } => {
                let mut terms: Vec<Expr> = Vec::new();
                for combo in inputs.iter().combinations(*k) {
                    if combo.len() == 1 {
                        terms.push(Expr::Ref(combo[0].clone()));
                    } else {
                        terms.push(Expr::And(combo.into_iter().map(|id| Expr::Ref(id.clone())).collect()));
                    }
                }
                if terms.len() == 1 {
                    terms.pop().unwrap()
                } else {
                    Expr::Or(terms)
                }
            }
        }
    }
}

/// Fully parenthesized rendering, matching the canonical DSL serialization.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ref(id) => write!(f, "{id}"),
            Expr::And(children) => {
                write!(f, "(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Expr::Or(children) => {
                write!(f, "(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Expr::KooN { k, inputs } => {
                write!(f, "koon({k}")?;
                for id in inputs {
                    write!(f, ",{id}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A named gate and its defining expression.
#[derive(Debug, Clone, PartialEq)]
pub struct GateDef {
    pub id: String,
    pub body: Expr,
}

impl GateDef {
    pub fn new(id: impl Into<String>, body: Expr) -> Self {
        GateDef { id: id.into(), body }
    }
}

/// Validation errors raised by [`FaultTree::new`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("unresolved reference `{0}`")]
    UnresolvedReference(String),
    #[error("no top gates declared")]
    EmptyTops,
    #[error("gate `{gate}`: koon({k}) needs between 1 and {n} as threshold")]
    BadKooN { gate: String, k: usize, n: usize },
    #[error("basic event `{id}`: probability {prob} outside [0,1]")]
    BadProbability { id: String, prob: f64 },
    #[error("gate `{gate}`: AND/OR with no operands")]
    EmptyOperands { gate: String },
}

/// Identifiers reachable from one gate by following its expression and the
/// expressions of every referenced gate.
#[derive(Debug, Clone, Default)]
pub struct Reachable {
    pub basics: BTreeSet<String>,
    pub gates: BTreeSet<String>,
}

/// A validated fault-tree model.
///
/// Construction checks every invariant once; afterwards the tree is
/// immutable and safe to share across threads.
#[derive(Debug, Clone)]
pub struct FaultTree {
    basics: Vec<BasicEventDef>,
    gates: Vec<GateDef>,
    tops: Vec<String>,
    basic_index: HashMap<String, usize>,
    gate_index: HashMap<String, usize>,
}

impl PartialEq for FaultTree {
    fn eq(&self, other: &Self) -> bool {
        self.basics == other.basics && self.gates == other.gates && self.tops == other.tops
    }
}

impl FaultTree {
    /// Builds and validates a tree. Rejects duplicate identifiers, dangling
    /// references, empty top lists, malformed K-out-of-N thresholds, empty
    /// AND/OR operand lists and out-of-range probabilities.
    pub fn new(
        basics: Vec<BasicEventDef>,
        gates: Vec<GateDef>,
        tops: Vec<String>,
    ) -> Result<Self, ModelError> {
        let mut basic_index = HashMap::new();
        let mut gate_index = HashMap::new();
        for (i, b) in basics.iter().enumerate() {
            if basic_index.insert(b.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateId(b.id.clone()));
            }
            if let Some(p) = b.prob {
                if !(0.0..=1.0).contains(&p) || p.is_nan() {
                    return Err(ModelError::BadProbability { id: b.id.clone(), prob: p });
                }
            }
        }
        for (i, g) in gates.iter().enumerate() {
            if basic_index.contains_key(&g.id) || gate_index.insert(g.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateId(g.id.clone()));
            }
        }

        let resolves = |id: &str| basic_index.contains_key(id) || gate_index.contains_key(id);
        for g in &gates {
            validate_expr(&g.id, &g.body, &resolves)?;
        }

        if tops.is_empty() {
            return Err(ModelError::EmptyTops);
        }
        for t in &tops {
            if !gate_index.contains_key(t) {
                return Err(ModelError::UnresolvedReference(t.clone()));
            }
        }

        Ok(FaultTree { basics, gates, tops, basic_index, gate_index })
    }

    pub fn basics(&self) -> &[BasicEventDef] {
        &self.basics
    }

    pub fn gates(&self) -> &[GateDef] {
        &self.gates
    }

    pub fn tops(&self) -> &[String] {
        &self.tops
    }

    pub fn basic(&self, id: &str) -> Option<&BasicEventDef> {
        self.basic_index.get(id).map(|&i| &self.basics[i])
    }

    pub fn gate(&self, id: &str) -> Option<&GateDef> {
        self.gate_index.get(id).map(|&i| &self.gates[i])
    }

    pub fn basic_position(&self, id: &str) -> Option<usize> {
        self.basic_index.get(id).copied()
    }

    pub fn gate_position(&self, id: &str) -> Option<usize> {
        self.gate_index.get(id).copied()
    }

    pub fn is_basic(&self, id: &str) -> bool {
        self.basic_index.contains_key(id)
    }

    pub fn is_gate(&self, id: &str) -> bool {
        self.gate_index.contains_key(id)
    }

    /// Everything reachable from `top` by following gate bodies. Returns
    /// `None` when `top` is not a gate of this tree. The starting gate is
    /// always part of the result.
    pub fn reachable_from(&self, top: &str) -> Option<Reachable> {
        let start = self.gate(top)?;
        let mut reach = Reachable::default();
        let mut queue = vec![start.id.clone()];
        reach.gates.insert(start.id.clone());
        while let Some(gid) = queue.pop() {
            let gate = self.gate(&gid).expect("validated gate");
            for id in gate.body.referenced_ids() {
                if self.is_basic(id) {
                    reach.basics.insert(id.to_string());
                } else if reach.gates.insert(id.to_string()) {
                    queue.push(id.to_string());
                }
            }
        }
        Some(reach)
    }

    /// A copy of the tree with every K-out-of-N node expanded to AND/OR form.
    pub fn expand_koon(&self) -> FaultTree {
        let mut out = self.clone();
        for g in &mut out.gates {
            if g.body.contains_koon() {
                g.body = g.body.expand_koon();
            }
        }
        out
    }
}

fn validate_expr<F>(gate: &str, expr: &Expr, resolves: &F) -> Result<(), ModelError>
where
    F: Fn(&str) -> bool,
{
    match expr {
        Expr::Ref(id) => {
            if !resolves(id) {
                return Err(ModelError::UnresolvedReference(id.clone()));
            }
        }
        Expr::And(children) | Expr::Or(children) => {
            if children.is_empty() {
                return Err(ModelError::EmptyOperands { gate: gate.to_string() });
            }
            for c in children {
                validate_expr(gate, c, resolves)?;
            }
        }
        Expr::KooN { k, inputs } => {
            if *k == 0 || *k > inputs.len() {
                return Err(ModelError::BadKooN { gate: gate.to_string(), k: *k, n: inputs.len() });
            }
            for id in inputs {
                if !resolves(id) {
                    return Err(ModelError::UnresolvedReference(id.clone()));
                }
            }
        }
    }
    Ok(())
}

/// A total Boolean valuation of the tree's basic events.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    values: BTreeMap<String, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, bool)>) -> Self {
        Assignment { values: pairs.into_iter().map(|(id, v)| (id.into(), v)).collect() }
    }

    /// Every basic event of `tree` set to FALSE.
    pub fn all_false(tree: &FaultTree) -> Self {
        Assignment {
            values: tree.basics().iter().map(|b| (b.id.clone(), false)).collect(),
        }
    }

    pub fn set(&mut self, id: impl Into<String>, value: bool) {
        self.values.insert(id.into(), value);
    }

    pub fn get(&self, id: &str) -> Option<bool> {
        self.values.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.values.iter().map(|(id, &v)| (id.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ids of `tree` basics missing from this assignment.
    pub fn missing_for(&self, tree: &FaultTree) -> Vec<String> {
        tree.basics()
            .iter()
            .filter(|b| !self.values.contains_key(&b.id))
            .map(|b| b.id.clone())
            .collect()
    }

    /// `self <= other` pointwise over the shared key set.
    pub fn pointwise_le(&self, other: &Assignment) -> bool {
        self.values.iter().all(|(id, &v)| !v || other.get(id) == Some(true))
    }
}

/// A total Boolean valuation of the tree's gates.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct StateVector {
    values: BTreeMap<String, bool>,
}

impl StateVector {
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, bool)>) -> Self {
        StateVector { values: pairs.into_iter().map(|(id, v)| (id.into(), v)).collect() }
    }

    /// Every gate of `tree` set to FALSE.
    pub fn all_false(tree: &FaultTree) -> Self {
        StateVector {
            values: tree.gates().iter().map(|g| (g.id.clone(), false)).collect(),
        }
    }

    pub fn set(&mut self, id: impl Into<String>, value: bool) {
        self.values.insert(id.into(), value);
    }

    pub fn get(&self, id: &str) -> Option<bool> {
        self.values.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.values.iter().map(|(id, &v)| (id.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ids of `tree` gates missing from this vector.
    pub fn missing_for(&self, tree: &FaultTree) -> Vec<String> {
        tree.gates()
            .iter()
            .filter(|g| !self.values.contains_key(&g.id))
            .map(|g| g.id.clone())
            .collect()
    }

    pub fn pointwise_le(&self, other: &StateVector) -> bool {
        self.values.iter().all(|(id, &v)| !v || other.get(id) == Some(true))
    }

    /// Pointwise minimum over the shared key set.
    pub fn pointwise_min(&self, other: &StateVector) -> StateVector {
        StateVector {
            values: self
                .values
                .iter()
                .map(|(id, &v)| (id.clone(), v && other.get(id) == Some(true)))
                .collect(),
        }
    }
}
