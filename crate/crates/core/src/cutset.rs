//! Loop-free minimal cut sets from a cyclic gate system.
//!
//! The derivation is Boolean-algebraic: gate bodies become negation-free
//! sums of products, strongly connected components are solved bottom-up, and
//! inside a component each member is resolved by dropping every product that
//! contains the member itself — the least solution of `X = A | (B & X)` is
//! `X = A` — then substituting the result into the remaining members.
//! Absorption keeps every intermediate sum minimal, so the final product set
//! over basic events is exactly the set of minimal cut sets.
//!
//! Repairable basic events reachable from the target are a hard error: their
//! TOP value is history-dependent and has no faithful cut-set form.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::loops::gate_scc_partition;
use crate::model::{EventKind, Expr, FaultTree};

/// Default bound on the number of products any intermediate sum may hold.
pub const DEFAULT_PRODUCT_CAP: usize = 100_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CutsetError {
    #[error("product cap exceeded ({cap})")]
    CapExceeded { cap: usize },
    #[error("repairable basic events reachable from target: {}", ids.join(", "))]
    RepairableUnsupported { ids: Vec<String> },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
}

/// A conjunction of positive literals with set semantics. The empty product
/// denotes the constant TRUE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product(BTreeSet<String>);

impl Product {
    pub fn new<S: Into<String>>(literals: impl IntoIterator<Item = S>) -> Self {
        Product(literals.into_iter().map(Into::into).collect())
    }

    /// The empty product, i.e. constant TRUE.
    pub fn top() -> Self {
        Product(BTreeSet::new())
    }

    pub fn literals(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.contains(id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Product) -> bool {
        self.0.is_subset(&other.0)
    }

    fn union(&self, other: &Product) -> Product {
        Product(self.0.union(&other.0).cloned().collect())
    }

    fn without(&self, id: &str) -> Product {
        let mut s = self.0.clone();
        s.remove(id);
        Product(s)
    }
}

/// Display ordering for cut sets: size first, then lexicographic ids.
impl Ord for Product {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Product {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, lit) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, "}}")
    }
}

/// A negation-free sum of products, kept absorption-normalized: no product
/// is a superset of another. The empty sum denotes the constant FALSE; the
/// sum holding only the empty product denotes the constant TRUE.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Dnf(BTreeSet<Product>);

impl Dnf {
    /// Constant FALSE.
    pub fn constant_false() -> Self {
        Dnf::default()
    }

    /// Constant TRUE.
    pub fn constant_true() -> Self {
        let mut set = BTreeSet::new();
        set.insert(Product::top());
        Dnf(set)
    }

    pub fn literal(id: impl Into<String>) -> Self {
        let mut set = BTreeSet::new();
        set.insert(Product::new([id.into()]));
        Dnf(set)
    }

    /// Builds a normalized sum from arbitrary products: idempotence comes
    /// from set semantics, absorption from the insertion rule. This is the
    /// normalization operation; a [`Dnf`] never leaves it.
    pub fn from_products(
        products: impl IntoIterator<Item = Product>,
        cap: usize,
    ) -> Result<Self, CutsetError> {
        let mut dnf = Dnf::default();
        for p in products {
            dnf.insert_absorb(p);
            if dnf.0.len() > cap {
                return Err(CutsetError::CapExceeded { cap });
            }
        }
        Ok(dnf)
    }

    pub fn is_false(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.0.iter().any(Product::is_empty)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Products in display order (size, then lexicographic).
    pub fn products(&self) -> impl Iterator<Item = &Product> {
        self.0.iter()
    }

    pub fn contains_literal(&self, id: &str) -> bool {
        self.0.iter().any(|p| p.contains(id))
    }

    /// Distinct literals for which `pred` holds.
    pub fn literals_where<'a>(&'a self, pred: impl Fn(&str) -> bool + 'a) -> BTreeSet<&'a str> {
        self.0
            .iter()
            .flat_map(Product::literals)
            .filter(|lit| pred(lit))
            .collect()
    }

    /// Truth under a literal valuation. The empty product is TRUE.
    pub fn eval(&self, truth: impl Fn(&str) -> bool) -> bool {
        self.0.iter().any(|p| p.literals().all(&truth))
    }

    fn insert_absorb(&mut self, p: Product) {
        for q in &self.0 {
            if q.is_subset(&p) {
                return; // p is redundant
            }
        }
        self.0.retain(|q| !p.is_subset(q));
        self.0.insert(p);
    }

    pub fn or(&self, other: &Dnf, cap: usize) -> Result<Dnf, CutsetError> {
        let mut out = self.clone();
        for p in &other.0 {
            out.insert_absorb(p.clone());
            if out.0.len() > cap {
                return Err(CutsetError::CapExceeded { cap });
            }
        }
        Ok(out)
    }

    pub fn and(&self, other: &Dnf, cap: usize) -> Result<Dnf, CutsetError> {
        let mut out = Dnf::default();
        for p in &self.0 {
            for q in &other.0 {
                out.insert_absorb(p.union(q));
                if out.0.len() > cap {
                    return Err(CutsetError::CapExceeded { cap });
                }
            }
        }
        Ok(out)
    }

    /// Converts an expression to a normalized sum of products over its
    /// referenced identifiers. K-out-of-N nodes are expanded first.
    pub fn from_expr(expr: &Expr, cap: usize) -> Result<Dnf, CutsetError> {
        match expr {
            Expr::Ref(id) => Ok(Dnf::literal(id.clone())),
            Expr::Or(children) => {
                let mut acc = Dnf::constant_false();
                for c in children {
                    acc = acc.or(&Dnf::from_expr(c, cap)?, cap)?;
                }
                Ok(acc)
            }
            Expr::And(children) => {
                let mut acc = Dnf::constant_true();
                for c in children {
                    acc = acc.and(&Dnf::from_expr(c, cap)?, cap)?;
                }
                Ok(acc)
            }
            Expr::KooN { .. } => Dnf::from_expr(&expr.expand_koon(), cap),
        }
    }

    /// Replaces every occurrence of literal `id` by `replacement`,
    /// renormalizing.
    pub fn substitute(&self, id: &str, replacement: &Dnf, cap: usize) -> Result<Dnf, CutsetError> {
        let mut out = Dnf::default();
        for p in &self.0 {
            if !p.contains(id) {
                out.insert_absorb(p.clone());
                if out.0.len() > cap {
                    return Err(CutsetError::CapExceeded { cap });
                }
                continue;
            }
            let base = p.without(id);
            for r in &replacement.0 {
                out.insert_absorb(base.union(r));
                if out.0.len() > cap {
                    return Err(CutsetError::CapExceeded { cap });
                }
            }
        }
        Ok(out)
    }
}

/// Re-normalizes a sum of products (idempotence + absorption to a fixed
/// point). On an already constructed [`Dnf`] this is the identity.
pub fn normalize(dnf: &Dnf, cap: usize) -> Result<Dnf, CutsetError> {
    Dnf::from_products(dnf.0.iter().cloned(), cap)
}

/// Least solution of `x = dnf` where `dnf` may mention `x`: every product
/// containing `x` is dropped. Inserting FALSE for the looped input of
/// `X = A | (B & X)` leaves exactly `A`.
pub fn eliminate_self(x: &str, dnf: &Dnf) -> Dnf {
    Dnf(dnf.0.iter().filter(|p| !p.contains(x)).cloned().collect())
}

/// The main equations of one strongly connected component: every member
/// gate's body as a sum of products over basic events and member gate ids,
/// with gates below the component already eliminated down to basic events
/// (least-solution semantics).
#[derive(Debug, Clone, PartialEq)]
pub struct EquationSystem {
    members: Vec<String>,
    equations: BTreeMap<String, Dnf>,
}

impl EquationSystem {
    /// Component members, lexicographically sorted.
    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn equation(&self, gate: &str) -> Option<&Dnf> {
        self.equations.get(gate)
    }

    pub fn equations(&self) -> impl Iterator<Item = (&str, &Dnf)> {
        self.equations.iter().map(|(id, dnf)| (id.as_str(), dnf))
    }

    /// The basic-only coefficient of a member's equation: the sum of its
    /// products that mention no member gate. A TRUE coefficient forces the
    /// gate in every consistent state, so a dual gate always has a FALSE
    /// one.
    pub fn basic_coefficient(&self, gate: &str) -> Option<Dnf> {
        let eq = self.equations.get(gate)?;
        Some(Dnf(
            eq.0.iter()
                .filter(|p| !p.literals().any(|lit| self.members.iter().any(|m| m == lit)))
                .cloned()
                .collect(),
        ))
    }
}

/// Shared bottom-up elimination state: `solved` maps every gate of an
/// already-processed component to its basics-only sum.
struct ComponentSolver<'t> {
    tree: &'t FaultTree,
    cap: usize,
    solved: BTreeMap<String, Dnf>,
}

impl<'t> ComponentSolver<'t> {
    fn new(tree: &'t FaultTree, cap: usize) -> Self {
        ComponentSolver { tree, cap, solved: BTreeMap::new() }
    }

    /// Member bodies as DNF with every out-of-component gate literal
    /// replaced by its solved basics-only sum.
    fn local_equations(
        &self,
        members: &BTreeSet<String>,
    ) -> Result<BTreeMap<String, Dnf>, CutsetError> {
        let mut local = BTreeMap::new();
        for member in members {
            let body = &self.tree.gate(member).expect("validated gate").body;
            let mut dnf = Dnf::from_expr(body, self.cap)?;
            let outside: Vec<String> = dnf
                .literals_where(|lit| self.tree.is_gate(lit) && !members.contains(lit))
                .into_iter()
                .map(str::to_string)
                .collect();
            for g in outside {
                let repl = self.solved.get(&g).expect("reverse topological order");
                dnf = dnf.substitute(&g, repl, self.cap)?;
            }
            local.insert(member.clone(), dnf);
        }
        Ok(local)
    }

    /// Gaussian-style pass in lexicographic member order: resolve one
    /// member's self-dependence, substitute it everywhere else. Extends
    /// `solved` with the component's basics-only sums.
    fn eliminate_component(&mut self, members: &BTreeSet<String>) -> Result<(), CutsetError> {
        let mut local = self.local_equations(members)?;
        let order: Vec<String> = members.iter().cloned().collect();
        for x in &order {
            let resolved = eliminate_self(x, &local[x]);
            local.insert(x.clone(), resolved.clone());
            for y in &order {
                if y != x {
                    let updated = local[y].substitute(x, &resolved, self.cap)?;
                    local.insert(y.clone(), updated);
                }
            }
        }
        self.solved.append(&mut local);
        Ok(())
    }
}

/// Builds the main equations of the component containing `gate`, with
/// everything below it eliminated. Purely structural (no repairability
/// restriction), but the eliminated lower components are interpreted under
/// least-solution semantics.
pub fn equation_system(
    tree: &FaultTree,
    gate: &str,
    cap: usize,
) -> Result<EquationSystem, CutsetError> {
    let reach = tree
        .reachable_from(gate)
        .ok_or_else(|| CutsetError::UnknownGate(gate.to_string()))?;
    let mut solver = ComponentSolver::new(tree, cap);
    for component in gate_scc_partition(tree) {
        let members: BTreeSet<String> = component
            .iter()
            .map(|&gi| tree.gates()[gi].id.clone())
            .collect();
        if members.contains(gate) {
            let equations = solver.local_equations(&members)?;
            return Ok(EquationSystem { members: members.into_iter().collect(), equations });
        }
        if members.iter().any(|m| reach.gates.contains(m)) {
            solver.eliminate_component(&members)?;
        }
    }
    unreachable!("every gate belongs to a component")
}

/// Minimal cut sets of `top` over basic events, with the default product cap.
pub fn minimal_cut_sets(tree: &FaultTree, top: &str) -> Result<Dnf, CutsetError> {
    minimal_cut_sets_with_cap(tree, top, DEFAULT_PRODUCT_CAP)
}

/// Minimal cut sets of `top` over basic events.
///
/// Requires every basic event reachable from `top` to be non-repairable.
/// For every total assignment, the returned sum evaluates exactly to the
/// least-fixed-point value of `top`.
pub fn minimal_cut_sets_with_cap(
    tree: &FaultTree,
    top: &str,
    cap: usize,
) -> Result<Dnf, CutsetError> {
    let reach = tree
        .reachable_from(top)
        .ok_or_else(|| CutsetError::UnknownGate(top.to_string()))?;

    let repairable: Vec<String> = reach
        .basics
        .iter()
        .filter(|id| tree.basic(id).map(|b| b.kind) == Some(EventKind::Repairable))
        .cloned()
        .collect();
    if !repairable.is_empty() {
        return Err(CutsetError::RepairableUnsupported { ids: repairable });
    }

    // Components arrive dependencies-first, so every gate literal outside
    // the current component is already solved down to basic events.
    let mut solver = ComponentSolver::new(tree, cap);
    for component in gate_scc_partition(tree) {
        let members: BTreeSet<String> = component
            .iter()
            .map(|&gi| tree.gates()[gi].id.clone())
            .collect();
        if members.iter().any(|m| reach.gates.contains(m)) {
            solver.eliminate_component(&members)?;
        }
    }

    Ok(solver.solved.remove(top).expect("target gate is reachable from itself"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::eval_least_fixpoint;
    use crate::model::{Assignment, BasicEventDef, Expr, FaultTree, GateDef};

    const CAP: usize = DEFAULT_PRODUCT_CAP;

    fn products(dnf: &Dnf) -> Vec<Vec<String>> {
        dnf.products()
            .map(|p| p.literals().map(str::to_string).collect())
            .collect()
    }

    fn two_gate_loop(aa_repairable: bool) -> FaultTree {
        let aa = if aa_repairable {
            BasicEventDef::repairable("Aa")
        } else {
            BasicEventDef::nonrepairable("Aa")
        };
        FaultTree::new(
            vec![
                aa,
                BasicEventDef::nonrepairable("Ab"),
                BasicEventDef::nonrepairable("Ba"),
                BasicEventDef::nonrepairable("Bb"),
            ],
            vec![
                GateDef::new(
                    "A",
                    Expr::or(vec![
                        Expr::var("Aa"),
                        Expr::and(vec![Expr::var("Ab"), Expr::var("B")]),
                    ]),
                ),
                GateDef::new(
                    "B",
                    Expr::or(vec![
                        Expr::var("Bb"),
                        Expr::and(vec![Expr::var("Ba"), Expr::var("A")]),
                    ]),
                ),
            ],
            vec!["A".into(), "B".into()],
        )
        .unwrap()
    }

    #[test]
    fn absorption_drops_supersets() {
        let dnf =
            Dnf::from_products([Product::new(["a", "b"]), Product::new(["a"])], CAP).unwrap();
        assert_eq!(products(&dnf), [["a"]]);
    }

    #[test]
    fn idempotence_via_set_semantics() {
        let dnf = Dnf::from_products([Product::new(["a", "a", "b"])], CAP).unwrap();
        assert_eq!(products(&dnf), [["a", "b"]]);
    }

    #[test]
    fn absorption_keeps_incomparable_products() {
        let dnf = Dnf::from_products(
            [Product::new(["a"]), Product::new(["b"]), Product::new(["a", "b"])],
            CAP,
        )
        .unwrap();
        assert_eq!(products(&dnf), [vec!["a"], vec!["b"]]);
    }

    #[test]
    fn normalize_is_identity_on_normalized_input() {
        let dnf = Dnf::from_products([Product::new(["a"]), Product::new(["b", "c"])], CAP).unwrap();
        assert_eq!(normalize(&dnf, CAP).unwrap(), dnf);
    }

    #[test]
    fn eliminate_self_drops_looped_products() {
        let dnf = Dnf::from_products(
            [
                Product::new(["e1"]),
                Product::new(["e2", "X"]),
                Product::new(["e3", "e4", "X"]),
            ],
            CAP,
        )
        .unwrap();
        assert_eq!(products(&eliminate_self("X", &dnf)), [["e1"]]);
    }

    #[test]
    fn eliminate_self_of_pure_self_loop_is_false() {
        let dnf = Dnf::from_products([Product::new(["X"])], CAP).unwrap();
        assert!(eliminate_self("X", &dnf).is_false());
    }

    #[test]
    fn eliminate_self_without_occurrence_is_identity() {
        let dnf = Dnf::from_products([Product::new(["e1"])], CAP).unwrap();
        assert_eq!(eliminate_self("X", &dnf), dnf);
    }

    #[test]
    fn loop_model_cut_sets_for_a() {
        let tree = two_gate_loop(false);
        let mcs = minimal_cut_sets(&tree, "A").unwrap();
        assert_eq!(products(&mcs), vec![vec!["Aa"], vec!["Ab", "Bb"]]);
    }

    /// Expected value confirmed against the fixpoint evaluator over all 16
    /// assignments below.
    #[test]
    fn loop_model_cut_sets_for_b() {
        let tree = two_gate_loop(false);
        let mcs = minimal_cut_sets(&tree, "B").unwrap();
        assert_eq!(products(&mcs), vec![vec!["Bb"], vec!["Aa", "Ba"]]);
    }

    #[test]
    fn acyclic_tree_is_already_its_own_answer() {
        let tree = FaultTree::new(
            vec![
                BasicEventDef::nonrepairable("e1"),
                BasicEventDef::nonrepairable("e2"),
                BasicEventDef::nonrepairable("e3"),
            ],
            vec![GateDef::new(
                "A",
                Expr::or(vec![
                    Expr::var("e1"),
                    Expr::and(vec![Expr::var("e2"), Expr::var("e3")]),
                ]),
            )],
            vec!["A".into()],
        )
        .unwrap();
        let mcs = minimal_cut_sets(&tree, "A").unwrap();
        assert_eq!(products(&mcs), vec![vec!["e1"], vec!["e2", "e3"]]);
    }

    #[test]
    fn repairable_events_are_rejected_by_name() {
        let tree = two_gate_loop(true);
        let err = minimal_cut_sets(&tree, "A").unwrap_err();
        assert_eq!(err, CutsetError::RepairableUnsupported { ids: vec!["Aa".into()] });
    }

    #[test]
    fn repairable_outside_the_cone_is_fine() {
        let tree = FaultTree::new(
            vec![BasicEventDef::nonrepairable("e"), BasicEventDef::repairable("r")],
            vec![GateDef::new("A", Expr::var("e")), GateDef::new("R", Expr::var("r"))],
            vec!["A".into(), "R".into()],
        )
        .unwrap();
        assert!(minimal_cut_sets(&tree, "A").is_ok());
        assert!(minimal_cut_sets(&tree, "R").is_err());
    }

    #[test]
    fn unknown_gate_is_reported() {
        let tree = two_gate_loop(false);
        assert_eq!(
            minimal_cut_sets(&tree, "Zz").unwrap_err(),
            CutsetError::UnknownGate("Zz".into())
        );
    }

    #[test]
    fn cap_is_enforced() {
        // (a1|b1) & (a2|b2) & (a3|b3) & (a4|b4) has 16 products.
        let mut basics = Vec::new();
        let mut factors = Vec::new();
        for i in 0..4 {
            basics.push(BasicEventDef::nonrepairable(format!("a{i}")));
            basics.push(BasicEventDef::nonrepairable(format!("b{i}")));
            factors.push(Expr::or(vec![
                Expr::var(format!("a{i}")),
                Expr::var(format!("b{i}")),
            ]));
        }
        let tree =
            FaultTree::new(basics, vec![GateDef::new("G", Expr::and(factors))], vec!["G".into()])
                .unwrap();
        assert_eq!(
            minimal_cut_sets_with_cap(&tree, "G", 10).unwrap_err(),
            CutsetError::CapExceeded { cap: 10 }
        );
        assert_eq!(minimal_cut_sets_with_cap(&tree, "G", 16).unwrap().len(), 16);
    }

    #[test]
    fn self_loop_only_gate_has_no_cut_sets() {
        let tree =
            FaultTree::new(vec![], vec![GateDef::new("A", Expr::var("A"))], vec!["A".into()])
                .unwrap();
        assert!(minimal_cut_sets(&tree, "A").unwrap().is_false());
    }

    #[test]
    fn constants_render() {
        assert_eq!(Product::top().to_string(), "{}");
        assert_eq!(Product::new(["b", "a"]).to_string(), "{a,b}");
        assert!(Dnf::constant_true().is_true());
        assert!(Dnf::constant_false().is_false());
    }

    #[test]
    fn equation_system_of_the_loop_pair() {
        let tree = two_gate_loop(false);
        let sys = equation_system(&tree, "A", CAP).unwrap();
        assert_eq!(sys.members(), ["A".to_string(), "B".to_string()]);
        assert_eq!(
            products(sys.equation("A").unwrap()),
            vec![vec!["Aa"], vec!["Ab", "B"]]
        );
        assert_eq!(products(&sys.basic_coefficient("A").unwrap()), [["Aa"]]);
        assert_eq!(products(&sys.basic_coefficient("B").unwrap()), [["Bb"]]);
        assert!(sys.basic_coefficient("Zz").is_none());
    }

    /// Gates below the component are eliminated before the system is
    /// reported, so member equations mention only basics and members.
    #[test]
    fn equation_system_eliminates_lower_gates() {
        let tree = FaultTree::new(
            vec![
                BasicEventDef::nonrepairable("Aa"),
                BasicEventDef::nonrepairable("Ab"),
                BasicEventDef::nonrepairable("Ba"),
                BasicEventDef::nonrepairable("c1"),
                BasicEventDef::nonrepairable("c2"),
            ],
            vec![
                GateDef::new(
                    "A",
                    Expr::or(vec![
                        Expr::var("Aa"),
                        Expr::and(vec![Expr::var("Ab"), Expr::var("B")]),
                    ]),
                ),
                GateDef::new(
                    "B",
                    Expr::or(vec![
                        Expr::and(vec![Expr::var("Ba"), Expr::var("A")]),
                        Expr::var("C"),
                    ]),
                ),
                GateDef::new("C", Expr::and(vec![Expr::var("c1"), Expr::var("c2")])),
            ],
            vec!["A".into()],
        )
        .unwrap();
        let sys = equation_system(&tree, "B", CAP).unwrap();
        assert_eq!(sys.members(), ["A".to_string(), "B".to_string()]);
        assert_eq!(
            products(sys.equation("B").unwrap()),
            vec![vec!["A".to_string(), "Ba".into()], vec!["c1".into(), "c2".into()]]
        );
        assert_eq!(products(&sys.basic_coefficient("B").unwrap()), [["c1", "c2"]]);
    }

    /// Truth of the derived cut sets equals the least fixed point on every
    /// assignment of the loop model, and single-event removal breaks every
    /// cut.
    #[test]
    fn cut_sets_agree_with_fixpoint_and_are_minimal() {
        let tree = two_gate_loop(false);
        for top in ["A", "B"] {
            let mcs = minimal_cut_sets(&tree, top).unwrap();
            let ids = ["Aa", "Ab", "Ba", "Bb"];
            for bits in 0..16u32 {
                let a = Assignment::from_pairs(
                    ids.iter().enumerate().map(|(i, id)| (*id, bits & (1 << i) != 0)),
                );
                let expected = eval_least_fixpoint(&tree, &a).get(top).unwrap();
                assert_eq!(mcs.eval(|lit| a.get(lit).unwrap()), expected, "top={top} bits={bits:04b}");
            }
            for cut in mcs.products() {
                let full = Assignment::from_pairs(
                    ids.iter().map(|id| (*id, cut.contains(id))),
                );
                assert_eq!(eval_least_fixpoint(&tree, &full).get(top), Some(true));
                for dropped in cut.literals() {
                    let weakened = Assignment::from_pairs(
                        ids.iter().map(|id| (*id, cut.contains(id) && *id != dropped)),
                    );
                    assert_eq!(eval_least_fixpoint(&tree, &weakened).get(top), Some(false));
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// Normalization never changes the truth table.
            #[test]
            fn normalization_preserves_truth(
                raw in proptest::collection::vec(
                    proptest::collection::vec(0usize..5, 0..4),
                    0..8,
                )
            ) {
                let products: Vec<Product> = raw
                    .iter()
                    .map(|lits| Product::new(lits.iter().map(|i| format!("l{i}"))))
                    .collect();
                let dnf = Dnf::from_products(products.clone(), CAP).unwrap();
                for bits in 0u32..32 {
                    let truth = |lit: &str| {
                        let i: usize = lit[1..].parse().unwrap();
                        bits & (1 << i) != 0
                    };
                    let raw_truth =
                        products.iter().any(|p| p.literals().all(truth));
                    prop_assert_eq!(dnf.eval(truth), raw_truth, "bits={:b}", bits);
                }
            }

            /// AND/OR composition matches pointwise Boolean combination.
            #[test]
            fn compose_matches_boolean_ops(
                left in proptest::collection::vec(proptest::collection::vec(0usize..4, 1..3), 0..5),
                right in proptest::collection::vec(proptest::collection::vec(0usize..4, 1..3), 0..5),
            ) {
                let mk = |raw: &Vec<Vec<usize>>| {
                    Dnf::from_products(
                        raw.iter().map(|lits| Product::new(lits.iter().map(|i| format!("l{i}")))),
                        CAP,
                    )
                    .unwrap()
                };
                let a = mk(&left);
                let b = mk(&right);
                let or = a.or(&b, CAP).unwrap();
                let and = a.and(&b, CAP).unwrap();
                for bits in 0u32..16 {
                    let truth = |lit: &str| {
                        let i: usize = lit[1..].parse().unwrap();
                        bits & (1 << i) != 0
                    };
                    prop_assert_eq!(or.eval(truth), a.eval(truth) || b.eval(truth));
                    prop_assert_eq!(and.eval(truth), a.eval(truth) && b.eval(truth));
                }
            }
        }
    }
}
