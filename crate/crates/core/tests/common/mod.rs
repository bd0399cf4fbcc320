//! Shared fixtures for the integration suites: a seeded random-tree
//! generator and a brute-force consistency oracle kept deliberately
//! independent of the library's compiled evaluator.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use loopft::model::{Assignment, BasicEventDef, Expr, FaultTree, GateDef};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random tree with at least one gate cycle: a shuffled ring of gates is
/// wired with guarded references, then each gate gets extra random OR-terms
/// (including occasional K-out-of-N nodes). All basics are non-repairable;
/// probabilities are attached when `with_probs` is set.
pub fn random_cyclic_tree(
    rng: &mut ChaCha8Rng,
    max_gates: usize,
    max_basics: usize,
    with_probs: bool,
) -> FaultTree {
    let n_gates = rng.gen_range(2..=max_gates.max(2));
    let n_basics = rng.gen_range(1..=max_basics.max(1));
    let gate_ids: Vec<String> = (0..n_gates).map(|i| format!("g{i}")).collect();
    let basic_ids: Vec<String> = (0..n_basics).map(|i| format!("e{i}")).collect();

    let random_ref = |rng: &mut ChaCha8Rng| -> String {
        if rng.gen_bool(0.7) || n_gates == 0 {
            basic_ids[rng.gen_range(0..n_basics)].clone()
        } else {
            gate_ids[rng.gen_range(0..n_gates)].clone()
        }
    };

    let mut terms: Vec<Vec<Expr>> = vec![Vec::new(); n_gates];
    for slot in terms.iter_mut() {
        for _ in 0..rng.gen_range(1..=3) {
            let lits: Vec<Expr> =
                (0..rng.gen_range(1..=3)).map(|_| Expr::var(random_ref(rng))).collect();
            slot.push(if lits.len() == 1 {
                lits.into_iter().next().unwrap()
            } else {
                Expr::and(lits)
            });
        }
        if rng.gen_bool(0.25) {
            let arity = rng.gen_range(2..=4.min(n_basics + n_gates));
            let pool: Vec<String> = basic_ids
                .iter()
                .chain(gate_ids.iter())
                .cloned()
                .collect::<Vec<_>>()
                .choose_multiple(rng, arity)
                .cloned()
                .collect();
            let k = rng.gen_range(1..=pool.len());
            slot.push(Expr::koon(k, pool));
        }
    }

    // Guarantee a cycle: shuffle, pick a ring, and add guarded ring edges.
    let mut order: Vec<usize> = (0..n_gates).collect();
    order.shuffle(rng);
    let ring_len = rng.gen_range(2..=n_gates);
    for i in 0..ring_len {
        let from = order[i];
        let to = order[(i + 1) % ring_len];
        let guard = basic_ids[rng.gen_range(0..n_basics)].clone();
        terms[from].push(Expr::and(vec![Expr::var(guard), Expr::var(gate_ids[to].clone())]));
    }

    let basics = basic_ids
        .iter()
        .map(|id| {
            let mut def = BasicEventDef::nonrepairable(id.clone());
            if with_probs {
                def.prob = Some(rng.gen_range(0.0..=1.0));
            }
            def
        })
        .collect();
    let gates = gate_ids
        .iter()
        .zip(terms)
        .map(|(id, mut terms)| {
            let body =
                if terms.len() == 1 { terms.pop().unwrap() } else { Expr::or(terms) };
            GateDef::new(id.clone(), body)
        })
        .collect();

    FaultTree::new(basics, gates, vec![gate_ids[0].clone()]).expect("generated tree is valid")
}

/// Direct recursive evaluation of an expression under explicit maps. This
/// is the oracle path: it shares no code with the library's evaluator.
pub fn naive_eval(expr: &Expr, basics: &BTreeMap<String, bool>, gates: &BTreeMap<String, bool>) -> bool {
    match expr {
        Expr::Ref(id) => basics
            .get(id)
            .or_else(|| gates.get(id))
            .copied()
            .expect("reference resolves"),
        Expr::And(children) => children.iter().all(|c| naive_eval(c, basics, gates)),
        Expr::Or(children) => children.iter().any(|c| naive_eval(c, basics, gates)),
        Expr::KooN { k, inputs } => {
            inputs
                .iter()
                .filter(|id| {
                    basics.get(*id).or_else(|| gates.get(*id)).copied().expect("input resolves")
                })
                .count()
                >= *k
        }
    }
}

/// Brute force over all 2^G gate vectors: every vector where each gate
/// equation holds. Usable up to ~16 gates.
pub fn naive_consistent_states(
    tree: &FaultTree,
    a: &Assignment,
) -> Vec<BTreeMap<String, bool>> {
    let basics: BTreeMap<String, bool> =
        tree.basics().iter().map(|b| (b.id.clone(), a.get(&b.id).unwrap())).collect();
    let n = tree.gates().len();
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << n) {
        let gates: BTreeMap<String, bool> = tree
            .gates()
            .iter()
            .enumerate()
            .map(|(i, g)| (g.id.clone(), bits & (1 << i) != 0))
            .collect();
        let consistent = tree
            .gates()
            .iter()
            .all(|g| naive_eval(&g.body, &basics, &gates) == gates[&g.id]);
        if consistent {
            out.push(gates);
        }
    }
    out
}

/// Assignment from a bit mask over the tree's basics in declaration order
/// (bit 0 = first declared basic).
pub fn assignment_from_mask(tree: &FaultTree, mask: u64) -> Assignment {
    Assignment::from_pairs(
        tree.basics()
            .iter()
            .enumerate()
            .map(|(i, b)| (b.id.clone(), mask & (1 << i) != 0)),
    )
}

/// Rebuilds the tree with every gate renamed through `rename`, adjusting
/// all references. Cut sets are over basics, so results stay comparable.
pub fn rename_gates(tree: &FaultTree, rename: &BTreeMap<String, String>) -> FaultTree {
    fn rename_expr(expr: &Expr, rename: &BTreeMap<String, String>) -> Expr {
        match expr {
            Expr::Ref(id) => Expr::var(rename.get(id).cloned().unwrap_or_else(|| id.clone())),
            Expr::And(children) => {
                Expr::and(children.iter().map(|c| rename_expr(c, rename)).collect())
            }
            Expr::Or(children) => {
                Expr::or(children.iter().map(|c| rename_expr(c, rename)).collect())
            }
            Expr::KooN { k, inputs } => Expr::koon(
                *k,
                inputs
                    .iter()
                    .map(|id| rename.get(id).cloned().unwrap_or_else(|| id.clone())),
            ),
        }
    }
    let gates = tree
        .gates()
        .iter()
        .map(|g| {
            GateDef::new(
                rename.get(&g.id).cloned().unwrap_or_else(|| g.id.clone()),
                rename_expr(&g.body, rename),
            )
        })
        .collect();
    let tops = tree
        .tops()
        .iter()
        .map(|t| rename.get(t).cloned().unwrap_or_else(|| t.clone()))
        .collect();
    FaultTree::new(tree.basics().to_vec(), gates, tops).expect("renamed tree is valid")
}
