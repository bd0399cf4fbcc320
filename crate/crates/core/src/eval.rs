//! Index-compiled gate evaluation shared by the analysis modules.
//!
//! Public entry points work with id-keyed [`Assignment`]/[`StateVector`]
//! maps; the hot loops here run on plain bit vectors aligned to the tree's
//! declaration order.

use crate::model::{Assignment, Expr, FaultTree, StateVector};

enum Node {
    Basic(usize),
    Gate(usize),
    And(Vec<Node>),
    Or(Vec<Node>),
    /// K-out-of-N evaluated by counting; equivalent to the AND/OR expansion.
    AtLeast { k: usize, items: Vec<Node> },
}

pub(crate) struct Evaluator<'t> {
    tree: &'t FaultTree,
    bodies: Vec<Node>,
}

impl<'t> Evaluator<'t> {
    pub fn new(tree: &'t FaultTree) -> Self {
        let bodies = tree.gates().iter().map(|g| compile(tree, &g.body)).collect();
        Evaluator { tree, bodies }
    }

    pub fn n_gates(&self) -> usize {
        self.bodies.len()
    }

    pub fn n_basics(&self) -> usize {
        self.tree.basics().len()
    }

    /// One synchronous sweep: every gate body evaluated against the previous
    /// state `cur`, results written to `next`.
    pub fn sweep_into(&self, basics: &[bool], cur: &[bool], next: &mut [bool]) {
        for (i, body) in self.bodies.iter().enumerate() {
            next[i] = eval_node(body, basics, cur);
        }
    }

    pub fn sweep(&self, basics: &[bool], cur: &[bool]) -> Vec<bool> {
        let mut next = vec![false; cur.len()];
        self.sweep_into(basics, cur, &mut next);
        next
    }

    /// Evaluates one gate's body against `cur`.
    pub fn eval_gate(&self, gate: usize, basics: &[bool], cur: &[bool]) -> bool {
        eval_node(&self.bodies[gate], basics, cur)
    }

    pub fn is_consistent(&self, basics: &[bool], state: &[bool]) -> bool {
        self.bodies
            .iter()
            .enumerate()
            .all(|(i, body)| eval_node(body, basics, state) == state[i])
    }

    /// Least fixed point: synchronous sweeps from the all-FALSE gate state
    /// until stable. Monotone ascent, so at most `n_gates + 1` sweeps.
    pub fn least_fixpoint(&self, basics: &[bool]) -> Vec<bool> {
        let mut cur = vec![false; self.n_gates()];
        let mut next = vec![false; self.n_gates()];
        loop {
            self.sweep_into(basics, &cur, &mut next);
            if next == cur {
                return cur;
            }
            std::mem::swap(&mut cur, &mut next);
        }
    }

    /// Bits for an assignment, aligned to basic declaration order.
    ///
    /// Panics when the assignment is not total for the tree; totality is the
    /// documented precondition of every caller.
    pub fn assignment_bits(&self, a: &Assignment) -> Vec<bool> {
        self.tree
            .basics()
            .iter()
            .map(|b| {
                a.get(&b.id)
                    .unwrap_or_else(|| panic!("assignment missing basic event `{}`", b.id))
            })
            .collect()
    }

    /// Bits for a gate-state vector, aligned to gate declaration order.
    ///
    /// Panics when the vector is not total for the tree.
    pub fn state_bits(&self, s: &StateVector) -> Vec<bool> {
        self.tree
            .gates()
            .iter()
            .map(|g| {
                s.get(&g.id)
                    .unwrap_or_else(|| panic!("state vector missing gate `{}`", g.id))
            })
            .collect()
    }

    pub fn bits_to_state(&self, bits: &[bool]) -> StateVector {
        StateVector::from_pairs(
            self.tree
                .gates()
                .iter()
                .zip(bits)
                .map(|(g, &v)| (g.id.clone(), v)),
        )
    }

    pub fn bits_to_assignment(&self, bits: &[bool]) -> Assignment {
        Assignment::from_pairs(
            self.tree
                .basics()
                .iter()
                .zip(bits)
                .map(|(b, &v)| (b.id.clone(), v)),
        )
    }
}

fn compile(tree: &FaultTree, expr: &Expr) -> Node {
    let leaf = |id: &str| -> Node {
        if let Some(i) = tree.basic_position(id) {
            Node::Basic(i)
        } else {
            Node::Gate(tree.gate_position(id).expect("validated reference"))
        }
    };
    match expr {
        Expr::Ref(id) => leaf(id),
        Expr::And(children) => Node::And(children.iter().map(|c| compile(tree, c)).collect()),
        Expr::Or(children) => Node::Or(children.iter().map(|c| compile(tree, c)).collect()),
        Expr::KooN { k, inputs } => Node::AtLeast {
            k: *k,
            items: inputs.iter().map(|id| leaf(id)).collect(),
        },
    }
}

fn eval_node(node: &Node, basics: &[bool], gates: &[bool]) -> bool {
    match node {
        Node::Basic(i) => basics[*i],
        Node::Gate(i) => gates[*i],
        Node::And(children) => children.iter().all(|c| eval_node(c, basics, gates)),
        Node::Or(children) => children.iter().any(|c| eval_node(c, basics, gates)),
        Node::AtLeast { k, items } => {
            let mut count = 0;
            for item in items {
                if eval_node(item, basics, gates) {
                    count += 1;
                    if count >= *k {
                        return true;
                    }
                }
            }
            false
        }
    }
}
