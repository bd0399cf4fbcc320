//! Gate dependency graph, strongly connected components, and loop
//! classification.
//!
//! Loop classes, from most to least constrained:
//!
//! * `Acyclic` — a single gate with no self-reference.
//! * `Ordinary` — every member gate depends on exactly one other member, so
//!   the component is a single cycle.
//! * `LinearInterrelated` — members may depend on several members, but no
//!   DNF product of any member's body contains two or more in-component
//!   gate references.
//! * `NonLinearInterrelated` — some product couples two or more members.
//!
//! Classification runs on the K-out-of-N-expanded bodies, normalized with
//! the same product cap as cut-set derivation; a component whose conversion
//! exceeds the cap is reported unclassified rather than failing the run.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeSet};

use crate::cutset::{Dnf, DEFAULT_PRODUCT_CAP};
use crate::model::FaultTree;

/// Gate-to-gate reference structure. Node order is gate declaration order.
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    nodes: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl DependencyGraph {
    /// Edges `g -> h` wherever gate `g`'s body references gate `h`
    /// (including K-out-of-N inputs).
    pub fn of(tree: &FaultTree) -> Self {
        let nodes: Vec<String> = tree.gates().iter().map(|g| g.id.clone()).collect();
        let adj = tree
            .gates()
            .iter()
            .map(|g| {
                g.body
                    .referenced_ids()
                    .into_iter()
                    .filter_map(|id| tree.gate_position(id))
                    .collect()
            })
            .collect();
        DependencyGraph { nodes, adj }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adj[from].contains(&to)
    }
}

/// Strongly connected components of the gate graph, dependencies first
/// (reverse topological), deterministic: ties between incomparable
/// components are broken by the lexicographically smallest member id.
pub(crate) fn gate_scc_partition(tree: &FaultTree) -> Vec<Vec<usize>> {
    let graph = DependencyGraph::of(tree);
    let comps = tarjan(&graph.adj);
    order_components(&graph, comps)
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // Explicit call stack of (node, next-child position).
        let mut calls: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut ci)) = calls.last_mut() {
            if *ci == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *ci < adj[v].len() {
                let w = adj[v][*ci];
                *ci += 1;
                if index[w] == UNSEEN {
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&mut (p, _)) = calls.last_mut() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Reorders Tarjan's output into the canonical order: a component appears
/// after everything it depends on; among the ready ones, the component with
/// the lexicographically smallest gate id goes first.
fn order_components(graph: &DependencyGraph, comps: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = comps.len();
    let mut comp_of = vec![0usize; graph.nodes.len()];
    for (ci, comp) in comps.iter().enumerate() {
        for &g in comp {
            comp_of[g] = ci;
        }
    }

    // deps[c] = distinct components c depends on; dependents = reverse.
    let mut pending = vec![0usize; n];
    let mut dependents: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (ci, comp) in comps.iter().enumerate() {
        let mut deps = BTreeSet::new();
        for &g in comp {
            for &s in graph.successors(g) {
                if comp_of[s] != ci {
                    deps.insert(comp_of[s]);
                }
            }
        }
        pending[ci] = deps.len();
        for d in deps {
            dependents[d].insert(ci);
        }
    }

    let smallest = |ci: usize| -> &String {
        comps[ci].iter().map(|&g| &graph.nodes[g]).min().expect("nonempty component")
    };

    let mut ready: BinaryHeap<Reverse<(String, usize)>> = (0..n)
        .filter(|&ci| pending[ci] == 0)
        .map(|ci| Reverse((smallest(ci).clone(), ci)))
        .collect();

    let mut out = Vec::with_capacity(n);
    while let Some(Reverse((_, ci))) = ready.pop() {
        out.push(comps[ci].clone());
        for &d in &dependents[ci] {
            pending[d] -= 1;
            if pending[d] == 0 {
                ready.push(Reverse((smallest(d).clone(), d)));
            }
        }
    }
    debug_assert_eq!(out.len(), n, "dependency condensation must be acyclic");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopClass {
    Acyclic,
    Ordinary,
    LinearInterrelated,
    NonLinearInterrelated,
}

impl LoopClass {
    pub fn label(self) -> &'static str {
        match self {
            LoopClass::Acyclic => "Acyclic",
            LoopClass::Ordinary => "Ordinary",
            LoopClass::LinearInterrelated => "LinearInterrelated",
            LoopClass::NonLinearInterrelated => "NonLinearInterrelated",
        }
    }
}

/// One strongly connected component and its loop class. `class` is `None`
/// only when DNF conversion for classification exceeded the product cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SccComponent {
    pub gates: Vec<String>,
    pub class: Option<LoopClass>,
}

/// Components in reverse topological order (dependencies first).
#[derive(Debug, Clone, PartialEq)]
pub struct SccReport {
    pub components: Vec<SccComponent>,
}

impl SccReport {
    pub fn component_of(&self, gate: &str) -> Option<&SccComponent> {
        self.components.iter().find(|c| c.gates.iter().any(|g| g == gate))
    }

    pub fn cap_exceeded(&self) -> bool {
        self.components.iter().any(|c| c.class.is_none())
    }
}

/// Computes SCCs and classifies each component, with the default product cap
/// for the classification DNFs.
pub fn analyze_structure(tree: &FaultTree) -> SccReport {
    analyze_structure_with_cap(tree, DEFAULT_PRODUCT_CAP)
}

pub fn analyze_structure_with_cap(tree: &FaultTree, cap: usize) -> SccReport {
    let graph = DependencyGraph::of(tree);
    let comps = order_components(&graph, tarjan(&graph.adj));
    let components = comps
        .into_iter()
        .map(|comp| {
            let class = classify(tree, &graph, &comp, cap);
            let mut gates: Vec<String> =
                comp.into_iter().map(|g| graph.nodes[g].clone()).collect();
            gates.sort();
            SccComponent { gates, class }
        })
        .collect();
    SccReport { components }
}

fn classify(
    tree: &FaultTree,
    graph: &DependencyGraph,
    comp: &[usize],
    cap: usize,
) -> Option<LoopClass> {
    let member_set: BTreeSet<usize> = comp.iter().copied().collect();
    if comp.len() == 1 && !graph.has_edge(comp[0], comp[0]) {
        return Some(LoopClass::Acyclic);
    }

    // Ordinary: each member references exactly one member. Together with
    // strong connectivity that forces a single cycle through all members.
    let ordinary = comp.iter().all(|&g| {
        graph
            .successors(g)
            .iter()
            .filter(|s| member_set.contains(s))
            .collect::<BTreeSet<_>>()
            .len()
            == 1
    });
    if ordinary {
        return Some(LoopClass::Ordinary);
    }

    let member_ids: BTreeSet<&str> =
        comp.iter().map(|&g| graph.nodes[g].as_str()).collect();
    let mut nonlinear = false;
    for &g in comp {
        let body = &tree.gates()[g].body;
        let dnf = Dnf::from_expr(body, cap).ok()?;
        for p in dnf.products() {
            let in_comp = p.literals().filter(|lit| member_ids.contains(lit)).count();
            if in_comp >= 2 {
                nonlinear = true;
            }
        }
    }
    Some(if nonlinear {
        LoopClass::NonLinearInterrelated
    } else {
        LoopClass::LinearInterrelated
    })
}
