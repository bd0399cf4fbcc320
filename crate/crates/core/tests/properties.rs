//! Randomized cross-module properties, all against the brute-force oracle
//! in `common` (direct recursive evaluation over every candidate vector).

mod common;

use std::collections::BTreeMap;

use common::*;
use loopft::fixpoint::{eval_least_fixpoint, relax_from_state};
use loopft::loops::{analyze_structure, DependencyGraph};
use loopft::model::{Assignment, FaultTree, GateDef, StateVector};
use loopft::parse::{parse_tree, serialize, Trajectory, TrajectoryEvent};
use loopft::solutions::enumerate_solutions;
use loopft::{cutset, simulate};

#[test]
fn serialization_round_trips_generated_trees() {
    let mut rng = rng(0x5e_1a_11);
    for _ in 0..150 {
        let tree = random_cyclic_tree(&mut rng, 8, 10, true);
        let text = serialize(&tree);
        let back = parse_tree(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(tree, back, "round trip changed the tree:\n{text}");
    }
}

/// Validation is total: no operation on a validated tree panics or meets a
/// dangling reference.
#[test]
fn every_operation_is_total_on_valid_trees() {
    let mut rng = rng(0x707a1);
    for _ in 0..60 {
        let tree = random_cyclic_tree(&mut rng, 6, 6, true);
        let top = tree.tops()[0].clone();
        let a = assignment_from_mask(&tree, 0b1011);
        analyze_structure(&tree);
        let lfp = eval_least_fixpoint(&tree, &a);
        relax_from_state(&tree, &a, &lfp);
        let _ = cutset::minimal_cut_sets(&tree, &top).unwrap();
        enumerate_solutions(&tree, &a).unwrap();
        let traj = Trajectory {
            events: vec![TrajectoryEvent {
                time: 1.0,
                basic_id: tree.basics()[0].id.clone(),
                value: true,
            }],
        };
        simulate(&tree, &traj).unwrap();
    }
}

/// The least fixed point is a solution of the system and is pointwise below
/// every solution found by brute force; the enumerated solution set matches
/// the oracle exactly.
#[test]
fn least_fixpoint_is_the_minimum_of_the_oracle_solutions() {
    let mut rng = rng(0xbeef);
    for _ in 0..60 {
        let tree = random_cyclic_tree(&mut rng, 6, 6, false);
        let n = tree.basics().len();
        for mask in [0u64, 1, (1 << n) - 1, 0b101 % (1 << n)] {
            let a = assignment_from_mask(&tree, mask);
            let oracle = naive_consistent_states(&tree, &a);
            assert!(!oracle.is_empty());

            let lfp = eval_least_fixpoint(&tree, &a);
            let lfp_map: BTreeMap<String, bool> =
                lfp.iter().map(|(id, v)| (id.to_string(), v)).collect();
            assert!(oracle.contains(&lfp_map), "least fixpoint must satisfy the system");
            for sol in &oracle {
                for (g, &v) in &lfp_map {
                    assert!(!v || sol[g], "least fixpoint above a solution at {g}");
                }
            }

            let report = enumerate_solutions(&tree, &a).unwrap();
            let mut got: Vec<BTreeMap<String, bool>> = report
                .solutions
                .iter()
                .map(|s| s.iter().map(|(id, v)| (id.to_string(), v)).collect())
                .collect();
            let mut want = oracle.clone();
            got.sort();
            want.sort();
            assert_eq!(got, want, "enumerated solutions differ from the oracle");
        }
    }
}

#[test]
fn fixpoint_is_monotone_in_the_assignment() {
    let mut rng = rng(0x3030);
    use rand::Rng;
    for _ in 0..40 {
        let tree = random_cyclic_tree(&mut rng, 7, 8, false);
        let n = tree.basics().len();
        for _ in 0..20 {
            let lo: u64 = rng.gen_range(0..(1 << n));
            let hi = lo | rng.gen_range(0..(1u64 << n));
            let s_lo = eval_least_fixpoint(&tree, &assignment_from_mask(&tree, lo));
            let s_hi = eval_least_fixpoint(&tree, &assignment_from_mask(&tree, hi));
            assert!(s_lo.pointwise_le(&s_hi), "lo={lo:b} hi={hi:b}");
        }
    }
}

#[test]
fn relaxation_from_all_false_always_lands_on_the_least_fixpoint() {
    let mut rng = rng(0x0f0f);
    use rand::Rng;
    for _ in 0..40 {
        let tree = random_cyclic_tree(&mut rng, 7, 8, false);
        let n = tree.basics().len();
        for _ in 0..10 {
            let a = assignment_from_mask(&tree, rng.gen_range(0..(1 << n)));
            let res = relax_from_state(&tree, &a, &StateVector::all_false(&tree));
            assert_eq!(res.fixpoint(), Some(&eval_least_fixpoint(&tree, &a)));
        }
    }
}

/// If a gate is dual, the basic-only coefficient of its main equation must
/// evaluate FALSE: a true coefficient would force the gate in every
/// solution (every solution dominates the least fixed point, so the
/// eliminated lower gates can only be larger than the values the
/// coefficient was built from).
#[test]
fn dual_gates_have_false_basic_coefficients() {
    let mut rng = rng(0xd0a1);
    let mut dual_rows = 0;
    for _ in 0..60 {
        let tree = random_cyclic_tree(&mut rng, 5, 6, false);
        let coefficients: BTreeMap<String, cutset::Dnf> = tree
            .gates()
            .iter()
            .map(|g| {
                let sys =
                    cutset::equation_system(&tree, &g.id, cutset::DEFAULT_PRODUCT_CAP).unwrap();
                (g.id.clone(), sys.basic_coefficient(&g.id).unwrap())
            })
            .collect();
        let n = tree.basics().len();
        for mask in 0..(1u64 << n) {
            let a = assignment_from_mask(&tree, mask);
            let report = enumerate_solutions(&tree, &a).unwrap();
            for gate in tree.gates() {
                if !report.is_dual(&gate.id) {
                    continue;
                }
                dual_rows += 1;
                assert!(
                    !coefficients[&gate.id].eval(|lit| a.get(lit).unwrap()),
                    "dual gate {} has a TRUE basic coefficient at mask {mask:b}",
                    gate.id
                );
            }
        }
    }
    assert!(dual_rows > 0, "the sample never produced a dual solution");
}

/// Component order is a reverse topological sort of the condensation, for
/// arbitrary trees and any declaration order.
#[test]
fn condensation_order_and_declaration_invariance() {
    let mut rng = rng(0xcafe);
    use rand::seq::SliceRandom;
    for _ in 0..60 {
        let tree = random_cyclic_tree(&mut rng, 8, 6, false);
        let report = analyze_structure(&tree);

        let position: BTreeMap<&str, usize> = report
            .components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.gates.iter().map(move |g| (g.as_str(), i)))
            .collect();
        let graph = DependencyGraph::of(&tree);
        for (gi, gate) in graph.nodes().iter().enumerate() {
            for &s in graph.successors(gi) {
                assert!(position[graph.nodes()[s].as_str()] <= position[gate.as_str()]);
            }
        }

        let mut gates: Vec<GateDef> = tree.gates().to_vec();
        gates.shuffle(&mut rng);
        let shuffled =
            FaultTree::new(tree.basics().to_vec(), gates, tree.tops().to_vec()).unwrap();
        assert_eq!(report, analyze_structure(&shuffled));
    }
}

/// Simulating one upward flip per step is exactly fixpoint evaluation of
/// the final assignment, and a repaired run may disagree — the latch.
#[test]
fn latch_appears_only_with_repair() {
    let tree = parse_tree(
        "basic Aa kind=repairable\nbasic Ab\nbasic Ba\nbasic Bb\n\
         gate A = Aa | (Ab & B)\ngate B = Bb | (Ba & A)\ntop A\n",
    )
    .unwrap();
    let final_assignment =
        Assignment::from_pairs([("Aa", false), ("Ab", true), ("Ba", true), ("Bb", false)]);
    let lfp = eval_least_fixpoint(&tree, &final_assignment);
    assert_eq!(lfp.get("A"), Some(false));

    let up_only = Trajectory {
        events: vec![
            TrajectoryEvent { time: 1.0, basic_id: "Ab".into(), value: true },
            TrajectoryEvent { time: 2.0, basic_id: "Ba".into(), value: true },
        ],
    };
    let res = simulate(&tree, &up_only).unwrap();
    assert_eq!(res.final_state.as_ref(), Some(&lfp));

    let with_repair = Trajectory {
        events: vec![
            TrajectoryEvent { time: 1.0, basic_id: "Aa".into(), value: true },
            TrajectoryEvent { time: 2.0, basic_id: "Ab".into(), value: true },
            TrajectoryEvent { time: 3.0, basic_id: "Ba".into(), value: true },
            TrajectoryEvent { time: 4.0, basic_id: "Aa".into(), value: false },
        ],
    };
    let res = simulate(&tree, &with_repair).unwrap();
    assert_eq!(res.timeline.last().unwrap().assignment, final_assignment);
    assert_ne!(res.final_state.as_ref(), Some(&lfp));
}
