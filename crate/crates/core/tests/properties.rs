//! Property tests over seeded random diagrams.

mod common;

use bddqsp::circuit::synth_state;
use bddqsp::diagram::Violation;
use bddqsp::generate::{random_fbdd, random_unreduced_bdd, random_wfbdd, GenConfig};
use bddqsp::simulator::simulate_with_stats;
use bddqsp::weighting::uniform_weights;
use bddqsp::Diagram;
use common::{bits_of, satisfying_count, truth_table};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn wfbdd_from_seed(seed: u64) -> Diagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=7);
    random_wfbdd(&mut rng, GenConfig { n, max_internals: 10 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weighted_diagrams_normalize_and_match_their_support(seed in any::<u64>()) {
        let d = wfbdd_from_seed(seed);
        let n = d.var_count();
        let mut norm = 0.0;
        for k in 0..1u64 << n {
            let z = bits_of(k, n);
            let amp = d.amplitude(&z).unwrap();
            norm += amp.norm_sqr();
            prop_assert_eq!(amp.norm() > 0.0, d.evaluate(&z));
        }
        prop_assert!((norm - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn serialization_round_trips_bit_exactly(seed in any::<u64>()) {
        let weighted = wfbdd_from_seed(seed);
        prop_assert_eq!(&Diagram::parse(&weighted.serialize()).unwrap(), &weighted);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let plain = random_fbdd(&mut rng, GenConfig { n, max_internals: 10 });
        prop_assert_eq!(&Diagram::parse(&plain.serialize()).unwrap(), &plain);
    }

    #[test]
    fn reduction_preserves_the_function_and_reaches_a_fixpoint(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=10);
        let internals = rng.gen_range(1..=12);
        let d = random_unreduced_bdd(&mut rng, n, internals);
        let reduced = d.reduce().unwrap();
        prop_assert!(reduced.internal_count() <= d.internal_count());
        prop_assert_eq!(truth_table(&d), truth_table(&reduced));
        let report = reduced.validate();
        let contraction_free = !report.violations.iter().any(|v| matches!(
            v,
            Violation::RedundantNode { .. } | Violation::EquivalentNodes { .. }
        ));
        prop_assert!(contraction_free);
        prop_assert_eq!(&reduced.reduce().unwrap(), &reduced);
    }

    #[test]
    fn layers_partition_nodes_with_the_child_predicate(seed in any::<u64>()) {
        let d = wfbdd_from_seed(seed);
        let layers = d.layers().unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for layer in &layers.layers {
            for id in layer {
                prop_assert!(seen.insert(*id), "node in exactly one layer");
            }
        }
        let all: std::collections::BTreeSet<_> = d
            .internal_ids()
            .chain(d.terminal0())
            .chain(d.terminal1())
            .collect();
        prop_assert_eq!(&seen, &all, "layers cover every node");
        // Layer 1 holds exactly the terminals; deeper layers satisfy the
        // child-membership predicate.
        let of = |id| layers.layer_of(id).unwrap();
        for id in layers.layers[0].iter() {
            prop_assert!(d.is_terminal(*id));
        }
        for (id, _, e0, e1) in d.internals() {
            let layer = of(id);
            let c0 = of(e0.head);
            let c1 = of(e1.head);
            prop_assert!(c0 < layer && c1 < layer);
            prop_assert_eq!(c0.max(c1), layer - 1, "one child in the layer below");
        }
    }

    #[test]
    fn traces_count_free_variables_and_topological_order_respects_edges(seed in any::<u64>()) {
        let d = wfbdd_from_seed(seed);
        let n = d.var_count();
        for k in 0..1u64 << n {
            let trace = d.trace(&bits_of(k, n));
            prop_assert_eq!(trace.free_vars, n + 1 - trace.nodes.len());
            prop_assert_eq!(trace.nodes[0], d.root());
            prop_assert!(d.is_terminal(*trace.nodes.last().unwrap()));
        }
        let order = d.topological_order().unwrap();
        prop_assert_eq!(order[0], d.root());
        let pos: std::collections::HashMap<_, _> =
            order.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        for (id, _, e0, e1) in d.internals() {
            for e in [e0, e1] {
                if !d.is_terminal(e.head) {
                    prop_assert!(pos[&id] < pos[&e.head]);
                }
            }
        }
    }

    #[test]
    fn uniform_weighting_is_uniform_within_its_query_budget(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=12);
        let d = random_fbdd(&mut rng, GenConfig { n, max_internals: 12 });
        let result = uniform_weights(&d).unwrap();
        prop_assert!(result.query_count <= 6 * d.node_count() - 2);
        prop_assert_eq!(result.model_count, satisfying_count(&d));
        let expect = 1.0 / (result.model_count as f64).sqrt();
        for k in 0..1u64 << n {
            let z = bits_of(k, n);
            let amp = result.diagram.amplitude(&z).unwrap();
            if d.evaluate(&z) {
                prop_assert!((amp.re - expect).abs() <= 1e-12 && amp.im == 0.0);
            }
        }
    }

    #[test]
    fn bitset_freeness_agrees_with_the_exhaustive_path_walk(seed in any::<u64>()) {
        // The unreduced generator picks variables freely, so repeats happen.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=6);
        let internals = rng.gen_range(2..=8);
        let d = random_unreduced_bdd(&mut rng, n, internals);

        let walk_found_repeat = (0..1u64 << n).any(|k| {
            let trace = d.trace(&bits_of(k, n));
            let mut seen = std::collections::BTreeSet::new();
            trace.edges.iter().any(|(id, _)| !seen.insert(d.var_of(*id).unwrap()))
        });

        let reachable: std::collections::BTreeSet<_> = {
            let mut stack = vec![d.root()];
            let mut seen = std::collections::BTreeSet::new();
            while let Some(id) = stack.pop() {
                if d.is_terminal(id) || !seen.insert(id) {
                    continue;
                }
                stack.push(d.edge(id, false).unwrap().head);
                stack.push(d.edge(id, true).unwrap().head);
            }
            seen
        };
        let bitset_found_repeat = d.validate().violations.iter().any(|v| {
            matches!(v, Violation::FreenessViolation { node, .. } if reachable.contains(node))
        });
        prop_assert_eq!(walk_found_repeat, bitset_found_repeat);
    }

    #[test]
    fn skipped_variables_charged_to_edges_account_for_every_free_variable(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8);
        let d = random_fbdd(&mut rng, GenConfig { n, max_internals: 10 });
        let result = uniform_weights(&d).unwrap();
        let full: std::collections::BTreeSet<usize> = (1..=n).collect();
        let set_of = |id| -> std::collections::BTreeSet<usize> {
            if d.is_terminal(id) {
                full.clone()
            } else {
                result.unassigned[&id].iter().copied().collect()
            }
        };
        // Variables the diagram never reads anywhere sit in the root set.
        let root_set_len = result.unassigned[&d.root()].len();
        for k in 0..1u64 << n {
            let trace = d.trace(&bits_of(k, n));
            let mut charged = 0usize;
            for &(u, b) in &trace.edges {
                let h0 = d.edge(u, false).unwrap().head;
                let h1 = d.edge(u, true).unwrap().head;
                let taken = d.edge(u, b).unwrap().head;
                let common: std::collections::BTreeSet<usize> =
                    set_of(h0).intersection(&set_of(h1)).copied().collect();
                charged += set_of(taken).difference(&common).count();
            }
            prop_assert_eq!(charged + root_set_len, trace.free_vars);
        }
    }

    #[test]
    fn live_support_stays_within_twice_the_labeled_path_count(seed in any::<u64>()) {
        let d = wfbdd_from_seed(seed);
        let circuit = synth_state(&d).unwrap();
        let (_, stats) = simulate_with_stats(&circuit, None).unwrap();
        // Every input labels exactly one root-to-terminal path, so the
        // labeled path count is 2^n.
        let labeled_paths = 1usize << d.var_count();
        prop_assert!(stats.high_water_mark <= 2 * labeled_paths);
    }
}
