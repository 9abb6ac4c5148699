//! Seeded random diagram generators for tests and benches.
//!
//! Diagrams are grown bottom-up from the terminals: each new node picks two
//! distinct existing nodes as heads and a variable absent from both
//! subgraphs, which keeps the result reduced and free by construction. The
//! last node becomes the root and anything it cannot reach is dropped.

use crate::diagram::{Diagram, NodeId};
use crate::varset::VarSet;
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub n: usize,
    pub max_internals: usize,
}

struct ProtoNode {
    var: usize,
    heads: [u32; 2],
}

/// Random valid unweighted free diagram with both terminals reachable from
/// the root (so the function is neither constant nor trivially one-sided).
pub fn random_fbdd(rng: &mut impl Rng, cfg: GenConfig) -> Diagram {
    loop {
        if let Some(d) = try_build(rng, cfg) {
            return d;
        }
    }
}

/// Random valid weighted diagram: [`random_fbdd`] structure with random
/// complex weights on every edge not entering the 0-terminal.
pub fn random_wfbdd(rng: &mut impl Rng, cfg: GenConfig) -> Diagram {
    let plain = random_fbdd(rng, cfg);
    let mut b = Diagram::builder(plain.var_count(), true);
    if let Some(t) = plain.terminal0() {
        b.terminal0(t.0);
    }
    if let Some(t) = plain.terminal1() {
        b.terminal1(t.0);
    }
    for (id, var, e0, e1) in plain.internals() {
        let mut weight = |head: NodeId| -> Complex64 {
            if Some(head) == plain.terminal0() {
                Complex64::new(0.0, 0.0)
            } else {
                loop {
                    let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    if w.norm() >= 0.25 {
                        break w;
                    }
                }
            }
        };
        let w0 = weight(e0.head);
        let w1 = weight(e1.head);
        b.node(id.0, var, (e0.head.0, w0), (e1.head.0, w1));
    }
    b.root(plain.root().0);
    b.build().expect("reweighting preserves structure")
}

fn try_build(rng: &mut impl Rng, cfg: GenConfig) -> Option<Diagram> {
    assert!(cfg.n >= 2, "need at least two variables");
    let internals = rng.gen_range(2..=cfg.max_internals.max(2));
    // Pool starts with the terminals; descendant variable sets keep freeness
    // and a key set keeps reducedness.
    let mut desc: BTreeMap<u32, VarSet> = BTreeMap::new();
    desc.insert(0, VarSet::empty());
    desc.insert(1, VarSet::empty());
    let mut keys = std::collections::HashSet::new();
    let mut nodes: BTreeMap<u32, ProtoNode> = BTreeMap::new();

    for id in 2..2 + internals as u32 {
        let mut placed = false;
        for _ in 0..32 {
            let pool: Vec<u32> = desc.keys().copied().collect();
            let h0 = pool[rng.gen_range(0..pool.len())];
            let h1 = pool[rng.gen_range(0..pool.len())];
            if h0 == h1 {
                continue;
            }
            let below = desc[&h0].union(desc[&h1]);
            let candidates: Vec<usize> =
                (1..=cfg.n).filter(|&v| !below.contains(v)).collect();
            if candidates.is_empty() {
                continue;
            }
            let var = candidates[rng.gen_range(0..candidates.len())];
            if !keys.insert((var, h0, h1)) {
                continue;
            }
            desc.insert(id, below.union(VarSet::singleton(var)));
            nodes.insert(id, ProtoNode { var, heads: [h0, h1] });
            placed = true;
            break;
        }
        if !placed {
            return None;
        }
    }

    let root = 1 + internals as u32;
    let mut b = Diagram::builder(cfg.n, false);
    b.terminal0(0).terminal1(1);
    // Keep only what the root reaches.
    let mut stack = vec![root];
    let mut reached = std::collections::BTreeSet::new();
    while let Some(id) = stack.pop() {
        if !reached.insert(id) {
            continue;
        }
        if let Some(node) = nodes.get(&id) {
            stack.push(node.heads[0]);
            stack.push(node.heads[1]);
        }
    }
    if !reached.contains(&0) || !reached.contains(&1) {
        return None;
    }
    for (&id, node) in &nodes {
        if reached.contains(&id) {
            b.node_unweighted(id, node.var, node.heads[0], node.heads[1]);
        }
    }
    b.root(root);
    let d = b.build().ok()?;
    debug_assert!(d.validate().is_valid(), "{}", d.validate());
    Some(d)
}

/// Random diagram that may violate the contraction rules (and freeness):
/// exercise material for the reducer.
pub fn random_unreduced_bdd(rng: &mut impl Rng, n: usize, internals: usize) -> Diagram {
    let mut b = Diagram::builder(n, false);
    b.terminal0(0).terminal1(1);
    for id in 2..2 + internals as u32 {
        let h0 = rng.gen_range(0..id);
        let h1 = rng.gen_range(0..id);
        let var = rng.gen_range(1..=n);
        b.node_unweighted(id, var, h0, h1);
    }
    b.root(1 + internals as u32);
    b.build().expect("construction referenced only earlier ids")
}
