//! The two contraction rules, applied to a fixpoint: redundant node
//! deletion (both edges share a head) and equivalent node sharing (two
//! internals agree on variable and both heads).

use super::{Diagram, DiagramError, NodeId};
use num_complex::Complex64;
use std::collections::HashMap;

impl Diagram {
    /// Contract to the reduced form. One bottom-up pass over the reachable
    /// subgraph reaches the fixpoint: with children already canonical, a node
    /// whose edges collapse onto one head is deleted, and hash-consing on
    /// `(variable, head0, head1)` merges equivalent nodes into the first one
    /// seen (ascending id among candidates). Unreachable nodes are dropped.
    ///
    /// The represented function is unchanged and the node count never grows.
    /// Weighted diagrams are rejected: weights are assigned only after
    /// contraction, and merging weighted nodes would silently alter the
    /// state.
    pub fn reduce(&self) -> Result<Diagram, DiagramError> {
        if self.is_weighted() {
            return Err(DiagramError::WeightedInput);
        }
        // Children-first over every internal; errors on cycles or dangling
        // edges. Restricting to the reachable part happens via `canon` below.
        let order = self.reverse_topological_all()?;

        let mut canon: HashMap<NodeId, NodeId> = HashMap::new();
        for t in [self.terminal0(), self.terminal1()].into_iter().flatten() {
            canon.insert(t, t);
        }
        let mut keys: HashMap<(usize, NodeId, NodeId), NodeId> = HashMap::new();
        for id in order {
            let node = self.internal(id).expect("order yields internal nodes");
            let h0 = canon[&node.edges[0].head];
            let h1 = canon[&node.edges[1].head];
            let target = if h0 == h1 {
                h0
            } else {
                *keys.entry((node.var, h0, h1)).or_insert(id)
            };
            canon.insert(id, target);
        }

        let root = canon[&self.root()];
        let one = Complex64::new(1.0, 0.0);
        let mut b = Diagram::builder(self.var_count(), false);
        b.root(root.0);

        // Keep survivors reachable from the new root, with canonical heads.
        let mut stack = vec![root];
        let mut seen = std::collections::BTreeSet::new();
        let mut used_terminal = [false, false];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if Some(id) == self.terminal0() {
                used_terminal[0] = true;
                continue;
            }
            if Some(id) == self.terminal1() {
                used_terminal[1] = true;
                continue;
            }
            let node = self.internal(id).expect("survivor is internal");
            let h0 = canon[&node.edges[0].head];
            let h1 = canon[&node.edges[1].head];
            b.node(id.0, node.var, (h0.0, one), (h1.0, one));
            stack.push(h0);
            stack.push(h1);
        }
        if used_terminal[0] {
            b.terminal0(self.terminal0().expect("t0 was referenced").0);
        }
        if used_terminal[1] {
            b.terminal1(self.terminal1().expect("t1 was referenced").0);
        }
        b.build().map_err(|_| {
            // Only reachable ids were re-inserted, so assembly cannot fail.
            unreachable!("reduced diagram assembly")
        })
    }
}
