//! Path evaluation, amplitude semantics, layer decomposition, topological
//! order, and the ordered-diagram check.

use super::{Diagram, DiagramError, NodeId};
use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet};

/// The node/edge sequence selected by one input bitstring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathTrace {
    /// Root-to-terminal node sequence (terminal included).
    pub nodes: Vec<NodeId>,
    /// `(internal node, selected branch)` for each step.
    pub edges: Vec<(NodeId, bool)>,
    /// Variables the path never reads: `n - |nodes| + 1`.
    pub free_vars: usize,
}

/// Bottom-up layer partition: the first layer holds the terminals, and every
/// node in layer `i` has all children below layer `i` with at least one child
/// in layer `i - 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<NodeId>>,
}

impl LayerDecomposition {
    /// Layer index (1-based) of a node, if assigned.
    pub fn layer_of(&self, id: NodeId) -> Option<usize> {
        self.layers
            .iter()
            .position(|layer| layer.contains(&id))
            .map(|i| i + 1)
    }
}

impl Diagram {
    /// Evaluate the Boolean function: walk from the root selecting the
    /// `x_i`-edge at each internal node; returns true iff the walk reaches
    /// the 1-terminal.
    ///
    /// Panics if `x.len() != n`, the walk hits a missing node, or a node
    /// reads a variable index beyond `n`; callers validate structurally
    /// suspect diagrams first.
    pub fn evaluate(&self, x: &[bool]) -> bool {
        assert_eq!(x.len(), self.n, "input length must equal variable count");
        let mut id = self.root();
        loop {
            if Some(id) == self.terminal1() {
                return true;
            }
            if Some(id) == self.terminal0() {
                return false;
            }
            let node = self.internal(id).expect("evaluate: dangling node id");
            let bit = x[node.var - 1];
            id = node.edges[bit as usize].head;
        }
    }

    /// Record the path selected by `z`, with its free-variable count.
    pub fn trace(&self, z: &[bool]) -> PathTrace {
        assert_eq!(z.len(), self.n, "input length must equal variable count");
        let mut nodes = vec![self.root()];
        let mut edges = Vec::new();
        let mut id = self.root();
        while !self.is_terminal(id) {
            let node = self.internal(id).expect("trace: dangling node id");
            let bit = z[node.var - 1];
            edges.push((id, bit));
            id = node.edges[bit as usize].head;
            nodes.push(id);
        }
        // Paths of free diagrams read at most n variables; on non-free
        // input (longer paths) the count saturates at zero.
        let free_vars = (self.n + 1).saturating_sub(nodes.len());
        PathTrace {
            nodes,
            edges,
            free_vars,
        }
    }

    /// Amplitude of basis state `z` under the weighted-diagram semantics:
    /// `2^{-(free vars)/2}` times the product over path-internal nodes of
    /// `w_{z_i(u)}(u) / sqrt(|w_0(u)|^2 + |w_1(u)|^2)`. Zero when the path
    /// reaches the 0-terminal.
    pub fn amplitude(&self, z: &[bool]) -> Result<Complex64, DiagramError> {
        if !self.is_weighted() {
            return Err(DiagramError::UnweightedInput);
        }
        let trace = self.trace(z);
        let terminal = *trace.nodes.last().expect("trace is nonempty");
        if Some(terminal) == self.terminal0() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut amp = Complex64::new(
            0.5f64.powi(trace.free_vars as i32).sqrt(),
            0.0,
        );
        for &(id, bit) in &trace.edges {
            let node = self.internal(id).expect("trace yields internal nodes");
            let norm_sqr = node.edges[0].weight.norm_sqr() + node.edges[1].weight.norm_sqr();
            if norm_sqr.sqrt() <= super::WEIGHT_ZERO_TOL {
                return Err(DiagramError::DegenerateNode(id));
            }
            amp *= node.edges[bit as usize].weight / norm_sqr.sqrt();
        }
        Ok(amp)
    }

    /// Layer decomposition used by the normalization argument: terminals
    /// first, then each internal node one layer above its highest child.
    pub fn layers(&self) -> Result<LayerDecomposition, DiagramError> {
        let order = self.reverse_topological_all()?;
        let mut level: BTreeMap<NodeId, usize> = BTreeMap::new();
        for t in [self.terminal0(), self.terminal1()].into_iter().flatten() {
            level.insert(t, 1);
        }
        for id in order {
            let node = self.internal(id).expect("order yields internal nodes");
            let mut max_child = 0;
            for edge in &node.edges {
                let child = level
                    .get(&edge.head)
                    .ok_or(DiagramError::DanglingNode(edge.head))?;
                max_child = max_child.max(*child);
            }
            level.insert(id, max_child + 1);
        }
        let depth = level.values().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); depth];
        for (id, l) in level {
            layers[l - 1].push(id);
        }
        Ok(LayerDecomposition { layers })
    }

    /// Topological order over the internal nodes reachable from the root:
    /// root first, every internal edge tail before its head. When several
    /// nodes are ready the smallest id is emitted, so the order is
    /// deterministic.
    pub fn topological_order(&self) -> Result<Vec<NodeId>, DiagramError> {
        let reachable = self.reachable();
        if self.is_terminal(self.root()) {
            return Ok(Vec::new());
        }
        if self.kind(self.root()).is_none() {
            return Err(DiagramError::DanglingNode(self.root()));
        }
        let mut indegree: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &id in &reachable {
            if let Some(node) = self.internal(id) {
                for edge in &node.edges {
                    if !self.is_terminal(edge.head) {
                        if self.kind(edge.head).is_none() {
                            return Err(DiagramError::DanglingNode(edge.head));
                        }
                        *indegree.entry(edge.head).or_insert(0) += 1;
                    }
                }
            }
        }
        let mut ready: BTreeSet<NodeId> = BTreeSet::new();
        ready.insert(self.root());
        let mut order = Vec::new();
        while let Some(&id) = ready.iter().next() {
            ready.remove(&id);
            order.push(id);
            let node = self.internal(id).expect("ready nodes are internal");
            for edge in &node.edges {
                if !self.is_terminal(edge.head) {
                    let slot = indegree.get_mut(&edge.head).expect("counted above");
                    *slot -= 1;
                    if *slot == 0 {
                        ready.insert(edge.head);
                    }
                }
            }
        }
        let internal_reachable = reachable.iter().filter(|id| !self.is_terminal(**id)).count();
        if order.len() != internal_reachable {
            // Leftover indegree means a cycle among reachable internals.
            let stuck = indegree
                .iter()
                .find(|(_, &deg)| deg > 0)
                .map(|(&id, _)| id)
                .expect("some node kept nonzero indegree");
            return Err(DiagramError::CycleDetected(stuck));
        }
        Ok(order)
    }

    /// True iff every internal edge respects the given linear order on
    /// variables. `order[i - 1]` is the rank of variable `i`; must be a
    /// permutation of `0..n`.
    pub fn is_obdd_under(&self, order: &[usize]) -> bool {
        assert_eq!(order.len(), self.n, "order must rank every variable");
        {
            let mut seen = vec![false; self.n];
            for &rank in order {
                assert!(rank < self.n && !seen[rank], "order must be a permutation");
                seen[rank] = true;
            }
        }
        for (_, var, e0, e1) in self.internals() {
            for edge in [e0, e1] {
                if let Some(head_var) = self.var_of(edge.head) {
                    if order[var - 1] >= order[head_var - 1] {
                        return false;
                    }
                }
            }
        }
        true
    }
}
