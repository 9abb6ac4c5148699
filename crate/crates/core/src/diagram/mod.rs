//! Diagram data model: rooted DAGs of variable-labeled nodes with two
//! outgoing edges per internal node, optionally carrying complex weights.
//!
//! A diagram represents a Boolean function `f(x_1, ..., x_n)`: evaluation
//! walks from the root selecting the `x_i`-edge at every internal node until
//! a terminal is reached. A weighted diagram additionally describes an
//! `n`-qubit quantum state whose amplitude for input `z` is the product of
//! normalized edge weights along the path of `z`, scaled by `2^{-k/2}` for
//! the `k` variables the path never reads. Edges into the 0-terminal carry
//! weight zero, so exactly the satisfying inputs get nonzero amplitude.

mod format;
mod ops;
mod reduce;
mod validate;

pub use format::ParseError;
pub use ops::{LayerDecomposition, PathTrace};
pub use validate::{ValidationReport, Violation};

use crate::varset::{VarSet, MAX_VARS};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Identifier of a node within one diagram. Dense nonnegative integers;
/// stable across serialization round-trips.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Tolerance for the "edges into the 0-terminal have weight zero" rule and
/// for the degenerate-node check. Uniform weighting produces irrational
/// weights, so weights are doubles and zero tests are toleranced.
pub const WEIGHT_ZERO_TOL: f64 = 1e-12;

/// One outgoing edge: head node plus a complex weight. Unweighted diagrams
/// keep the canonical weight `1 + 0i` on every edge.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Edge {
    pub head: NodeId,
    pub weight: Complex64,
}

/// Node classification as exposed by [`Diagram::kind`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    Terminal0,
    Terminal1,
    Internal,
}

#[derive(Clone, PartialEq, Debug)]
pub(crate) struct Internal {
    pub var: usize,
    pub edges: [Edge; 2],
}

/// Errors raised by diagram operations.
#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("operation requires an unweighted diagram")]
    WeightedInput,
    #[error("operation requires a weighted diagram")]
    UnweightedInput,
    #[error("node {0} has zero weight on both outgoing edges")]
    DegenerateNode(NodeId),
    #[error("cycle detected through node {0}")]
    CycleDetected(NodeId),
    #[error("edge references missing node {0}")]
    DanglingNode(NodeId),
    #[error("function is unsatisfiable (1-terminal absent or unreachable)")]
    Unsatisfiable,
    #[error("invalid diagram:\n{0}")]
    Invalid(ValidationReport),
}

/// Errors raised while assembling a diagram.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("variable count {0} out of range 1..={MAX_VARS}")]
    BadVarCount(usize),
    #[error("variable index {var} on node {node} out of representable range 1..={MAX_VARS}")]
    BadVarIndex { node: NodeId, var: usize },
    #[error("duplicate node id {0}")]
    DuplicateId(NodeId),
    #[error("root node not set")]
    MissingRoot,
    #[error("root id {0} does not name a node")]
    UnknownRoot(NodeId),
    #[error("diagram has no terminal node")]
    NoTerminal,
}

/// An immutable decision diagram. Construct through [`DiagramBuilder`] or by
/// parsing the text format; all operations are pure functions of the value,
/// so diagrams are safe to share across threads.
#[derive(Clone, PartialEq, Debug)]
pub struct Diagram {
    n: usize,
    terminal0: Option<NodeId>,
    terminal1: Option<NodeId>,
    internals: BTreeMap<NodeId, Internal>,
    root: NodeId,
    weighted: bool,
}

impl Diagram {
    pub fn builder(n: usize, weighted: bool) -> DiagramBuilder {
        DiagramBuilder::new(n, weighted)
    }

    /// Number of Boolean variables `x_1..x_n`.
    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn terminal0(&self) -> Option<NodeId> {
        self.terminal0
    }

    pub fn terminal1(&self) -> Option<NodeId> {
        self.terminal1
    }

    pub fn kind(&self, id: NodeId) -> Option<NodeKind> {
        if Some(id) == self.terminal0 {
            Some(NodeKind::Terminal0)
        } else if Some(id) == self.terminal1 {
            Some(NodeKind::Terminal1)
        } else if self.internals.contains_key(&id) {
            Some(NodeKind::Internal)
        } else {
            None
        }
    }

    pub fn is_terminal(&self, id: NodeId) -> bool {
        Some(id) == self.terminal0 || Some(id) == self.terminal1
    }

    /// Variable index `i(u)` of an internal node.
    pub fn var_of(&self, id: NodeId) -> Option<usize> {
        self.internals.get(&id).map(|node| node.var)
    }

    /// The `b`-edge of an internal node (`false` selects the 0-edge).
    pub fn edge(&self, id: NodeId, b: bool) -> Option<&Edge> {
        self.internals.get(&id).map(|node| &node.edges[b as usize])
    }

    /// Internal nodes in ascending id order.
    pub fn internals(&self) -> impl Iterator<Item = (NodeId, usize, &Edge, &Edge)> {
        self.internals
            .iter()
            .map(|(&id, node)| (id, node.var, &node.edges[0], &node.edges[1]))
    }

    pub fn internal_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.internals.keys().copied()
    }

    pub fn internal_count(&self) -> usize {
        self.internals.len()
    }

    /// Total node count `|V|`: internals plus the terminals present.
    pub fn node_count(&self) -> usize {
        self.internals.len()
            + self.terminal0.is_some() as usize
            + self.terminal1.is_some() as usize
    }

    /// Edge count `|E|` (two per internal node).
    pub fn edge_count(&self) -> usize {
        2 * self.internals.len()
    }

    pub(crate) fn internal(&self, id: NodeId) -> Option<&Internal> {
        self.internals.get(&id)
    }

    /// In-edges `(tail, branch)` per head node, each list sorted by
    /// `(tail, branch)`.
    pub(crate) fn in_edges(&self) -> BTreeMap<NodeId, Vec<(NodeId, bool)>> {
        let mut map: BTreeMap<NodeId, Vec<(NodeId, bool)>> = BTreeMap::new();
        for (&id, node) in &self.internals {
            for b in [false, true] {
                map.entry(node.edges[b as usize].head).or_default().push((id, b));
            }
        }
        map
    }

    /// Nodes reachable from the root, skipping edges into missing ids.
    pub(crate) fn reachable(&self) -> std::collections::BTreeSet<NodeId> {
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if self.kind(id).is_none() || !seen.insert(id) {
                continue;
            }
            if let Some(node) = self.internals.get(&id) {
                stack.push(node.edges[0].head);
                stack.push(node.edges[1].head);
            }
        }
        seen
    }

    /// Per-node sets of variable indices occurring in the subgraph rooted at
    /// the node (own variable included). Requires an acyclic diagram with no
    /// dangling edges; computed bottom-up in one pass.
    pub(crate) fn descendant_vars(&self) -> Result<BTreeMap<NodeId, VarSet>, DiagramError> {
        let order = self.reverse_topological_all()?;
        let mut sets: BTreeMap<NodeId, VarSet> = BTreeMap::new();
        if let Some(t) = self.terminal0 {
            sets.insert(t, VarSet::empty());
        }
        if let Some(t) = self.terminal1 {
            sets.insert(t, VarSet::empty());
        }
        for id in order {
            let node = &self.internals[&id];
            let mut set = VarSet::singleton(node.var);
            for edge in &node.edges {
                let child = sets
                    .get(&edge.head)
                    .ok_or(DiagramError::DanglingNode(edge.head))?;
                set = set.union(*child);
            }
            sets.insert(id, set);
        }
        Ok(sets)
    }

    /// All internal nodes, children before parents; among simultaneously
    /// ready nodes the smallest id comes first, so bottom-up passes (and the
    /// reducer's choice of merge representative) are deterministic. Errors
    /// on cycles or dangling edges. Not the public topological order, which
    /// is root-first and covers reachable nodes only.
    pub(crate) fn reverse_topological_all(&self) -> Result<Vec<NodeId>, DiagramError> {
        let mut pending: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut parents: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for (&id, node) in &self.internals {
            let mut internal_children = 0;
            for edge in &node.edges {
                if self.is_terminal(edge.head) {
                    continue;
                }
                if !self.internals.contains_key(&edge.head) {
                    return Err(DiagramError::DanglingNode(edge.head));
                }
                internal_children += 1;
                parents.entry(edge.head).or_default().push(id);
            }
            pending.insert(id, internal_children);
        }
        let mut ready: std::collections::BTreeSet<NodeId> = pending
            .iter()
            .filter(|(_, &count)| count == 0)
            .map(|(&id, _)| id)
            .collect();
        let mut order = Vec::with_capacity(self.internals.len());
        while let Some(&id) = ready.iter().next() {
            ready.remove(&id);
            order.push(id);
            if let Some(ps) = parents.get(&id) {
                for &p in ps {
                    let slot = pending.get_mut(&p).expect("parent is internal");
                    *slot -= 1;
                    if *slot == 0 {
                        ready.insert(p);
                    }
                }
            }
        }
        if order.len() != self.internals.len() {
            let stuck = pending
                .iter()
                .find(|(_, &count)| count > 0)
                .map(|(&id, _)| id)
                .expect("leftover node has pending children");
            return Err(DiagramError::CycleDetected(stuck));
        }
        Ok(order)
    }
}

/// Incremental diagram assembly. Ids are plain integers here to keep fixture
/// code readable; heads may reference ids that are never defined — such
/// dangling edges are reported by validation rather than rejected, so that
/// files parsed from disk can always be loaded and diagnosed.
pub struct DiagramBuilder {
    n: usize,
    weighted: bool,
    terminal0: Option<NodeId>,
    terminal1: Option<NodeId>,
    internals: BTreeMap<NodeId, Internal>,
    root: Option<NodeId>,
    error: Option<BuildError>,
}

impl DiagramBuilder {
    pub fn new(n: usize, weighted: bool) -> Self {
        let error = if (1..=MAX_VARS).contains(&n) {
            None
        } else {
            Some(BuildError::BadVarCount(n))
        };
        DiagramBuilder {
            n,
            weighted,
            terminal0: None,
            terminal1: None,
            internals: BTreeMap::new(),
            root: None,
            error,
        }
    }

    fn claim(&mut self, id: NodeId) {
        if self.error.is_some() {
            return;
        }
        let taken = self.internals.contains_key(&id)
            || self.terminal0 == Some(id)
            || self.terminal1 == Some(id);
        if taken {
            self.error = Some(BuildError::DuplicateId(id));
        }
    }

    pub fn terminal0(&mut self, id: u32) -> &mut Self {
        self.claim(NodeId(id));
        self.terminal0 = Some(NodeId(id));
        self
    }

    pub fn terminal1(&mut self, id: u32) -> &mut Self {
        self.claim(NodeId(id));
        self.terminal1 = Some(NodeId(id));
        self
    }

    /// Add an internal node with explicit edge weights.
    pub fn node(
        &mut self,
        id: u32,
        var: usize,
        e0: (u32, Complex64),
        e1: (u32, Complex64),
    ) -> &mut Self {
        self.claim(NodeId(id));
        if self.error.is_none() && !(1..=MAX_VARS).contains(&var) {
            self.error = Some(BuildError::BadVarIndex {
                node: NodeId(id),
                var,
            });
        }
        if self.error.is_none() {
            self.internals.insert(
                NodeId(id),
                Internal {
                    var,
                    edges: [
                        Edge {
                            head: NodeId(e0.0),
                            weight: e0.1,
                        },
                        Edge {
                            head: NodeId(e1.0),
                            weight: e1.1,
                        },
                    ],
                },
            );
        }
        self
    }

    /// Add an internal node with canonical unit weights.
    pub fn node_unweighted(&mut self, id: u32, var: usize, h0: u32, h1: u32) -> &mut Self {
        let one = Complex64::new(1.0, 0.0);
        self.node(id, var, (h0, one), (h1, one))
    }

    pub fn root(&mut self, id: u32) -> &mut Self {
        self.root = Some(NodeId(id));
        self
    }

    pub fn build(&mut self) -> Result<Diagram, BuildError> {
        if let Some(err) = self.error.take() {
            return Err(err);
        }
        let root = self.root.ok_or(BuildError::MissingRoot)?;
        if self.terminal0.is_none() && self.terminal1.is_none() {
            return Err(BuildError::NoTerminal);
        }
        let d = Diagram {
            n: self.n,
            terminal0: self.terminal0,
            terminal1: self.terminal1,
            internals: std::mem::take(&mut self.internals),
            root,
            weighted: self.weighted,
        };
        if d.kind(root).is_none() {
            return Err(BuildError::UnknownRoot(root));
        }
        Ok(d)
    }
}
