//! Structural validation: reducedness, freeness, and the weighted-edge
//! rules, each reported with the offending node or edge.

use super::{Diagram, DiagramError, NodeId, WEIGHT_ZERO_TOL};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// A single violated invariant, with its locus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// An edge references an id that names no node.
    DanglingNode {
        node: NodeId,
        branch: bool,
        head: NodeId,
    },
    /// The root id names no node.
    RootMissing { root: NodeId },
    /// A directed cycle passes through this node.
    Cycle { node: NodeId },
    /// Some edge points back at the root, which must have indegree zero.
    RootHasIncomingEdge { tail: NodeId },
    /// Node not reachable from the root.
    Unreachable { node: NodeId },
    /// Variable index outside `1..=n`.
    BadVarIndex { node: NodeId, var: usize },
    /// Both outgoing edges share a head, so redundant node deletion applies.
    RedundantNode { node: NodeId },
    /// Two internals share variable and both heads, so node sharing applies.
    EquivalentNodes { first: NodeId, second: NodeId },
    /// The node's variable occurs again below it on some path.
    FreenessViolation { node: NodeId, var: usize },
    /// Weighted diagram with a nonzero weight on an edge into the 0-terminal.
    NonzeroWeightIntoTerminal0 { node: NodeId, branch: bool },
    /// Weight is NaN or infinite.
    NonFiniteWeight { node: NodeId, branch: bool },
    /// Weighted diagram node with zero weight on both edges.
    DegenerateNode { node: NodeId },
    /// Weighted diagram whose 1-terminal is absent or unreachable: it would
    /// describe the zero vector, which is not a quantum state.
    ZeroFunction,
}

impl Violation {
    /// Reducedness findings do not change the represented function or state,
    /// so downstream passes (amplitudes, synthesis) tolerate them; everything
    /// else breaks the semantics.
    pub fn blocks_semantics(&self) -> bool {
        !matches!(
            self,
            Violation::RedundantNode { .. } | Violation::EquivalentNodes { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingNode { node, branch, head } => write!(
                f,
                "dangling edge: node {node} {}-edge references missing node {head}",
                *branch as u8
            ),
            Violation::RootMissing { root } => write!(f, "root id {root} names no node"),
            Violation::Cycle { node } => write!(f, "cycle through node {node}"),
            Violation::RootHasIncomingEdge { tail } => {
                write!(f, "root has incoming edge from node {tail}")
            }
            Violation::Unreachable { node } => write!(f, "node {node} unreachable from root"),
            Violation::BadVarIndex { node, var } => {
                write!(f, "node {node} has variable index {var} out of range")
            }
            Violation::RedundantNode { node } => {
                write!(f, "redundant node: both edges of node {node} share a head")
            }
            Violation::EquivalentNodes { first, second } => {
                write!(f, "equivalent nodes: {second} duplicates {first}")
            }
            Violation::FreenessViolation { node, var } => write!(
                f,
                "freeness: variable x{var} of node {node} occurs again below it"
            ),
            Violation::NonzeroWeightIntoTerminal0 { node, branch } => write!(
                f,
                "nonzero weight on {}-edge of node {node} into the 0-terminal",
                *branch as u8
            ),
            Violation::NonFiniteWeight { node, branch } => write!(
                f,
                "non-finite weight on {}-edge of node {node}",
                *branch as u8
            ),
            Violation::DegenerateNode { node } => {
                write!(f, "degenerate node: both weights of node {node} are zero")
            }
            Violation::ZeroFunction => {
                write!(f, "weighted diagram has no reachable 1-terminal")
            }
        }
    }
}

/// Outcome of [`Diagram::validate`]: the list of violated invariants, empty
/// when the diagram is valid.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when the only findings are reducedness ones, which leave the
    /// represented function and amplitudes intact.
    pub fn is_semantically_sound(&self) -> bool {
        self.violations.iter().all(|v| !v.blocks_semantics())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Diagram {
    /// Check every structural invariant and report all violations. Never
    /// panics: dangling references and cycles become report entries, and
    /// checks that need an intact graph are skipped once it is broken.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        if self.kind(self.root()).is_none() {
            violations.push(Violation::RootMissing { root: self.root() });
        }

        let mut structurally_broken = false;
        for (id, var, e0, e1) in self.internals() {
            if var > self.var_count() {
                violations.push(Violation::BadVarIndex { node: id, var });
            }
            for (b, edge) in [(false, e0), (true, e1)] {
                if self.kind(edge.head).is_none() {
                    violations.push(Violation::DanglingNode {
                        node: id,
                        branch: b,
                        head: edge.head,
                    });
                    structurally_broken = true;
                }
                if edge.head == self.root() {
                    violations.push(Violation::RootHasIncomingEdge { tail: id });
                }
            }
        }

        if !structurally_broken {
            match self.reverse_topological_all() {
                Ok(_) => {}
                Err(DiagramError::CycleDetected(node)) => {
                    violations.push(Violation::Cycle { node });
                    structurally_broken = true;
                }
                Err(_) => structurally_broken = true,
            }
        }

        let reachable: BTreeSet<NodeId> = self.reachable();
        let mut all_ids: Vec<NodeId> = self.internal_ids().collect();
        all_ids.extend(self.terminal0());
        all_ids.extend(self.terminal1());
        all_ids.sort();
        for id in all_ids {
            if !reachable.contains(&id) {
                violations.push(Violation::Unreachable { node: id });
            }
        }

        // Contraction rules.
        let mut keys: HashMap<(usize, NodeId, NodeId), NodeId> = HashMap::new();
        for (id, var, e0, e1) in self.internals() {
            if e0.head == e1.head {
                violations.push(Violation::RedundantNode { node: id });
            }
            match keys.entry((var, e0.head, e1.head)) {
                std::collections::hash_map::Entry::Occupied(first) => {
                    violations.push(Violation::EquivalentNodes {
                        first: *first.get(),
                        second: id,
                    });
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(id);
                }
            }
        }

        // Freeness via per-node descendant variable sets (polynomial; the
        // exhaustive path walk only survives as a test oracle).
        if !structurally_broken {
            if let Ok(desc) = self.descendant_vars() {
                for (id, var, e0, e1) in self.internals() {
                    let below = desc[&e0.head].union(desc[&e1.head]);
                    if below.contains(var) {
                        violations.push(Violation::FreenessViolation { node: id, var });
                    }
                }
            }
        }

        if self.is_weighted() {
            for (id, _, e0, e1) in self.internals() {
                let mut max_norm = 0.0f64;
                for (b, edge) in [(false, e0), (true, e1)] {
                    if !edge.weight.re.is_finite() || !edge.weight.im.is_finite() {
                        violations.push(Violation::NonFiniteWeight { node: id, branch: b });
                        continue;
                    }
                    if Some(edge.head) == self.terminal0() && edge.weight.norm() > WEIGHT_ZERO_TOL
                    {
                        violations.push(Violation::NonzeroWeightIntoTerminal0 {
                            node: id,
                            branch: b,
                        });
                    }
                    max_norm = max_norm.max(edge.weight.norm());
                }
                if max_norm <= WEIGHT_ZERO_TOL {
                    violations.push(Violation::DegenerateNode { node: id });
                }
            }
            let t1_reachable = self
                .terminal1()
                .map(|t| reachable.contains(&t))
                .unwrap_or(false);
            if !t1_reachable {
                violations.push(Violation::ZeroFunction);
            }
        }

        ValidationReport { violations }
    }

    /// Validation gate used by amplitude-level consumers: rejects anything
    /// that breaks the semantics but tolerates reducedness findings (some
    /// weighted constructions keep parallel edges into the 1-terminal with
    /// distinct weights, which deletion would not preserve).
    pub(crate) fn require_semantics(&self) -> Result<(), DiagramError> {
        let report = self.validate();
        if report.is_semantically_sound() {
            Ok(())
        } else {
            Err(DiagramError::Invalid(ValidationReport {
                violations: report
                    .violations
                    .into_iter()
                    .filter(|v| v.blocks_semantics())
                    .collect(),
            }))
        }
    }
}
