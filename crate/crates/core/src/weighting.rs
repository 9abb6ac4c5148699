//! Uniform weight distribution: convert a free BDD into the weighted diagram
//! of the uniform superposition over its satisfying assignments, and derive
//! the model count from the root weights.
//!
//! The pass runs bottom-up from the 1-terminal. Each node `u` carries the set
//! `X_u` of variables that occur nowhere in its subgraph, seeded with the
//! full variable set at the terminals. An edge from `u` into head `h` skips
//! `|X_h \ (X_{h_0(u)} ∩ X_{h_1(u)})|` variables, and its weight is the
//! square root of the head's weight power times `2` per skipped variable, so
//! that every root-to-terminal path accumulates the same amplitude. The
//! model count is the summed squared root weights, doubled once more per
//! variable the diagram never reads on any path.

use crate::diagram::{Diagram, DiagramError, NodeId};
use crate::varset::VarSet;
use num_complex::Complex64;
use std::collections::{BTreeMap, VecDeque};

/// Number of satisfying assignments must sit this close to an integer;
/// larger residuals indicate a weight-propagation bug upstream.
pub const MODEL_COUNT_TOL: f64 = 1e-6;

/// Result of [`uniform_weights`].
#[derive(Clone, Debug)]
pub struct WeightingResult {
    /// The input diagram with weights assigned.
    pub diagram: Diagram,
    /// Instrumented node queries: one per enqueue, one per dequeue, one per
    /// in-edge or out-edge inspection. Bounded by `6|V| - 2`.
    pub query_count: usize,
    /// Number of satisfying assignments `|f|`.
    pub model_count: u64,
    /// Per-node unassigned-variable sets (variable indices absent from the
    /// node's subgraph), exposed for the self-consistency checks.
    pub unassigned: BTreeMap<NodeId, Vec<usize>>,
}

/// Assign weights so that every satisfying input has amplitude
/// `1 / sqrt(|f|)`. The input must be an unweighted free diagram with a
/// reachable 1-terminal.
pub fn uniform_weights(d: &Diagram) -> Result<WeightingResult, DiagramError> {
    if d.is_weighted() {
        return Err(DiagramError::WeightedInput);
    }
    d.require_semantics()?;

    let t1 = d.terminal1().ok_or(DiagramError::Unsatisfiable)?;
    if !d.reachable().contains(&t1) {
        return Err(DiagramError::Unsatisfiable);
    }

    let n = d.var_count();

    // Constant-true diagram: no internal nodes to weight; the uniform state
    // over all inputs has |f| = 2^n.
    if d.internal_count() == 0 {
        let mut b = Diagram::builder(n, true);
        b.terminal1(t1.0).root(d.root().0);
        return Ok(WeightingResult {
            diagram: b.build().expect("terminal-only diagram"),
            query_count: 2,
            model_count: 1u64
                .checked_shl(n as u32)
                .expect("variable count fits the model count"),
            unassigned: BTreeMap::new(),
        });
    }

    let in_edges = d.in_edges();
    let empty = Vec::new();

    // Terminal pseudo-weights: (0, 0) for t0 and (0, 1) for t1. They only
    // drive the propagation and are never emitted into the output diagram.
    let mut weight_power: BTreeMap<NodeId, f64> = BTreeMap::new();
    weight_power.insert(t1, 1.0);
    if let Some(t0) = d.terminal0() {
        weight_power.insert(t0, 0.0);
    }

    let mut unassigned: BTreeMap<NodeId, VarSet> = BTreeMap::new();
    unassigned.insert(t1, VarSet::full(n));
    if let Some(t0) = d.terminal0() {
        unassigned.insert(t0, VarSet::full(n));
    }

    let mut weights: BTreeMap<NodeId, [f64; 2]> = BTreeMap::new();
    let mut queue: VecDeque<NodeId> = VecDeque::new();
    let mut queries = 0usize;

    queue.push_back(t1);
    queries += 1;

    while let Some(v) = queue.pop_front() {
        queries += 1;
        for &(u, _) in in_edges.get(&v).unwrap_or(&empty) {
            queries += 1; // in-edge inspection
            if weights.contains_key(&u) {
                continue; // already processed via its other child
            }
            let heads = [d.edge(u, false).unwrap().head, d.edge(u, true).unwrap().head];
            let ready = heads
                .iter()
                .all(|h| unassigned.contains_key(h));
            if !ready {
                continue;
            }
            let common = unassigned[&heads[0]].intersect(unassigned[&heads[1]]);
            let mut w = [0.0f64; 2];
            for b in 0..2 {
                queries += 1; // out-edge inspection
                let skipped = unassigned[&heads[b]].minus(common).len();
                w[b] = (weight_power[&heads[b]] * 2f64.powi(skipped as i32)).sqrt();
            }
            weights.insert(u, w);
            weight_power.insert(u, w[0] * w[0] + w[1] * w[1]);
            unassigned.insert(u, common.remove(d.var_of(u).expect("u is internal")));
            queue.push_back(u);
            queries += 1;
        }
    }

    if weights.len() != d.internal_count() {
        // Unreached internal nodes imply a freeness defect the validation
        // gate should have caught.
        return Err(DiagramError::Invalid(d.validate()));
    }

    // Root weights count assignments of the variables the diagram reads;
    // every variable read on no path at all doubles the count, just like a
    // hidden variable skipped on an edge.
    let unread = unassigned[&d.root()].len();
    let total = weight_power[&d.root()] * 2f64.powi(unread as i32);
    let count = total.round();
    if (total - count).abs() > MODEL_COUNT_TOL || count < 1.0 {
        return Err(DiagramError::Invalid(d.validate()));
    }

    let mut b = Diagram::builder(n, true);
    if let Some(t0) = d.terminal0() {
        b.terminal0(t0.0);
    }
    b.terminal1(t1.0);
    for (id, var, e0, e1) in d.internals() {
        let w = weights[&id];
        b.node(
            id.0,
            var,
            (e0.head.0, Complex64::new(w[0], 0.0)),
            (e1.head.0, Complex64::new(w[1], 0.0)),
        );
    }
    b.root(d.root().0);
    let diagram = b.build().expect("reweighting preserves structure");

    Ok(WeightingResult {
        diagram,
        query_count: queries,
        model_count: count as u64,
        unassigned: unassigned
            .into_iter()
            .filter(|(id, _)| !d.is_terminal(*id))
            .map(|(id, set)| (id, set.iter().collect()))
            .collect(),
    })
}

/// Number of satisfying assignments of the Boolean function, derived from
/// the root weights of the uniform distribution. Unsatisfiable functions
/// count zero.
pub fn model_count(d: &Diagram) -> Result<u64, DiagramError> {
    match uniform_weights(d) {
        Ok(result) => Ok(result.model_count),
        Err(DiagramError::Unsatisfiable) => Ok(0),
        Err(e) => Err(e),
    }
}
