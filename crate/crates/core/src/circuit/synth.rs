//! The two circuit synthesizers.
//!
//! State generation lowers a weighted diagram to a circuit that prepares its
//! state: every variable qubit is opened into `|+>`, the root node qubit is
//! raised to `|1>`, and each internal node (in topological order) emits a
//! controlled-H plus a controlled rotation carrying its two edge weights,
//! followed by Toffolis that mark the child node qubits along the selected
//! branch. A mirror pass uncomputes every node qubit except the root.
//!
//! The phase synthesizer drops the amplitude gates, lets the Toffolis chase
//! the path of a basis input all the way into a 1-terminal qubit, applies a
//! single phase there, and uncomputes, realizing `|x> -> e^{i·theta·f(x)}|x>`
//! with all ancillas returned to zero.

use super::{Circuit, Gate, Matrix2, Prep, QubitLayout};
use crate::diagram::{Diagram, DiagramError, NodeId};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Single-qubit unitary attached to a node: first column is the normalized
/// weight pair, second column completes the unitary.
fn node_unitary(w0: Complex64, w1: Complex64) -> Result<Matrix2, DiagramError> {
    let norm = (w0.norm_sqr() + w1.norm_sqr()).sqrt();
    if norm <= crate::diagram::WEIGHT_ZERO_TOL {
        return Err(DiagramError::DegenerateNode(NodeId(u32::MAX)));
    }
    Ok([
        [w0 / norm, -w1.conj() / norm],
        [w1 / norm, w0.conj() / norm],
    ])
}

struct Frame {
    layout: QubitLayout,
    order: Vec<NodeId>,
}

fn prepare(d: &Diagram, with_terminal_qubit: bool) -> Result<Frame, DiagramError> {
    d.require_semantics()?;
    let n = d.var_count();
    let order = d.topological_order()?;
    let mut node_qubits = Vec::with_capacity(order.len());
    for (offset, id) in d.internal_ids().enumerate() {
        node_qubits.push((id, n + offset));
    }
    let root_qubit = node_qubits
        .iter()
        .find(|(id, _)| *id == d.root())
        .map(|&(_, q)| q);
    let terminal_qubit = with_terminal_qubit.then_some(n + node_qubits.len());
    Ok(Frame {
        layout: QubitLayout {
            var_count: n,
            node_qubits,
            root_qubit,
            terminal_qubit,
        },
        order,
    })
}

/// Toffoli block of one node: for each branch whose head gets a qubit, an
/// optional X conjugation on the variable qubit (0-branch) around a Toffoli
/// marking the head. `mark_terminal1` additionally targets the 1-terminal
/// qubit (phase synthesis).
fn edge_block(
    d: &Diagram,
    layout: &QubitLayout,
    qubit_of: &BTreeMap<NodeId, usize>,
    id: NodeId,
    mark_terminal1: bool,
    gates: &mut Vec<Gate>,
) {
    let node_q = qubit_of[&id];
    let var_q = d.var_of(id).expect("internal node") - 1;
    for b in [false, true] {
        let head = d.edge(id, b).expect("internal node").head;
        let target = if Some(head) == d.terminal1() && mark_terminal1 {
            layout.terminal_qubit
        } else {
            qubit_of.get(&head).copied()
        };
        let Some(target) = target else { continue };
        if !b {
            gates.push(Gate::X(var_q));
        }
        gates.push(Gate::Ccx {
            control0: node_q,
            control1: var_q,
            target,
        });
        if !b {
            gates.push(Gate::X(var_q));
        }
    }
}

/// Lower a weighted diagram to a state-preparation circuit. Simulated from
/// all-zero, the circuit leaves the variable register in the diagram's state
/// with node qubits disentangled as `|1>` on the root and `|0>` elsewhere.
pub fn synth_state(d: &Diagram) -> Result<Circuit, DiagramError> {
    if !d.is_weighted() {
        return Err(DiagramError::UnweightedInput);
    }
    let frame = prepare(d, false)?;
    let n = d.var_count();
    let qubit_of: BTreeMap<NodeId, usize> = frame.layout.node_qubits.iter().copied().collect();
    let mut gates = Vec::new();

    for q in 0..n {
        gates.push(Gate::H(q));
    }
    if let Some(root_q) = frame.layout.root_qubit {
        gates.push(Gate::X(root_q));
    }

    for &id in &frame.order {
        let node_q = qubit_of[&id];
        let var_q = d.var_of(id).expect("internal node") - 1;
        let e0 = d.edge(id, false).expect("internal node");
        let e1 = d.edge(id, true).expect("internal node");
        let matrix =
            node_unitary(e0.weight, e1.weight).map_err(|_| DiagramError::DegenerateNode(id))?;
        gates.push(Gate::Ch { control: node_q, target: var_q });
        gates.push(Gate::Cu { control: node_q, target: var_q, matrix });
        edge_block(d, &frame.layout, &qubit_of, id, false, &mut gates);
    }

    for &id in frame.order.iter().rev() {
        edge_block(d, &frame.layout, &qubit_of, id, false, &mut gates);
    }

    let qubits = n + frame.layout.node_qubits.len();
    let circuit = Circuit {
        qubits,
        prep: vec![Prep::Zero; qubits],
        gates,
        layout: Some(frame.layout),
    };
    debug_assert!(circuit.check().is_ok());
    Ok(circuit)
}

/// [`synth_state`] with a trailing X on the root qubit, closing the circuit
/// into a unitary that maps the all-zero state to (diagram state) ⊗ |0...0>.
/// Block encodings compose this form with its adjoint.
pub fn synth_state_unitary(d: &Diagram) -> Result<Circuit, DiagramError> {
    let mut circuit = synth_state(d)?;
    if let Some(root_q) = circuit.layout.as_ref().and_then(|l| l.root_qubit) {
        circuit.gates.push(Gate::X(root_q));
    }
    Ok(circuit)
}

/// Lower an unweighted diagram to a phase oracle: open variable inputs,
/// `|V| - 1` zeroed ancillas, and the action `|x> -> e^{i·theta·f(x)}|x>`.
pub fn synth_phase(d: &Diagram, theta: f64) -> Result<Circuit, DiagramError> {
    if d.is_weighted() {
        return Err(DiagramError::WeightedInput);
    }
    let frame = prepare(d, true)?;
    let n = d.var_count();
    if d.terminal1().is_none() {
        return Err(DiagramError::Unsatisfiable);
    }
    let terminal_q = frame.layout.terminal_qubit.expect("requested above");
    let qubit_of: BTreeMap<NodeId, usize> = frame.layout.node_qubits.iter().copied().collect();
    let mut gates = Vec::new();

    // Tautology: no internal nodes, so the phase is unconditional; the
    // terminal qubit is raised, phased, and restored.
    if frame.order.is_empty() {
        gates.push(Gate::X(terminal_q));
        gates.push(Gate::Phase { target: terminal_q, theta });
        gates.push(Gate::X(terminal_q));
    } else {
        let root_q = frame.layout.root_qubit.expect("root is internal");
        // The root ancilla contract is |0>: raise it here, lower it at the
        // end, so the whole circuit fixes every ancilla at zero.
        gates.push(Gate::X(root_q));
        for &id in &frame.order {
            edge_block(d, &frame.layout, &qubit_of, id, true, &mut gates);
        }
        gates.push(Gate::Phase { target: terminal_q, theta });
        for &id in frame.order.iter().rev() {
            edge_block(d, &frame.layout, &qubit_of, id, true, &mut gates);
        }
        gates.push(Gate::X(root_q));
    }

    let qubits = n + frame.layout.node_qubits.len() + 1;
    let mut prep = vec![Prep::Zero; qubits];
    prep[..n].fill(Prep::Open);
    let circuit = Circuit {
        qubits,
        prep,
        gates,
        layout: Some(frame.layout),
    };
    debug_assert!(circuit.check().is_ok());
    Ok(circuit)
}
