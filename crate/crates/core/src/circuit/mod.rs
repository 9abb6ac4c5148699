//! Gate-list circuit IR shared by the synthesizers, the simulator, and the
//! block encodings.

mod format;
mod synth;

pub use format::{embedded_source, CircuitParseError};
pub use synth::{synth_phase, synth_state, synth_state_unitary};

use crate::diagram::NodeId;
use num_complex::Complex64;
use thiserror::Error;

/// Unitarity tolerance for user-supplied 2x2 matrices.
pub const UNITARY_TOL: f64 = 1e-12;

pub type Matrix2 = [[Complex64; 2]; 2];

/// One gate. Controlled unitaries carry their 2x2 matrix inline.
#[derive(Clone, PartialEq, Debug)]
pub enum Gate {
    X(usize),
    H(usize),
    Ch { control: usize, target: usize },
    Cu { control: usize, target: usize, matrix: Matrix2 },
    Ccx { control0: usize, control1: usize, target: usize },
    Phase { target: usize, theta: f64 },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(t) | Gate::H(t) => vec![t],
            Gate::Ch { control, target } | Gate::Cu { control, target, .. } => {
                vec![control, target]
            }
            Gate::Ccx { control0, control1, target } => vec![control0, control1, target],
            Gate::Phase { target, .. } => vec![target],
        }
    }

    /// Inverse gate: everything here is self-inverse except `Cu` (conjugate
    /// transpose) and `Phase` (negated angle).
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Cu { control, target, matrix } => Gate::Cu {
                control: *control,
                target: *target,
                matrix: [
                    [matrix[0][0].conj(), matrix[1][0].conj()],
                    [matrix[0][1].conj(), matrix[1][1].conj()],
                ],
            },
            Gate::Phase { target, theta } => Gate::Phase {
                target: *target,
                theta: -theta,
            },
            other => other.clone(),
        }
    }
}

/// Largest deviation of `m* m` from the identity.
pub fn unitarity_defect(m: &Matrix2) -> f64 {
    let mut defect = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = m.iter().map(|row| row[i].conj() * row[j]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot - expect).norm());
        }
    }
    defect
}

/// Initial assignment of one qubit. `Open` qubits are circuit inputs; the
/// simulator defaults them to zero unless values are supplied.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Prep {
    Zero,
    One,
    Plus,
    Open,
}

/// Role map from diagram nodes to qubits, recorded by the synthesizers.
/// Variable `x_i` sits on qubit `i - 1`; node qubits follow in ascending
/// node id; the optional 1-terminal qubit comes last.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QubitLayout {
    pub var_count: usize,
    pub node_qubits: Vec<(NodeId, usize)>,
    pub root_qubit: Option<usize>,
    pub terminal_qubit: Option<usize>,
}

impl QubitLayout {
    pub fn qubit_of(&self, id: NodeId) -> Option<usize> {
        self.node_qubits
            .iter()
            .find(|(node, _)| *node == id)
            .map(|(_, q)| *q)
    }

    /// Ancilla qubits (everything that is not a variable qubit) with the
    /// basis value each must hold at circuit end.
    pub fn ancilla_expectations(&self) -> Vec<(usize, bool)> {
        let mut out: Vec<(usize, bool)> = self
            .node_qubits
            .iter()
            .map(|&(_, q)| (q, Some(q) == self.root_qubit))
            .collect();
        if let Some(t) = self.terminal_qubit {
            out.push((t, false));
        }
        out.sort();
        out
    }
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("gate references qubit {qubit} outside 0..{total}")]
    QubitOutOfRange { qubit: usize, total: usize },
    #[error("gate uses the same qubit {0} twice")]
    DuplicateQubit(usize),
    #[error("controlled unitary departs from unitarity by {defect:.3e}")]
    NonUnitary { defect: f64 },
}

/// An ordered gate list over a declared qubit count, with per-qubit initial
/// assignments. Immutable once built.
#[derive(Clone, PartialEq, Debug)]
pub struct Circuit {
    pub qubits: usize,
    pub prep: Vec<Prep>,
    pub gates: Vec<Gate>,
    /// Present on synthesized circuits; parsed circuits carry `None`.
    pub layout: Option<QubitLayout>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Circuit {
        Circuit {
            qubits,
            prep: vec![Prep::Open; qubits],
            gates: Vec::new(),
            layout: None,
        }
    }

    pub fn check(&self) -> Result<(), CircuitError> {
        for gate in &self.gates {
            let qs = gate.qubits();
            for &q in &qs {
                if q >= self.qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        qubit: q,
                        total: self.qubits,
                    });
                }
            }
            for (i, &a) in qs.iter().enumerate() {
                if qs[i + 1..].contains(&a) {
                    return Err(CircuitError::DuplicateQubit(a));
                }
            }
            if let Gate::Cu { matrix, .. } = gate {
                let defect = unitarity_defect(matrix);
                if defect > UNITARY_TOL {
                    return Err(CircuitError::NonUnitary { defect });
                }
            }
        }
        Ok(())
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for gate in &self.gates {
            match gate {
                Gate::X(_) => c.x += 1,
                Gate::H(_) => c.h += 1,
                Gate::Ch { .. } => c.ch += 1,
                Gate::Cu { .. } => c.cu += 1,
                Gate::Ccx { .. } => c.ccx += 1,
                Gate::Phase { .. } => c.phase += 1,
            }
        }
        c
    }

    /// Gate list of the inverse circuit.
    pub fn adjoint_gates(&self) -> Vec<Gate> {
        self.gates.iter().rev().map(Gate::adjoint).collect()
    }

    pub fn open_qubits(&self) -> Vec<usize> {
        (0..self.qubits).filter(|&q| self.prep[q] == Prep::Open).collect()
    }
}

/// Per-gate-type tallies.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct GateCounts {
    pub x: usize,
    pub h: usize,
    pub ch: usize,
    pub cu: usize,
    pub ccx: usize,
    pub phase: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.x + self.h + self.ch + self.cu + self.ccx + self.phase
    }

    pub fn one_qubit(&self) -> usize {
        self.x + self.h + self.phase
    }

    pub fn two_qubit(&self) -> usize {
        self.ch + self.cu
    }
}
