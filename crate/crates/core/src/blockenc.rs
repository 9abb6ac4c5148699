//! Block encodings built on the state synthesizer: a unitary whose top-left
//! block (ancillas projected on all-zero) equals a target matrix.
//!
//! Two constructions are provided. The projector encoding sandwiches a swap
//! between the state preparation and its adjoint, embedding `|psi><psi|`.
//! The Gram-style encoding pairs the preparation with variable-controlled
//! single-qubit gates on a system register, embedding the weighted sum
//! `sum_z |c_z|^2 f(z) V_z` of the controlled family.
//!
//! Qubit order is `[variable | node ancilla | system]`, so the encoding's
//! ancilla register is the whole synthesis register and the block acts on
//! the trailing system qubits.

use crate::circuit::{synth_state_unitary, Circuit, Gate, Matrix2, Prep};
use crate::diagram::{Diagram, DiagramError};
use crate::simulator::{apply_circuit_gates, brute_force_state, SimError, SparseState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Verified constructions must stay below this error.
pub const BLOCK_TOL: f64 = 1e-9;
/// Total-qubit cap for running the verification; larger constructions are
/// still emitted, just unverified.
pub const DENSE_VERIFY_CAP: usize = 14;

#[derive(Debug, Error)]
pub enum BlockEncError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// A block-encoding circuit with its declared parameters: scale factor
/// `alpha`, ancilla count, and measured error (present when verification
/// ran within the size cap).
#[derive(Clone, Debug)]
pub struct BlockEncodingSpec {
    pub alpha: f64,
    pub ancilla_count: usize,
    pub epsilon: Option<f64>,
    pub circuit: Circuit,
    pub ancilla_qubits: Vec<usize>,
    pub system_qubits: Vec<usize>,
}

/// Family of unitaries selected per variable bit: bit `i` of `z` applies
/// `gates[i]` on system qubit `i`, so `V_z` is the tensor product of the
/// selected gates.
#[derive(Clone, Debug)]
pub struct ControlledFamily {
    pub gates: Vec<Matrix2>,
}

impl ControlledFamily {
    pub fn identity(n: usize) -> ControlledFamily {
        let id = [
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        ControlledFamily { gates: vec![id; n] }
    }

    pub fn z_family(n: usize) -> ControlledFamily {
        let z = [
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ];
        ControlledFamily { gates: vec![z; n] }
    }

    /// Dense `V_z` for a basis selection, system qubit 0 as the top factor.
    pub fn tensor_for(&self, z: &[bool]) -> DMatrix<Complex64> {
        let id2 = DMatrix::identity(2, 2);
        let mut out = DMatrix::identity(1, 1);
        for (i, &bit) in z.iter().enumerate() {
            let factor = if bit {
                let g = &self.gates[i];
                DMatrix::from_row_slice(2, 2, &[g[0][0], g[0][1], g[1][0], g[1][1]])
            } else {
                id2.clone()
            };
            out = out.kronecker(&factor);
        }
        out
    }
}

fn cnot(control: usize, target: usize) -> Gate {
    Gate::Cu {
        control,
        target,
        matrix: [
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ],
    }
}

/// Block encoding of `|psi><psi|` for the diagram's state `psi`: the state
/// preparation, a swap of the variable register with the system register
/// (three CNOTs per pair), and the preparation's adjoint.
pub fn projector_encoding(d: &Diagram) -> Result<BlockEncodingSpec, BlockEncError> {
    let base = synth_state_unitary(d)?;
    let n = d.var_count();
    let anc = base.qubits;
    let total = anc + n;

    let mut gates = base.gates.clone();
    for i in 0..n {
        let sys = anc + i;
        gates.push(cnot(i, sys));
        gates.push(cnot(sys, i));
        gates.push(cnot(i, sys));
    }
    gates.extend(base.adjoint_gates());

    let circuit = Circuit {
        qubits: total,
        prep: vec![Prep::Open; total],
        gates,
        layout: base.layout.clone(),
    };

    let epsilon = if total <= DENSE_VERIFY_CAP {
        let block = extract_block(&circuit, n)?;
        let psi = brute_force_state(d)?;
        let dim = 1usize << n;
        let mut ideal = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for x in 0..dim {
            for y in 0..dim {
                ideal[(x, y)] = psi.amp(x as u64) * psi.amp(y as u64).conj();
            }
        }
        Some(operator_norm(&(block - ideal)))
    } else {
        None
    };

    Ok(BlockEncodingSpec {
        alpha: 1.0,
        ancilla_count: anc,
        epsilon,
        circuit,
        ancilla_qubits: (0..anc).collect(),
        system_qubits: (anc..total).collect(),
    })
}

/// Gram-style block encoding of `sum_z |c_z|^2 f(z) V_z`: the preparation
/// followed by variable-controlled family gates, closed by the adjoint of
/// the bare preparation.
pub fn gram_encoding(
    d: &Diagram,
    family: &ControlledFamily,
) -> Result<BlockEncodingSpec, BlockEncError> {
    let base = synth_state_unitary(d)?;
    let n = d.var_count();
    assert_eq!(family.gates.len(), n, "one family gate per variable");
    let anc = base.qubits;
    let total = anc + n;

    let mut gates = base.gates.clone();
    for (i, matrix) in family.gates.iter().enumerate() {
        gates.push(Gate::Cu {
            control: i,
            target: anc + i,
            matrix: *matrix,
        });
    }
    gates.extend(base.adjoint_gates());

    let circuit = Circuit {
        qubits: total,
        prep: vec![Prep::Open; total],
        gates,
        layout: base.layout.clone(),
    };

    let epsilon = if total <= DENSE_VERIFY_CAP {
        let block = extract_block(&circuit, n)?;
        let ideal = direct_sum(d, family)?;
        Some(operator_norm(&(block - ideal)))
    } else {
        None
    };

    Ok(BlockEncodingSpec {
        alpha: 1.0,
        ancilla_count: anc,
        epsilon,
        circuit,
        ancilla_qubits: (0..anc).collect(),
        system_qubits: (anc..total).collect(),
    })
}

/// The target matrix summed term by term from the diagram's amplitudes:
/// independent verification route for the Gram encoding.
pub fn direct_sum(d: &Diagram, family: &ControlledFamily) -> Result<DMatrix<Complex64>, SimError> {
    let n = d.var_count();
    let dim = 1usize << n;
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for k in 0..dim {
        let bits: Vec<bool> = (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect();
        let amp = d
            .amplitude(&bits)
            .expect("direct sum expects a weighted diagram");
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        out += family.tensor_for(&bits) * Complex64::new(p, 0.0);
    }
    Ok(out)
}

/// Top-left block `<x, 0| U |y, 0>` of the circuit's gate-list unitary with
/// every non-system qubit projected on zero: one sparse simulation per
/// system basis column. System qubits are the trailing `system` qubits.
pub fn extract_block(c: &Circuit, system: usize) -> Result<DMatrix<Complex64>, SimError> {
    let dim = 1usize << system;
    let mut block = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for y in 0..dim {
        // Trailing system qubits occupy the low bits of the key.
        let mut state = SparseState::basis(c.qubits, y as u64);
        apply_circuit_gates(&mut state, &c.gates)?;
        for x in 0..dim {
            block[(x, y)] = state.amp(x as u64);
        }
    }
    Ok(block)
}

/// Operator norm (largest singular value).
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s))
}
