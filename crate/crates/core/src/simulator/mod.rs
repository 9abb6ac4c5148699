//! Sparse state-vector simulation of the circuit IR, a dense reference
//! simulator, brute-force amplitude oracles, and state comparison.
//!
//! Synthesized circuits act on `n + |V| - 2` qubits but keep their support
//! bounded by the variable register, so amplitudes live in a hash map keyed
//! by basis index. Qubit `q` occupies bit `qubits - 1 - q` of the key, which
//! makes ascending keys agree with lexicographic bitstring order.

use crate::circuit::{Circuit, Gate, Matrix2, Prep};
use crate::diagram::Diagram;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::HashMap;
use thiserror::Error;

/// Amplitudes below this magnitude are dropped after every gate.
pub const PRUNE_TOL: f64 = 1e-14;
/// Hard cap on live support entries.
pub const SUPPORT_CAP: usize = 1 << 20;
/// Hard cap on addressable qubits (keys are 64-bit).
pub const QUBIT_CAP: usize = 64;
/// Cap for full-unitary extraction.
pub const UNITARY_QUBIT_CAP: usize = 14;
/// Cap for the dense reference state vector.
pub const DENSE_QUBIT_CAP: usize = 20;
/// Brute-force amplitude oracle cap.
pub const BRUTE_FORCE_CAP: usize = 20;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("circuit uses {0} qubits, above the {QUBIT_CAP}-qubit cap")]
    QubitCap(usize),
    #[error("sparse support exceeded {SUPPORT_CAP} entries")]
    SupportCap,
    #[error("{what} supports at most {cap} qubits, got {got}")]
    SizeCap {
        what: &'static str,
        cap: usize,
        got: usize,
    },
    #[error("expected {expected} input bits for the open qubits, got {got}")]
    InputLength { expected: usize, got: usize },
    #[error("states have different qubit counts: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("invalid circuit: {0}")]
    BadCircuit(#[from] crate::circuit::CircuitError),
}

/// Amplitude map over computational basis states.
#[derive(Clone, Debug)]
pub struct SparseState {
    qubits: usize,
    amps: HashMap<u64, Complex64>,
}

impl SparseState {
    pub fn basis(qubits: usize, key: u64) -> SparseState {
        let mut amps = HashMap::new();
        amps.insert(key, Complex64::new(1.0, 0.0));
        SparseState { qubits, amps }
    }

    /// Build a state from explicit amplitudes (amplitudes below the pruning
    /// threshold are dropped).
    pub fn from_entries(qubits: usize, entries: impl IntoIterator<Item = (u64, Complex64)>) -> SparseState {
        let amps = entries
            .into_iter()
            .filter(|(_, a)| a.norm() >= PRUNE_TOL)
            .collect();
        SparseState { qubits, amps }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, key: u64) -> Complex64 {
        self.amps.get(&key).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn bit(&self, key: u64, qubit: usize) -> bool {
        key >> (self.qubits - 1 - qubit) & 1 == 1
    }

    /// Entries in ascending key order (= lexicographic bitstring order).
    pub fn entries(&self) -> Vec<(u64, Complex64)> {
        let mut out: Vec<(u64, Complex64)> = self.amps.iter().map(|(&k, &a)| (k, a)).collect();
        out.sort_by_key(|&(k, _)| k);
        out
    }

    pub fn bitstring(&self, key: u64) -> String {
        (0..self.qubits)
            .map(|q| if self.bit(key, q) { '1' } else { '0' })
            .collect()
    }

    /// `<bitstring> <re> <im>` lines, lexicographically sorted.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (key, amp) in self.entries() {
            out.push_str(&format!(
                "{} {:.16e} {:.16e}\n",
                self.bitstring(key),
                amp.re,
                amp.im
            ));
        }
        out
    }

    fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= PRUNE_TOL);
    }

    /// Apply a 2x2 matrix on `target`, conditioned on all `controls` being 1.
    fn apply(&mut self, m: &Matrix2, controls: &[usize], target: usize) -> Result<(), SimError> {
        let tmask = 1u64 << (self.qubits - 1 - target);
        let cmask: u64 = controls
            .iter()
            .map(|&c| 1u64 << (self.qubits - 1 - c))
            .fold(0, |acc, m| acc | m);
        let mut next: HashMap<u64, Complex64> = HashMap::with_capacity(self.amps.len() * 2);
        for (&key, &amp) in &self.amps {
            if key & cmask != cmask {
                *next.entry(key).or_default() += amp;
                continue;
            }
            let k0 = key & !tmask;
            let k1 = key | tmask;
            if key & tmask == 0 {
                // Handle the (k0, k1) pair once, from its zero side.
                let a0 = amp;
                let a1 = self.amps.get(&k1).copied().unwrap_or_default();
                let b0 = m[0][0] * a0 + m[0][1] * a1;
                let b1 = m[1][0] * a0 + m[1][1] * a1;
                *next.entry(k0).or_default() += b0;
                *next.entry(k1).or_default() += b1;
            } else if !self.amps.contains_key(&k0) {
                // Lone one-side entry.
                let b0 = m[0][1] * amp;
                let b1 = m[1][1] * amp;
                *next.entry(k0).or_default() += b0;
                *next.entry(k1).or_default() += b1;
            }
        }
        self.amps = next;
        self.prune();
        if self.amps.len() > SUPPORT_CAP {
            return Err(SimError::SupportCap);
        }
        Ok(())
    }
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const X_MATRIX: Matrix2 = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];

fn h_matrix() -> Matrix2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
}

fn phase_matrix(theta: f64) -> Matrix2 {
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, theta)],
    ]
}

fn apply_gate(state: &mut SparseState, gate: &Gate) -> Result<(), SimError> {
    match gate {
        Gate::X(t) => state.apply(&X_MATRIX, &[], *t),
        Gate::H(t) => state.apply(&h_matrix(), &[], *t),
        Gate::Ch { control, target } => state.apply(&h_matrix(), &[*control], *target),
        Gate::Cu { control, target, matrix } => state.apply(matrix, &[*control], *target),
        Gate::Ccx { control0, control1, target } => {
            state.apply(&X_MATRIX, &[*control0, *control1], *target)
        }
        Gate::Phase { target, theta } => state.apply(&phase_matrix(*theta), &[], *target),
    }
}

/// Apply a bare gate list to an existing state (no prep handling).
pub fn apply_circuit_gates(state: &mut SparseState, gates: &[Gate]) -> Result<(), SimError> {
    for gate in gates {
        apply_gate(state, gate)?;
    }
    Ok(())
}

/// Instrumentation collected during a run.
#[derive(Clone, Copy, Debug, Default)]
pub struct SimStats {
    /// Largest live support observed after any gate.
    pub high_water_mark: usize,
}

fn initial_state(c: &Circuit, inputs: Option<&[bool]>) -> Result<SparseState, SimError> {
    if c.qubits > QUBIT_CAP {
        return Err(SimError::QubitCap(c.qubits));
    }
    let open = c.open_qubits();
    if let Some(inputs) = inputs {
        if inputs.len() != open.len() {
            return Err(SimError::InputLength {
                expected: open.len(),
                got: inputs.len(),
            });
        }
    }
    let mut key = 0u64;
    for (q, prep) in c.prep.iter().enumerate() {
        if *prep == Prep::One {
            key |= 1u64 << (c.qubits - 1 - q);
        }
    }
    if let Some(inputs) = inputs {
        for (&q, &bit) in open.iter().zip(inputs) {
            if bit {
                key |= 1u64 << (c.qubits - 1 - q);
            }
        }
    }
    let mut state = SparseState::basis(c.qubits, key);
    for (q, prep) in c.prep.iter().enumerate() {
        if *prep == Prep::Plus {
            state.apply(&h_matrix(), &[], q)?;
        }
    }
    Ok(state)
}

/// Run prep and gates from the all-zero default (open qubits read as zero).
pub fn simulate(c: &Circuit) -> Result<SparseState, SimError> {
    simulate_with_stats(c, None).map(|(state, _)| state)
}

/// Run with explicit bits for the open qubits, in ascending qubit order.
pub fn simulate_on(c: &Circuit, inputs: &[bool]) -> Result<SparseState, SimError> {
    simulate_with_stats(c, Some(inputs)).map(|(state, _)| state)
}

pub fn simulate_with_stats(
    c: &Circuit,
    inputs: Option<&[bool]>,
) -> Result<(SparseState, SimStats), SimError> {
    c.check()?;
    let mut state = initial_state(c, inputs)?;
    let mut stats = SimStats {
        high_water_mark: state.support_len(),
    };
    for gate in &c.gates {
        apply_gate(&mut state, gate)?;
        stats.high_water_mark = stats.high_water_mark.max(state.support_len());
        debug_assert!(
            (state.norm_sqr() - 1.0).abs() < 1e-9,
            "norm drifted after a gate"
        );
    }
    Ok((state, stats))
}

/// Dense reference simulator; semantics identical to the sparse path.
pub fn simulate_dense(c: &Circuit, inputs: Option<&[bool]>) -> Result<Vec<Complex64>, SimError> {
    c.check()?;
    if c.qubits > DENSE_QUBIT_CAP {
        return Err(SimError::SizeCap {
            what: "dense simulation",
            cap: DENSE_QUBIT_CAP,
            got: c.qubits,
        });
    }
    let start = initial_state(c, inputs)?;
    let dim = 1usize << c.qubits;
    let mut vec = vec![Complex64::new(0.0, 0.0); dim];
    for (key, amp) in start.entries() {
        vec[key as usize] = amp;
    }
    for gate in &c.gates {
        dense_apply(&mut vec, c.qubits, gate);
    }
    Ok(vec)
}

fn dense_apply(vec: &mut [Complex64], qubits: usize, gate: &Gate) {
    let (m, controls, target): (Matrix2, Vec<usize>, usize) = match gate {
        Gate::X(t) => (X_MATRIX, vec![], *t),
        Gate::H(t) => (h_matrix(), vec![], *t),
        Gate::Ch { control, target } => (h_matrix(), vec![*control], *target),
        Gate::Cu { control, target, matrix } => (*matrix, vec![*control], *target),
        Gate::Ccx { control0, control1, target } => {
            (X_MATRIX, vec![*control0, *control1], *target)
        }
        Gate::Phase { target, theta } => (phase_matrix(*theta), vec![], *target),
    };
    let tmask = 1usize << (qubits - 1 - target);
    let cmask: usize = controls
        .iter()
        .map(|&c| 1usize << (qubits - 1 - c))
        .fold(0, |acc, m| acc | m);
    for k in 0..vec.len() {
        if k & tmask == 0 && k & cmask == cmask {
            let k1 = k | tmask;
            let a0 = vec[k];
            let a1 = vec[k1];
            vec[k] = m[0][0] * a0 + m[0][1] * a1;
            vec[k1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// Direct amplitude oracle: evaluate the weighted-diagram amplitude for all
/// `2^n` inputs. Entirely independent of the circuit path.
pub fn brute_force_state(d: &Diagram) -> Result<SparseState, SimError> {
    let n = d.var_count();
    if n > BRUTE_FORCE_CAP {
        return Err(SimError::SizeCap {
            what: "brute-force oracle",
            cap: BRUTE_FORCE_CAP,
            got: n,
        });
    }
    let mut amps = HashMap::new();
    for k in 0..1u64 << n {
        let bits: Vec<bool> = (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect();
        let amp = d
            .amplitude(&bits)
            .expect("oracle expects a weighted diagram");
        if amp.norm() >= PRUNE_TOL {
            amps.insert(k, amp);
        }
    }
    Ok(SparseState { qubits: n, amps })
}

/// Expected fixed basis values for ancilla qubits during comparison.
#[derive(Clone, Debug, Default)]
pub struct AncillaSpec {
    pub expected: Vec<(usize, bool)>,
}

/// Outcome of comparing a simulated register against a reference state.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub max_abs_amp_error: f64,
    /// `|<a|b>|^2`, phase-invariant.
    pub fidelity: f64,
    pub worst_basis_state: Option<String>,
    /// True iff the full state factorizes as (reduced state) ⊗ (declared
    /// ancilla basis state) within 1e-10.
    pub ancilla_factorized: bool,
}

/// Compare `full` (system ⊗ ancillas) against `reference` on the system
/// qubits, with `ancillas` pinning the expected basis value of every
/// non-system qubit of `full`.
pub fn compare(
    full: &SparseState,
    reference: &SparseState,
    ancillas: &AncillaSpec,
) -> Result<ComparisonReport, SimError> {
    if full.qubits != reference.qubits + ancillas.expected.len() {
        return Err(SimError::QubitMismatch(
            full.qubits,
            reference.qubits + ancillas.expected.len(),
        ));
    }
    let anc_qubits: std::collections::BTreeSet<usize> =
        ancillas.expected.iter().map(|&(q, _)| q).collect();
    let system_qubits: Vec<usize> =
        (0..full.qubits).filter(|q| !anc_qubits.contains(q)).collect();
    if system_qubits.len() != reference.qubits {
        return Err(SimError::QubitMismatch(system_qubits.len(), reference.qubits));
    }

    // Embed the reference into the full register.
    let mut anc_key = 0u64;
    for &(q, bit) in &ancillas.expected {
        if bit {
            anc_key |= 1u64 << (full.qubits - 1 - q);
        }
    }
    let mut embedded: HashMap<u64, Complex64> = HashMap::new();
    for (rkey, amp) in reference.entries() {
        let mut key = anc_key;
        for (i, &q) in system_qubits.iter().enumerate() {
            if rkey >> (reference.qubits - 1 - i) & 1 == 1 {
                key |= 1u64 << (full.qubits - 1 - q);
            }
        }
        embedded.insert(key, amp);
    }

    let anc_mask = mask_of(&anc_qubits, full.qubits);
    let mut max_err = 0.0f64;
    let mut worst = None;
    let mut overlap = Complex64::new(0.0, 0.0);
    let mut off_sector = 0.0f64;
    let mut keys: std::collections::BTreeSet<u64> = full.amps.keys().copied().collect();
    keys.extend(embedded.keys().copied());
    for key in keys {
        let a = full.amp(key);
        let b = embedded.get(&key).copied().unwrap_or_default();
        overlap += a.conj() * b;
        let diff = (a - b).norm();
        if diff > max_err {
            max_err = diff;
            worst = Some(full.bitstring(key));
        }
        if key & anc_mask != anc_key {
            off_sector += a.norm_sqr();
        }
    }

    Ok(ComparisonReport {
        max_abs_amp_error: max_err,
        fidelity: overlap.norm_sqr(),
        worst_basis_state: worst,
        ancilla_factorized: off_sector.sqrt() <= 1e-10,
    })
}

fn mask_of(qubits: &std::collections::BTreeSet<usize>, total: usize) -> u64 {
    qubits
        .iter()
        .map(|&q| 1u64 << (total - 1 - q))
        .fold(0, |acc, m| acc | m)
}

/// Full unitary of the gate list (prep ignored): column `k` is the gate-list
/// action on basis state `k`.
pub fn unitary_of(c: &Circuit) -> Result<DMatrix<Complex64>, SimError> {
    c.check()?;
    if c.qubits > UNITARY_QUBIT_CAP {
        return Err(SimError::SizeCap {
            what: "unitary extraction",
            cap: UNITARY_QUBIT_CAP,
            got: c.qubits,
        });
    }
    let dim = 1usize << c.qubits;
    let mut u = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for k in 0..dim {
        let mut vec = vec![Complex64::new(0.0, 0.0); dim];
        vec[k] = Complex64::new(1.0, 0.0);
        for gate in &c.gates {
            dense_apply(&mut vec, c.qubits, gate);
        }
        for (row, amp) in vec.into_iter().enumerate() {
            u[(row, k)] = amp;
        }
    }
    Ok(u)
}
