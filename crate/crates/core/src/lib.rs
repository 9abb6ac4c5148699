//! Toolkit for treating weighted free binary decision diagrams (WFBDDs) as
//! classical descriptions of quantum states.
//!
//! A WFBDD encodes an `n`-qubit state: the underlying Boolean function fixes
//! the support (which basis states appear) and the complex edge weights fix
//! the amplitudes. This crate provides
//!
//! - [`diagram`]: the diagram data model, validation against the structural
//!   definitions (reducedness, freeness, weight rules), the two contraction
//!   rules, path evaluation, and the amplitude semantics;
//! - [`weighting`]: the uniform weight distribution that turns a plain free
//!   BDD into the WFBDD of the uniform superposition over its satisfying
//!   assignments, and model counting derived from it;
//! - [`circuit`]: a small gate-list IR plus the two synthesizers — state
//!   generation from a WFBDD and a controlled-phase oracle from an FBDD;
//! - [`simulator`]: a sparse state-vector simulator for the IR, a dense
//!   reference simulator, brute-force amplitude oracles, and comparison
//!   utilities used throughout the test suites;
//! - [`families`]: constructive generators for elementary symmetric
//!   functions, a three-branch function family with small FBDDs, and the
//!   binomially-weighted OBDD family with its amplitude-amplification
//!   ratio analysis;
//! - [`blockenc`]: block encodings built on the state synthesizer (projector
//!   encoding and a Gram-style encoding of controlled-unitary sums);
//! - [`generate`]: seeded random diagram generators for tests and benches.
//!
//! # Example
//!
//! Describe `f = x1 | x2`, weight it into the uniform superposition over
//! the three satisfying inputs, lower it to a circuit, and check the
//! simulated state against the amplitude oracle:
//!
//! ```
//! use bddqsp::circuit::synth_state;
//! use bddqsp::simulator::{brute_force_state, compare, simulate, AncillaSpec};
//! use bddqsp::weighting::uniform_weights;
//! use bddqsp::Diagram;
//!
//! let mut b = Diagram::builder(2, false);
//! b.terminal0(0)
//!     .terminal1(1)
//!     .node_unweighted(3, 2, 0, 1) // x2 node
//!     .node_unweighted(2, 1, 3, 1) // root on x1
//!     .root(2);
//! let f = b.build().unwrap();
//!
//! let weighted = uniform_weights(&f).unwrap();
//! assert_eq!(weighted.model_count, 3);
//!
//! let circuit = synth_state(&weighted.diagram).unwrap();
//! let state = simulate(&circuit).unwrap();
//! let oracle = brute_force_state(&weighted.diagram).unwrap();
//! let ancillas = AncillaSpec {
//!     expected: circuit.layout.as_ref().unwrap().ancilla_expectations(),
//! };
//! let report = compare(&state, &oracle, &ancillas).unwrap();
//! assert!(report.fidelity >= 1.0 - 1e-9);
//! ```

pub mod blockenc;
pub mod circuit;
pub mod diagram;
pub mod families;
pub mod generate;
pub mod simulator;
mod varset;
pub mod weighting;

pub use diagram::{Diagram, DiagramBuilder, DiagramError, NodeId};
