//! Quantify how quantum readout error mitigation (QREM) misbehaves when
//! qubit initialization is imperfect.
//!
//! Inverting a calibrated assignment matrix removes readout noise, but the
//! calibration itself is taken on imperfectly initialized qubits, so the
//! inverse silently divides every measured observable by `(1-2q)` per
//! supported qubit. For entangled-state fidelity estimates, variational
//! eigensolvers, and Trotterized time evolution this turns a small per-qubit
//! initialization rate `q` into a systematic bias that grows exponentially
//! with system size. This crate models the effect end to end:
//!
//! - [`pauli`] — Pauli-string algebra, Pauli-sum operators, Jordan-Wigner
//!   transformation of fermionic excitations.
//! - [`spam`] — per-qubit readout/initialization error model, assignment and
//!   calibration matrices, the linear mitigation map, analytic bias factors,
//!   and the safety bound on acceptable initialization error.
//! - [`clifford`] — Clifford preparation circuits for graph and GHZ states
//!   with exact Heisenberg propagation of Pauli operators.
//! - [`fidelity`] — exact, sampled, dynamic-programming, and closed-form
//!   evaluation of the inflated ("fake") fidelity reported by mitigated
//!   stabilizer measurements.
//! - [`circuit`] — parametric circuits, Pauli-exponential compilation
//!   (basis change + CNOT ladder + RZ), first-order Trotterization.
//! - [`density`] — dense density-matrix simulation with initialization and
//!   two-qubit depolarizing noise, plus the explicit mitigated measurement
//!   pipeline.
//! - [`chem`] — UCCSD-style ansatz assembly, a VQE loop running mitigation
//!   inside every iteration, and a time-evolution error benchmark.
//! - [`driver`] — experiment drivers behind the `qrem-bias` binary, emitting
//!   deterministic CSV/JSON sweeps.
//!
//! The `examples/` directory contains one runnable program per capability;
//! start with `cargo run --release --example fake_fidelity`.

pub mod chem;
pub mod circuit;
pub mod clifford;
pub mod density;
pub mod driver;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod optimize;
pub mod pauli;
pub mod spam;

pub use error::{Error, Result};
pub use pauli::{FermionExcitation, PauliOp, PauliString, PauliSumOperator, Phase};
pub use spam::{ProbabilityVector, SpamModel};
