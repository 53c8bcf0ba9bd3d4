//! Parametric circuits, Pauli-exponential compilation, and first-order
//! Trotterization.
//!
//! `exp(i theta P)` compiles to the symmetric V shape: a basis-change layer
//! (H for X, HY for Y), a CNOT ladder descending the support, `RZ(-2 theta)`
//! on the last support qubit, then the mirror image. Qubits where `P` acts as
//! identity are skipped; the resulting unitary is verified against the dense
//! matrix exponential in the tests.

use std::collections::BTreeMap;
use std::fmt;

use crate::clifford::{CliffordCircuit, CliffordGate};
use crate::error::{Error, Result};
use crate::pauli::{PauliOp, PauliString, PauliSumOperator, Phase};

/// Circuit gates. `HY = (Z + Y)/sqrt(2)` is the Hermitian involution that
/// exchanges Z and Y, playing the role H plays for X.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    Hy(usize),
    X(usize),
    Rz(usize, f64),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(a) | Gate::Hy(a) | Gate::X(a) | Gate::Rz(a, _) => (a, None),
            Gate::Cnot(a, b) | Gate::Cz(a, b) => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot(..) | Gate::Cz(..))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(a) => write!(f, "H {a}"),
            Gate::Hy(a) => write!(f, "HY {a}"),
            Gate::X(a) => write!(f, "X {a}"),
            Gate::Rz(a, theta) => write!(f, "RZ {a} {theta}"),
            Gate::Cnot(c, t) => write!(f, "CNOT {c} {t}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
        }
    }
}

/// An ordered gate list plus the map from parameter slots to the RZ gates
/// they drive.
///
/// Each slot entry is `(gate index, scale)`; binding parameter value `v`
/// rewrites that gate to `RZ(-2 * scale * v)`, matching the angle convention
/// of [`append_exp_pauli`].
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    slots: BTreeMap<usize, Vec<(usize, f64)>>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            slots: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (a, b) = gate.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        if let Some(b) = b {
            if a == b {
                return Err(Error::DuplicateQubit(a));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Parameter slots in use, with the RZ gates each one drives.
    pub fn slots(&self) -> &BTreeMap<usize, Vec<(usize, f64)>> {
        &self.slots
    }

    /// Register an RZ gate as driven by `slot` with the given scale.
    pub fn bind_rz_to_slot(&mut self, slot: usize, gate_index: usize, scale: f64) -> Result<()> {
        match self.gates.get(gate_index) {
            Some(Gate::Rz(..)) => {}
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "gate {gate_index} is not an RZ gate"
                )))
            }
        }
        self.slots.entry(slot).or_default().push((gate_index, scale));
        Ok(())
    }

    /// Rewrite every slot-driven RZ angle from the parameter vector.
    pub fn bind_parameters(&mut self, params: &[f64]) -> Result<()> {
        let max_slot = self.slots.keys().next_back().copied();
        if let Some(max) = max_slot {
            if max >= params.len() {
                return Err(Error::ParameterCount {
                    expected: max + 1,
                    actual: params.len(),
                });
            }
        }
        for (slot, entries) in &self.slots {
            for &(idx, scale) in entries {
                if let Gate::Rz(q, _) = self.gates[idx] {
                    self.gates[idx] = Gate::Rz(q, -2.0 * scale * params[*slot]);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    /// Debug dump: one gate per line, e.g. `H 0`, `RZ 3 -0.6`, `CNOT 1 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl From<&CliffordCircuit> for Circuit {
    fn from(c: &CliffordCircuit) -> Self {
        let mut out = Circuit::new(c.n_qubits());
        for g in c.gates() {
            let gate = match *g {
                CliffordGate::H(a) => Gate::H(a),
                CliffordGate::X(a) => Gate::X(a),
                CliffordGate::Cz(a, b) => Gate::Cz(a, b),
                CliffordGate::Cnot(c, t) => Gate::Cnot(c, t),
            };
            out.push(gate).expect("validated in source circuit");
        }
        out
    }
}

/// Append the compiled form of `exp(i theta P)` to `circuit` and return the
/// index of the central RZ gate, or `None` when `P` has empty support (the
/// exponential is then a global phase and no gates are emitted).
///
/// `P` must carry a real phase; a `-1` phase is folded into the angle.
pub fn append_exp_pauli(
    circuit: &mut Circuit,
    p: &PauliString,
    theta: f64,
) -> Result<Option<usize>> {
    if p.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits(),
            actual: p.n_qubits(),
        });
    }
    let theta = match p.phase() {
        Phase::PlusOne => theta,
        Phase::MinusOne => -theta,
        _ => {
            return Err(Error::NonHermitian(format!(
                "cannot exponentiate {p} with imaginary phase"
            )))
        }
    };
    let support = p.support();
    if support.is_empty() {
        return Ok(None);
    }

    let basis_layer: Vec<Gate> = support
        .iter()
        .filter_map(|&q| match p.letter(q) {
            PauliOp::X => Some(Gate::H(q)),
            PauliOp::Y => Some(Gate::Hy(q)),
            _ => None,
        })
        .collect();

    for g in &basis_layer {
        circuit.push(*g)?;
    }
    for w in support.windows(2) {
        circuit.push(Gate::Cnot(w[0], w[1]))?;
    }
    let rz_index = circuit.gates.len();
    circuit.push(Gate::Rz(*support.last().unwrap(), -2.0 * theta))?;
    for w in support.windows(2).rev() {
        circuit.push(Gate::Cnot(w[0], w[1]))?;
    }
    for g in &basis_layer {
        circuit.push(*g)?;
    }
    Ok(Some(rz_index))
}

/// Standalone circuit for `exp(i theta P)`.
pub fn exp_pauli_circuit(p: &PauliString, theta: f64) -> Result<Circuit> {
    let mut c = Circuit::new(p.n_qubits());
    append_exp_pauli(&mut c, p, theta)?;
    Ok(c)
}

/// First-order Trotterization of `exp(i H t)` with `n_slices` repetitions of
/// the per-term product.
///
/// Within every slice the terms are applied in a fixed documented order:
/// descending `|coefficient|`, ties broken by the letter string
/// (lexicographic) and then by signed coefficient. Identity terms contribute
/// only a global phase and are skipped. The ordering affects only the
/// Trotter remainder.
pub fn trotterize(h: &PauliSumOperator, t: f64, n_slices: usize) -> Result<Circuit> {
    if n_slices == 0 {
        return Err(Error::InvalidConfig("n_slices must be at least 1".into()));
    }
    if !h.is_hermitian() {
        return Err(Error::NonHermitian(
            "Trotterization needs a Hermitian operator".into(),
        ));
    }
    let mut terms: Vec<(f64, PauliString)> = h
        .terms()
        .iter()
        .filter(|(_, p)| p.weight() > 0)
        .cloned()
        .collect();
    terms.sort_by(|(ca, pa), (cb, pb)| {
        cb.abs()
            .partial_cmp(&ca.abs())
            .unwrap()
            .then_with(|| pa.to_string().cmp(&pb.to_string()))
            .then_with(|| ca.partial_cmp(cb).unwrap())
    });

    let dt = t / n_slices as f64;
    let mut circuit = Circuit::new(h.n_qubits());
    for _ in 0..n_slices {
        for (c, p) in &terms {
            append_exp_pauli(&mut circuit, p, c * dt)?;
        }
    }
    Ok(circuit)
}
