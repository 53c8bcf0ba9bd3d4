//! Clifford preparation circuits and exact Heisenberg-picture propagation of
//! Pauli operators.
//!
//! Conjugation `P -> U P U†` is computed gate by gate on the symplectic bit
//! masks with exact phase tracking, so a Pauli pushed through a thousand-gate
//! circuit costs a handful of word operations per gate.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Gates available in preparation circuits.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CliffordGate {
    H(usize),
    X(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
}

impl CliffordGate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            CliffordGate::H(a) | CliffordGate::X(a) => (a, None),
            CliffordGate::Cz(a, b) | CliffordGate::Cnot(a, b) => (a, Some(b)),
        }
    }
}

/// An ordered list of Clifford gates on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordCircuit {
    n_qubits: usize,
    gates: Vec<CliffordGate>,
}

impl CliffordCircuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn push(&mut self, gate: CliffordGate) -> Result<()> {
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
}

/// An undirected simple graph defining a graph state.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSpec {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    /// Edges are normalized to `(min, max)` and sorted; self-loops and
    /// duplicates are rejected.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range for {n_vertices} vertices"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        Ok(Self {
            n_vertices,
            edges: normalized,
        })
    }

    /// Path graph 0-1-...-(n-1).
    pub fn path(n_vertices: usize) -> Result<Self> {
        Self::new(n_vertices, (1..n_vertices).map(|i| (i - 1, i)).collect())
    }

    /// Complete graph on n vertices.
    pub fn complete(n_vertices: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..n_vertices {
            for b in a + 1..n_vertices {
                edges.push((a, b));
            }
        }
        Self::new(n_vertices, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Parse a graph file: first line `n`, then one `i j` edge per line.
pub fn parse_graph(text: &str) -> Result<GraphSpec> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        if n.is_none() {
            n = Some(parts.next().unwrap().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: "expected vertex count".into(),
            })?);
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "first line holds only the vertex count".into(),
                });
            }
            continue;
        }
        let a: usize = parts
            .next()
            .ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected 'i j'".into(),
            })?
            .parse()
            .map_err(|_| Error::Parse {
                line: line_no,
                msg: "bad vertex index".into(),
            })?;
        let b: usize = parts
            .next()
            .ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected 'i j'".into(),
            })?
            .parse()
            .map_err(|_| Error::Parse {
                line: line_no,
                msg: "bad vertex index".into(),
            })?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing tokens on edge line".into(),
            });
        }
        edges.push((a, b));
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "empty graph file".into(),
    })?;
    GraphSpec::new(n, edges).map_err(|e| match e {
        Error::InvalidGraph(msg) => Error::Parse { line: 0, msg },
        other => other,
    })
}

/// `H` on every vertex, then `CZ` per edge (lexicographic order; CZ gates
/// commute, so the order is irrelevant to the state).
pub fn graph_state_circuit(graph: &GraphSpec) -> CliffordCircuit {
    let mut c = CliffordCircuit::new(graph.n_vertices());
    for q in 0..graph.n_vertices() {
        c.push(CliffordGate::H(q)).expect("vertex in range");
    }
    for &(a, b) in graph.edges() {
        c.push(CliffordGate::Cz(a, b)).expect("edge in range");
    }
    c
}

/// GHZ preparation layout.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GhzVariant {
    /// `H(0)` then a `CNOT(i, i+1)` chain: the excitation propagates along a line.
    Linear,
    /// `H(0)` then `CNOT(0, i)` fan-out from the first qubit.
    Compact,
}

impl fmt::Display for GhzVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhzVariant::Linear => write!(f, "linear"),
            GhzVariant::Compact => write!(f, "compact"),
        }
    }
}

/// Circuit preparing `(|0...0> + |1...1>)/sqrt(2)`.
pub fn ghz_circuit(n_qubits: usize, variant: GhzVariant) -> Result<CliffordCircuit> {
    if n_qubits == 0 {
        return Err(Error::InvalidConfig("GHZ state needs at least one qubit".into()));
    }
    let mut c = CliffordCircuit::new(n_qubits);
    c.push(CliffordGate::H(0))?;
    match variant {
        GhzVariant::Linear => {
            for i in 1..n_qubits {
                c.push(CliffordGate::Cnot(i - 1, i))?;
            }
        }
        GhzVariant::Compact => {
            for i in 1..n_qubits {
                c.push(CliffordGate::Cnot(0, i))?;
            }
        }
    }
    Ok(c)
}

/// Heisenberg propagation `P -> U P U†` through the whole circuit, gates
/// applied in circuit order.
pub fn conjugate_pauli(circuit: &CliffordCircuit, p: &PauliString) -> Result<PauliString> {
    if p.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits(),
            actual: p.n_qubits(),
        });
    }
    let mut x = p.x_bits();
    let mut z = p.z_bits();
    // Work on the canonical-form exponent directly; the per-gate updates
    // below were verified against dense conjugation.
    let mut k = ((p.phase().exponent() + (x & z).count_ones() as u8) % 4) as u32;
    for gate in circuit.gates() {
        match *gate {
            CliffordGate::H(a) => {
                let bit = 1u128 << a;
                // X^x Z^z on qubit a becomes Z^x X^z; reordering to the
                // canonical X-then-Z form costs (-1)^(x z).
                if x & z & bit != 0 {
                    k += 2;
                }
                let xa = x & bit;
                let za = z & bit;
                x = (x & !bit) | za;
                z = (z & !bit) | xa;
            }
            CliffordGate::X(a) => {
                if z & (1u128 << a) != 0 {
                    k += 2;
                }
            }
            CliffordGate::Cz(a, b) => {
                let (ba, bb) = (1u128 << a, 1u128 << b);
                if x & ba != 0 && x & bb != 0 {
                    k += 2;
                }
                let xa = x & ba != 0;
                let xb = x & bb != 0;
                if xb {
                    z ^= ba;
                }
                if xa {
                    z ^= bb;
                }
            }
            CliffordGate::Cnot(c, t) => {
                let (bc, bt) = (1u128 << c, 1u128 << t);
                if x & bc != 0 {
                    x ^= bt;
                }
                if z & bt != 0 {
                    z ^= bc;
                }
            }
        }
    }
    let n_y = (x & z).count_ones();
    let literal = crate::pauli::Phase::from_exponent(((k + 8 - n_y % 4 as u32) % 4) as u8);
    Ok(PauliString::from_symplectic(p.n_qubits(), x, z)?.with_phase(literal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::density;
    use crate::pauli::{PauliOp, Phase};
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn textbook_single_gate_rules() {
        let mut c = CliffordCircuit::new(1);
        c.push(CliffordGate::H(0)).unwrap();
        let z: PauliString = "Z".parse().unwrap();
        let out = conjugate_pauli(&c, &z).unwrap();
        assert_eq!(out.letter(0), PauliOp::X);
        assert_eq!(out.phase(), Phase::PlusOne);

        let y: PauliString = "Y".parse().unwrap();
        let out = conjugate_pauli(&c, &y).unwrap();
        assert_eq!(out.letter(0), PauliOp::Y);
        assert_eq!(out.phase(), Phase::MinusOne);

        let mut c = CliffordCircuit::new(1);
        c.push(CliffordGate::X(0)).unwrap();
        let out = conjugate_pauli(&c, &"Z".parse().unwrap()).unwrap();
        assert_eq!(out.phase(), Phase::MinusOne);
    }

    #[test]
    fn cz_maps_x_to_xz() {
        let mut c = CliffordCircuit::new(2);
        c.push(CliffordGate::Cz(0, 1)).unwrap();
        let out = conjugate_pauli(&c, &"XI".parse().unwrap()).unwrap();
        assert_eq!(out.to_string(), "XZ");

        let out = conjugate_pauli(&c, &"XX".parse().unwrap()).unwrap();
        assert_eq!(out.to_string(), "YY");
    }

    #[test]
    fn cnot_propagation_rules() {
        let mut c = CliffordCircuit::new(2);
        c.push(CliffordGate::Cnot(0, 1)).unwrap();
        assert_eq!(
            conjugate_pauli(&c, &"XI".parse().unwrap()).unwrap().to_string(),
            "XX"
        );
        assert_eq!(
            conjugate_pauli(&c, &"IZ".parse().unwrap()).unwrap().to_string(),
            "ZZ"
        );
        assert_eq!(
            conjugate_pauli(&c, &"YY".parse().unwrap()).unwrap().to_string(),
            "-XZ"
        );
    }

    #[test]
    fn path_graph_stabilizer_generator() {
        // On the 3-qubit path the middle generator is Z X Z.
        let circuit = graph_state_circuit(&GraphSpec::path(3).unwrap());
        let z1: PauliString = "IZI".parse().unwrap();
        let out = conjugate_pauli(&circuit, &z1).unwrap();
        assert_eq!(out.to_string(), "ZXZ");
    }

    #[test]
    fn graph_circuit_layout() {
        let g = GraphSpec::path(2).unwrap();
        let c = graph_state_circuit(&g);
        assert_eq!(
            c.gates(),
            &[
                CliffordGate::H(0),
                CliffordGate::H(1),
                CliffordGate::Cz(0, 1)
            ]
        );

        let empty = GraphSpec::new(3, vec![]).unwrap();
        assert_eq!(graph_state_circuit(&empty).gates().len(), 3);

        let full = GraphSpec::complete(4).unwrap();
        let c = graph_state_circuit(&full);
        assert_eq!(c.gates().len(), 4 + 6);
    }

    #[test]
    fn ghz_circuit_layouts() {
        let c = ghz_circuit(1, GhzVariant::Linear).unwrap();
        assert_eq!(c.gates(), &[CliffordGate::H(0)]);
        let c = ghz_circuit(1, GhzVariant::Compact).unwrap();
        assert_eq!(c.gates(), &[CliffordGate::H(0)]);

        let c = ghz_circuit(3, GhzVariant::Linear).unwrap();
        assert_eq!(
            c.gates(),
            &[
                CliffordGate::H(0),
                CliffordGate::Cnot(0, 1),
                CliffordGate::Cnot(1, 2)
            ]
        );
        let c = ghz_circuit(3, GhzVariant::Compact).unwrap();
        assert_eq!(
            c.gates(),
            &[
                CliffordGate::H(0),
                CliffordGate::Cnot(0, 1),
                CliffordGate::Cnot(0, 2)
            ]
        );
    }

    #[test]
    fn ghz_circuits_prepare_ghz_state() {
        for variant in [GhzVariant::Linear, GhzVariant::Compact] {
            let c = ghz_circuit(3, variant).unwrap();
            let u = density::dense_unitary(&Circuit::from(&c)).unwrap();
            let mut psi = DMatrix::<Complex64>::zeros(8, 1);
            psi[(0, 0)] = Complex64::new(1.0, 0.0);
            let out = u * psi;
            let amp = 1.0 / 2f64.sqrt();
            assert!((out[(0, 0)] - Complex64::new(amp, 0.0)).norm() < 1e-12);
            assert!((out[(7, 0)] - Complex64::new(amp, 0.0)).norm() < 1e-12);
            for i in 1..7 {
                assert!(out[(i, 0)].norm() < 1e-12);
            }
        }
    }

    fn random_circuit(n: usize, len: usize, rng: &mut ChaCha12Rng) -> CliffordCircuit {
        let mut c = CliffordCircuit::new(n);
        for _ in 0..len {
            let kind = if n == 1 {
                rng.gen_range(0..2)
            } else {
                rng.gen_range(0..4)
            };
            let gate = match kind {
                0 => CliffordGate::H(rng.gen_range(0..n)),
                1 => CliffordGate::X(rng.gen_range(0..n)),
                2 => {
                    let a = rng.gen_range(0..n);
                    let b = (a + rng.gen_range(1..n)) % n;
                    CliffordGate::Cz(a, b)
                }
                _ => {
                    let a = rng.gen_range(0..n);
                    let b = (a + rng.gen_range(1..n)) % n;
                    CliffordGate::Cnot(a, b)
                }
            };
            c.push(gate).unwrap();
        }
        c
    }

    fn random_pauli(n: usize, rng: &mut ChaCha12Rng) -> PauliString {
        let mask = (1u128 << n) - 1;
        let p = PauliString::from_symplectic(
            n,
            rng.gen::<u128>() & mask,
            rng.gen::<u128>() & mask,
        )
        .unwrap();
        let phases = [Phase::PlusOne, Phase::PlusI, Phase::MinusOne, Phase::MinusI];
        p.with_phase(phases[rng.gen_range(0..4)])
    }

    #[test]
    fn conjugation_matches_dense_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for n in 2..=5 {
            for _ in 0..20 {
                let circuit = random_circuit(n, 12, &mut rng);
                let p = random_pauli(n, &mut rng);
                let propagated = conjugate_pauli(&circuit, &p).unwrap();

                let u = density::dense_unitary(&Circuit::from(&circuit)).unwrap();
                let dense = &u * p.to_dense().unwrap() * u.adjoint();
                let diff = (propagated.to_dense().unwrap() - dense).norm();
                assert!(diff < 1e-12, "n={n} P={p} -> {propagated}: diff {diff}");
            }
        }
    }

    #[test]
    fn conjugation_by_inverse_returns_input() {
        // H, X, CZ are involutions and CNOT is too, so the reversed circuit
        // inverts the original for these gate sets.
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for n in 1..=4 {
            let circuit = random_circuit(n, 16, &mut rng);
            let mut inverse = CliffordCircuit::new(n);
            for g in circuit.gates().iter().rev() {
                inverse.push(*g).unwrap();
            }
            for _ in 0..25 {
                let p = random_pauli(n, &mut rng);
                let there = conjugate_pauli(&circuit, &p).unwrap();
                let back = conjugate_pauli(&inverse, &there).unwrap();
                assert_eq!(back, p);
            }
        }
    }

    #[test]
    fn graph_parsing() {
        let g = parse_graph("4\n0 1\n1 2\n2 3\n").unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);

        assert!(parse_graph("3\n0 0\n").is_err());
        assert!(parse_graph("3\n0 1\n1 0\n").is_err());
        assert!(parse_graph("3\n0 7\n").is_err());
        assert!(parse_graph("").is_err());
    }
}
