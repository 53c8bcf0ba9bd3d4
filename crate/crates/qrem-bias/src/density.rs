//! Dense density-matrix simulation with initialization and gate noise, and
//! the explicit mitigated measurement pipeline.
//!
//! States live on at most [`DENSE_QUBIT_CAP`] qubits as row-major
//! `2^n x 2^n` complex matrices. Initialization error enters as a classical
//! bit-flip mixture before the circuit; two-qubit gate noise as a
//! depolarizing channel on the gate's qubit pair.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{PauliOp, PauliString, PauliSumOperator, Phase};
use crate::spam::{conventional_qrem, ProbabilityVector, SpamModel};

/// Dense simulation is limited to this many qubits (a 4096 x 4096 complex
/// matrix at the cap).
pub const DENSE_QUBIT_CAP: usize = 12;

/// Residual imaginary part allowed in a real expectation value.
const IMAG_TOL: f64 = 1e-9;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

type Mat2 = [[Complex64; 2]; 2];

fn gate_matrix_1q(gate: &Gate) -> Option<Mat2> {
    match *gate {
        Gate::H(_) => Some([
            [c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)],
            [c64(FRAC_1_SQRT_2, 0.0), c64(-FRAC_1_SQRT_2, 0.0)],
        ]),
        // (Z + Y)/sqrt(2)
        Gate::Hy(_) => Some([
            [c64(FRAC_1_SQRT_2, 0.0), c64(0.0, -FRAC_1_SQRT_2)],
            [c64(0.0, FRAC_1_SQRT_2), c64(-FRAC_1_SQRT_2, 0.0)],
        ]),
        Gate::X(_) => Some([
            [c64(0.0, 0.0), c64(1.0, 0.0)],
            [c64(1.0, 0.0), c64(0.0, 0.0)],
        ]),
        Gate::Rz(_, theta) => Some([
            [Complex64::from_polar(1.0, -theta / 2.0), c64(0.0, 0.0)],
            [c64(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
        ]),
        _ => None,
    }
}

/// 4x4 matrix of a two-qubit gate in the basis index `v_a << 1 | v_b` for
/// `Cnot(a=control, b=target)` / `Cz(a, b)`.
fn gate_matrix_2q(gate: &Gate) -> Option<[[Complex64; 4]; 4]> {
    let zero = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    match *gate {
        Gate::Cnot(..) => {
            let mut m = [[zero; 4]; 4];
            // |vc, vt> -> |vc, vt ^ vc>
            m[0b00][0b00] = one;
            m[0b01][0b01] = one;
            m[0b11][0b10] = one;
            m[0b10][0b11] = one;
            Some(m)
        }
        Gate::Cz(..) => {
            let mut m = [[zero; 4]; 4];
            m[0b00][0b00] = one;
            m[0b01][0b01] = one;
            m[0b10][0b10] = one;
            m[0b11][0b11] = -one;
            Some(m)
        }
        _ => None,
    }
}

fn insert_zero_bit(value: usize, pos: usize) -> usize {
    ((value >> pos) << (pos + 1)) | (value & ((1 << pos) - 1))
}

/// A trace-one Hermitian `2^n x 2^n` state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    fn check_cap(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 || n_qubits > DENSE_QUBIT_CAP {
            return Err(Error::SizeGuard {
                what: "dense density matrix",
                limit: DENSE_QUBIT_CAP,
                requested: n_qubits,
            });
        }
        Ok(())
    }

    /// Pure computational basis state `|index><index|`.
    pub fn pure_state(n_qubits: usize, index: usize) -> Result<Self> {
        Self::check_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::QubitOutOfRange {
                index,
                n_qubits,
            });
        }
        let mut data = vec![c64(0.0, 0.0); dim * dim];
        data[index * dim + index] = c64(1.0, 0.0);
        Ok(Self { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i]).sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
        self.data.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_fn(dim, dim, |i, j| self.data[i * dim + j])
    }

    pub fn from_dmatrix(m: &DMatrix<Complex64>) -> Result<Self> {
        let dim = m.nrows();
        if !dim.is_power_of_two() || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: m.ncols(),
            });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        Self::check_cap(n_qubits)?;
        let mut data = vec![c64(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = m[(i, j)];
            }
        }
        Ok(Self { n_qubits, data })
    }

    /// Check trace, Hermiticity, and (through the spectrum) positivity.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if (self.trace() - c64(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::InvalidProbability(format!(
                "trace is {}",
                self.trace()
            )));
        }
        for i in 0..dim {
            for j in i..dim {
                let diff = (self.data[i * dim + j] - self.data[j * dim + i].conj()).norm();
                if diff > 1e-9 {
                    return Err(Error::NonHermitian(format!(
                        "entry ({i},{j}) asymmetry {diff}"
                    )));
                }
            }
        }
        let min = crate::linalg::min_eigenvalue(&self.to_dmatrix());
        if min < -1e-8 {
            return Err(Error::InvalidProbability(format!(
                "negative eigenvalue {min}"
            )));
        }
        Ok(())
    }

    fn apply_1q(&mut self, u: &Mat2, qubit: usize) {
        let dim = self.dim();
        let bit = 1usize << qubit;
        // Left multiplication: mix row pairs.
        for base in 0..dim / 2 {
            let i0 = insert_zero_bit(base, qubit);
            let i1 = i0 | bit;
            for col in 0..dim {
                let a = self.data[i0 * dim + col];
                let b = self.data[i1 * dim + col];
                self.data[i0 * dim + col] = u[0][0] * a + u[0][1] * b;
                self.data[i1 * dim + col] = u[1][0] * a + u[1][1] * b;
            }
        }
        // Right multiplication by u†: mix column pairs with conjugates.
        for base in 0..dim / 2 {
            let j0 = insert_zero_bit(base, qubit);
            let j1 = j0 | bit;
            for row in 0..dim {
                let a = self.data[row * dim + j0];
                let b = self.data[row * dim + j1];
                self.data[row * dim + j0] = a * u[0][0].conj() + b * u[0][1].conj();
                self.data[row * dim + j1] = a * u[1][0].conj() + b * u[1][1].conj();
            }
        }
    }

    fn apply_2q(&mut self, u: &[[Complex64; 4]; 4], qa: usize, qb: usize) {
        let dim = self.dim();
        let (lo, hi) = (qa.min(qb), qa.max(qb));
        let idx4 = |base: usize, va: usize, vb: usize| {
            insert_zero_bit(insert_zero_bit(base, lo), hi) | (va << qa) | (vb << qb)
        };
        for base in 0..dim / 4 {
            let rows = [
                idx4(base, 0, 0),
                idx4(base, 0, 1),
                idx4(base, 1, 0),
                idx4(base, 1, 1),
            ];
            for col in 0..dim {
                let vals = [
                    self.data[rows[0] * dim + col],
                    self.data[rows[1] * dim + col],
                    self.data[rows[2] * dim + col],
                    self.data[rows[3] * dim + col],
                ];
                for r in 0..4 {
                    let mut acc = c64(0.0, 0.0);
                    for s in 0..4 {
                        acc += u[r][s] * vals[s];
                    }
                    self.data[rows[r] * dim + col] = acc;
                }
            }
        }
        for base in 0..dim / 4 {
            let cols = [
                idx4(base, 0, 0),
                idx4(base, 0, 1),
                idx4(base, 1, 0),
                idx4(base, 1, 1),
            ];
            for row in 0..dim {
                let vals = [
                    self.data[row * dim + cols[0]],
                    self.data[row * dim + cols[1]],
                    self.data[row * dim + cols[2]],
                    self.data[row * dim + cols[3]],
                ];
                for cidx in 0..4 {
                    let mut acc = c64(0.0, 0.0);
                    for s in 0..4 {
                        acc += vals[s] * u[cidx][s].conj();
                    }
                    self.data[row * dim + cols[cidx]] = acc;
                }
            }
        }
    }

    /// Two-qubit depolarizing channel:
    /// `rho -> (1 - rate) rho + rate * (I/4 ⊗ Tr_ab rho)`.
    fn depolarize_pair(&mut self, qa: usize, qb: usize, rate: f64) {
        let dim = self.dim();
        let (lo, hi) = (qa.min(qb), qa.max(qb));
        let rest_dim = dim / 4;
        let idx4 = |base: usize, va: usize, vb: usize| {
            insert_zero_bit(insert_zero_bit(base, lo), hi) | (va << qa) | (vb << qb)
        };
        let mut reduced = vec![c64(0.0, 0.0); rest_dim * rest_dim];
        for r in 0..rest_dim {
            for c in 0..rest_dim {
                let mut acc = c64(0.0, 0.0);
                for va in 0..2 {
                    for vb in 0..2 {
                        acc += self.data[idx4(r, va, vb) * dim + idx4(c, va, vb)];
                    }
                }
                reduced[r * rest_dim + c] = acc;
            }
        }
        for e in self.data.iter_mut() {
            *e *= 1.0 - rate;
        }
        let quarter = rate * 0.25;
        for r in 0..rest_dim {
            for c in 0..rest_dim {
                let add = reduced[r * rest_dim + c] * quarter;
                for va in 0..2 {
                    for vb in 0..2 {
                        self.data[idx4(r, va, vb) * dim + idx4(c, va, vb)] += add;
                    }
                }
            }
        }
    }

    /// Partial trace keeping the listed qubits (ascending), producing a
    /// `2^k`-dimensional state whose bit `j` corresponds to `keep[j]`.
    pub fn partial_trace_keep(&self, keep: &[usize]) -> Result<DensityMatrix> {
        for &q in keep {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        if keep.is_empty() || keep.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "kept qubits must be non-empty and strictly ascending".into(),
            ));
        }
        let k = keep.len();
        let dim = self.dim();
        let kdim = 1usize << k;
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        let rdim = 1usize << rest.len();
        let expand = |bits: usize, positions: &[usize]| -> usize {
            positions
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &q)| acc | (((bits >> j) & 1) << q))
        };
        let mut out = vec![c64(0.0, 0.0); kdim * kdim];
        for r in 0..rdim {
            let r_part = expand(r, &rest);
            for s in 0..kdim {
                let row = expand(s, keep) | r_part;
                for t in 0..kdim {
                    let col = expand(t, keep) | r_part;
                    out[s * kdim + t] += self.data[row * dim + col];
                }
            }
        }
        Ok(DensityMatrix { n_qubits: k, data: out })
    }

    /// `Tr(rho P)` including the string's phase.
    pub fn expectation_string(&self, p: &PauliString) -> Result<Complex64> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: p.n_qubits(),
            });
        }
        let dim = self.dim();
        let x = p.x_bits() as usize;
        let z = p.z_bits() as usize;
        let mut acc = c64(0.0, 0.0);
        for i in 0..dim {
            let sign = if ((z & i).count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            acc += self.data[i * dim + (i ^ x)] * sign;
        }
        let n_y = (p.x_bits() & p.z_bits()).count_ones() as u8;
        let canonical = Phase::from_exponent((p.phase().exponent() + n_y) % 4);
        Ok(acc * canonical.as_complex())
    }
}

/// Tensor product of `diag(1 - q_i, q_i)`: each qubit intended as `|0>`
/// starts flipped with probability `q_i`.
pub fn noisy_initial_state(n_qubits: usize, q_per_qubit: &[f64]) -> Result<DensityMatrix> {
    DensityMatrix::check_cap(n_qubits)?;
    if q_per_qubit.len() != n_qubits {
        return Err(Error::DimensionMismatch {
            expected: n_qubits,
            actual: q_per_qubit.len(),
        });
    }
    for &q in q_per_qubit {
        if !(0.0..0.5).contains(&q) {
            return Err(Error::InvalidRate(q));
        }
    }
    let dim = 1usize << n_qubits;
    let mut data = vec![c64(0.0, 0.0); dim * dim];
    for idx in 0..dim {
        let mut p = 1.0;
        for (qubit, &q) in q_per_qubit.iter().enumerate() {
            p *= if (idx >> qubit) & 1 == 1 { q } else { 1.0 - q };
        }
        data[idx * dim + idx] = c64(p, 0.0);
    }
    Ok(DensityMatrix { n_qubits, data })
}

/// Run a circuit over a state: `U rho U†` gate by gate. When `gate_noise`
/// is set, every two-qubit gate is followed by a depolarizing channel of
/// that rate on its qubit pair. The input state is left untouched.
pub fn apply_circuit(
    rho: &DensityMatrix,
    circuit: &Circuit,
    gate_noise: Option<f64>,
) -> Result<DensityMatrix> {
    if circuit.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            actual: circuit.n_qubits(),
        });
    }
    if let Some(rate) = gate_noise {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidRate(rate));
        }
    }
    let mut out = rho.clone();
    for gate in circuit.gates() {
        if let Some(u) = gate_matrix_1q(gate) {
            let (q, _) = gate.qubits();
            out.apply_1q(&u, q);
        } else if let Some(u) = gate_matrix_2q(gate) {
            let (a, b) = gate.qubits();
            let b = b.expect("two-qubit gate");
            out.apply_2q(&u, a, b);
            if let Some(rate) = gate_noise {
                if rate > 0.0 {
                    out.depolarize_pair(a, b, rate);
                }
            }
        }
    }
    Ok(out)
}

/// `sum_i c_i Tr(rho P_i)`, asserting the imaginary residue is negligible.
pub fn expectation(rho: &DensityMatrix, obs: &PauliSumOperator) -> Result<f64> {
    let mut acc = c64(0.0, 0.0);
    for (coeff, p) in obs.terms() {
        acc += rho.expectation_string(p)? * coeff;
    }
    if acc.im.abs() >= IMAG_TOL {
        return Err(Error::NonHermitian(format!(
            "imaginary expectation residue {}",
            acc.im
        )));
    }
    Ok(acc.re)
}

/// Apply a stochastic single-qubit 2x2 map to bit `pos` of a distribution.
fn apply_map_1q(values: &mut [f64], pos: usize, m: &[[f64; 2]; 2]) {
    let dim = values.len();
    let bit = 1usize << pos;
    for base in 0..dim / 2 {
        let i0 = insert_zero_bit(base, pos);
        let i1 = i0 | bit;
        let a = values[i0];
        let b = values[i1];
        values[i0] = m[0][0] * a + m[0][1] * b;
        values[i1] = m[1][0] * a + m[1][1] * b;
    }
}

/// Measure one Pauli observable through the full mitigated pipeline:
/// rotate its support into the Z basis, read out the support marginal,
/// apply readout noise `M`, invert the calibrated matrix `M·Q`, and return
/// the parity-weighted expectation.
///
/// The inversion exploits the tensor structure of the calibrated matrix;
/// [`conventional_qrem`] with the dense matrix gives the same result and the
/// tests pin the two paths together.
pub fn qrem_measure(rho: &DensityMatrix, obs: &PauliString, spam: &SpamModel) -> Result<f64> {
    if obs.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            actual: obs.n_qubits(),
        });
    }
    if spam.n_qubits() < rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            actual: spam.n_qubits(),
        });
    }
    let phase = match obs.phase() {
        Phase::PlusOne => 1.0,
        Phase::MinusOne => -1.0,
        _ => {
            return Err(Error::NonHermitian(format!(
                "observable {obs} has imaginary phase"
            )))
        }
    };
    let support = obs.support();
    if support.is_empty() {
        return Ok(phase);
    }
    if support.len() > DENSE_QUBIT_CAP {
        return Err(Error::SizeGuard {
            what: "measured support",
            limit: DENSE_QUBIT_CAP,
            requested: support.len(),
        });
    }

    // Reduce to the support, then rotate X/Y letters into Z.
    let reduced = rho.partial_trace_keep(&support)?;
    let mut basis = Circuit::new(support.len());
    for (j, &q) in support.iter().enumerate() {
        match obs.letter(q) {
            PauliOp::X => basis.push(Gate::H(j))?,
            PauliOp::Y => basis.push(Gate::Hy(j))?,
            _ => {}
        }
    }
    let rotated = apply_circuit(&reduced, &basis, None)?;
    let kdim = 1usize << support.len();
    let mut p: Vec<f64> = (0..kdim).map(|s| rotated.entry(s, s).re).collect();

    // Readout noise, then the contaminated mitigation (M Q)^-1, per qubit.
    for (j, &q) in support.iter().enumerate() {
        let m = spam.readout_matrix_single(q)?;
        apply_map_1q(&mut p, j, &[[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]);
    }
    for (j, &q) in support.iter().enumerate() {
        let l = spam.mitigation_matrix_single(q)?;
        apply_map_1q(&mut p, j, &[[l[(0, 0)], l[(0, 1)]], [l[(1, 0)], l[(1, 1)]]]);
    }

    let parity: f64 = p
        .iter()
        .enumerate()
        .map(|(s, v)| if s.count_ones() % 2 == 0 { *v } else { -*v })
        .sum();
    Ok(phase * parity)
}

/// Same pipeline as [`qrem_measure`] but through the dense calibrated
/// matrix and [`conventional_qrem`]; used to pin the tensor fast path.
pub fn qrem_measure_dense(
    rho: &DensityMatrix,
    obs: &PauliString,
    spam: &SpamModel,
) -> Result<f64> {
    let phase = match obs.phase() {
        Phase::PlusOne => 1.0,
        Phase::MinusOne => -1.0,
        _ => {
            return Err(Error::NonHermitian(format!(
                "observable {obs} has imaginary phase"
            )))
        }
    };
    let support = obs.support();
    if support.is_empty() {
        return Ok(phase);
    }
    let reduced = rho.partial_trace_keep(&support)?;
    let mut basis = Circuit::new(support.len());
    for (j, &q) in support.iter().enumerate() {
        match obs.letter(q) {
            PauliOp::X => basis.push(Gate::H(j))?,
            PauliOp::Y => basis.push(Gate::Hy(j))?,
            _ => {}
        }
    }
    let rotated = apply_circuit(&reduced, &basis, None)?;
    let kdim = 1usize << support.len();
    let ideal: Vec<f64> = (0..kdim).map(|s| rotated.entry(s, s).re.max(0.0)).collect();
    let sum: f64 = ideal.iter().sum();
    let ideal: Vec<f64> = ideal.into_iter().map(|v| v / sum).collect();

    let m = spam.assignment_matrix(&support)?;
    let noisy = &m * nalgebra::DVector::from_column_slice(&ideal);
    let noisy = ProbabilityVector::new(noisy.iter().copied().collect())
        .map_err(|_| Error::InvalidProbability("readout output not normalized".into()))?;
    let calibration = spam.calibrated_assignment_matrix(&support)?;
    let mitigated = conventional_qrem(&noisy, &calibration)?;
    let parity: f64 = mitigated
        .values()
        .iter()
        .enumerate()
        .map(|(s, v)| if s.count_ones() % 2 == 0 { *v } else { -*v })
        .sum();
    Ok(phase * parity)
}

/// Evolve by the exact propagator `exp(i H t)`, built spectrally.
pub fn exact_evolution(
    h: &PauliSumOperator,
    t: f64,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    if h.n_qubits() != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            actual: h.n_qubits(),
        });
    }
    if !h.is_hermitian() {
        return Err(Error::NonHermitian("evolution needs a Hermitian operator".into()));
    }
    let u = crate::linalg::expm_i_hermitian(&h.to_dense()?, t);
    let dim = u.nrows();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let unitarity = (&u * u.adjoint() - id).norm();
    if unitarity > 1e-11 {
        return Err(Error::NonHermitian(format!(
            "propagator deviates from unitarity by {unitarity}"
        )));
    }
    let evolved = &u * rho.to_dmatrix() * u.adjoint();
    DensityMatrix::from_dmatrix(&evolved)
}

/// Dense unitary of a circuit, for oracles and small-system checks.
pub fn dense_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    if circuit.n_qubits() > DENSE_QUBIT_CAP {
        return Err(Error::SizeGuard {
            what: "dense circuit unitary",
            limit: DENSE_QUBIT_CAP,
            requested: circuit.n_qubits(),
        });
    }
    let dim = 1usize << circuit.n_qubits();
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for gate in circuit.gates() {
        if let Some(m) = gate_matrix_1q(gate) {
            let (q, _) = gate.qubits();
            let bit = 1usize << q;
            for base in 0..dim / 2 {
                let i0 = insert_zero_bit(base, q);
                let i1 = i0 | bit;
                for col in 0..dim {
                    let a = u[(i0, col)];
                    let b = u[(i1, col)];
                    u[(i0, col)] = m[0][0] * a + m[0][1] * b;
                    u[(i1, col)] = m[1][0] * a + m[1][1] * b;
                }
            }
        } else if let Some(m) = gate_matrix_2q(gate) {
            let (a, b) = gate.qubits();
            let b = b.expect("two-qubit gate");
            let (lo, hi) = (a.min(b), a.max(b));
            let idx4 = |base: usize, va: usize, vb: usize| {
                insert_zero_bit(insert_zero_bit(base, lo), hi) | (va << a) | (vb << b)
            };
            for base in 0..dim / 4 {
                let rows = [
                    idx4(base, 0, 0),
                    idx4(base, 0, 1),
                    idx4(base, 1, 0),
                    idx4(base, 1, 1),
                ];
                for col in 0..dim {
                    let vals = [
                        u[(rows[0], col)],
                        u[(rows[1], col)],
                        u[(rows[2], col)],
                        u[(rows[3], col)],
                    ];
                    for r in 0..4 {
                        let mut acc = c64(0.0, 0.0);
                        for s in 0..4 {
                            acc += m[r][s] * vals[s];
                        }
                        u[(rows[r], col)] = acc;
                    }
                }
            }
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::exp_pauli_circuit;
    use crate::clifford::{ghz_circuit, graph_state_circuit, GhzVariant, GraphSpec};
    use crate::spam::qrem_bias_factor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn noisy_initial_state_diagonals() {
        let rho = noisy_initial_state(1, &[0.06]).unwrap();
        assert!(close(rho.entry(0, 0).re, 0.94, 1e-15));
        assert!(close(rho.entry(1, 1).re, 0.06, 1e-15));

        let rho = noisy_initial_state(2, &[0.1, 0.2]).unwrap();
        let expected = [0.72, 0.08, 0.18, 0.02];
        for (i, e) in expected.iter().enumerate() {
            assert!(close(rho.entry(i, i).re, *e, 1e-15));
        }

        let pure = noisy_initial_state(3, &[0.0; 3]).unwrap();
        assert!(close(pure.entry(0, 0).re, 1.0, 1e-15));
        assert!(close(pure.purity(), 1.0, 1e-12));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let rho = noisy_initial_state(2, &[0.1, 0.2]).unwrap();
        let out = apply_circuit(&rho, &Circuit::new(2), Some(0.3)).unwrap();
        assert_eq!(rho, out);
    }

    #[test]
    fn clifford_prep_stays_pure_and_valid() {
        let circuit = Circuit::from(&graph_state_circuit(&GraphSpec::path(4).unwrap()));
        let rho = DensityMatrix::pure_state(4, 0).unwrap();
        let out = apply_circuit(&rho, &circuit, Some(0.0)).unwrap();
        assert!(close(out.purity(), 1.0, 1e-10));
        out.validate().unwrap();
    }

    #[test]
    fn full_depolarizing_on_cz_mixes_the_pair() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::H(1)).unwrap();
        c.push(Gate::Cz(0, 1)).unwrap();
        let rho = DensityMatrix::pure_state(2, 0).unwrap();
        let out = apply_circuit(&rho, &c, Some(1.0)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 0.25 } else { 0.0 };
                assert!((out.entry(i, j) - c64(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        // Maximally mixed state, traceless observable.
        let dim_ops: PauliSumOperator = "1.0 XZ\n0.5 YY".parse().unwrap();
        let mixed = {
            let mut c = Circuit::new(2);
            c.push(Gate::H(0)).unwrap();
            c.push(Gate::H(1)).unwrap();
            c.push(Gate::Cz(0, 1)).unwrap();
            apply_circuit(
                &DensityMatrix::pure_state(2, 0).unwrap(),
                &c,
                Some(1.0),
            )
            .unwrap()
        };
        assert!(close(expectation(&mixed, &dim_ops).unwrap(), 0.0, 1e-12));

        let z0: PauliSumOperator = "1.0 Z".parse().unwrap();
        let ground = DensityMatrix::pure_state(1, 0).unwrap();
        assert!(close(expectation(&ground, &z0).unwrap(), 1.0, 1e-15));

        // GHZ(3): <XXX> = 1.
        let ghz = apply_circuit(
            &DensityMatrix::pure_state(3, 0).unwrap(),
            &Circuit::from(&ghz_circuit(3, GhzVariant::Linear).unwrap()),
            None,
        )
        .unwrap();
        let xxx: PauliSumOperator = "1.0 XXX".parse().unwrap();
        assert!(close(expectation(&ghz, &xxx).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn expectation_tracks_string_phase() {
        let ground = DensityMatrix::pure_state(1, 0).unwrap();
        let minus_z: PauliString = "-Z".parse().unwrap();
        assert!(close(
            ground.expectation_string(&minus_z).unwrap().re,
            -1.0,
            1e-15
        ));
    }

    #[test]
    fn qrem_measure_with_zero_spam_equals_expectation() {
        let circuit = Circuit::from(&graph_state_circuit(&GraphSpec::path(3).unwrap()));
        let rho = apply_circuit(&DensityMatrix::pure_state(3, 0).unwrap(), &circuit, None).unwrap();
        let spam = SpamModel::zero(3).unwrap();
        for s in ["XZI", "ZXZ", "IZX", "YYZ"] {
            let p: PauliString = s.parse().unwrap();
            let via_pipeline = qrem_measure(&rho, &p, &spam).unwrap();
            let direct = rho.expectation_string(&p).unwrap().re;
            assert!(close(via_pipeline, direct, 1e-12), "{s}");
        }
    }

    #[test]
    fn qrem_measure_single_qubit_bias_cancellation() {
        // The state carries the same q as the calibration, so the two
        // effects cancel exactly on one qubit.
        let q = 0.07;
        let spam = SpamModel::uniform(1, 0.02, 0.04, q).unwrap();
        let rho = noisy_initial_state(1, &[q]).unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert!(close(qrem_measure(&rho, &z, &spam).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn qrem_measure_magnifies_graph_stabilizer_products() {
        // Weight-3 product of two generators on the 4-qubit path graph:
        // S0 S2 = X0 X2 Z3, measured as (1-2q)^2 / (1-2q)^3 = 1/(1-2q).
        let q = 0.01;
        let n = 4;
        let graph = GraphSpec::path(n).unwrap();
        let cliff = graph_state_circuit(&graph);
        let circuit = Circuit::from(&cliff);
        let rho = apply_circuit(&noisy_initial_state(n, &[q; 4]).unwrap(), &circuit, None).unwrap();
        let spam = SpamModel::uniform(n, 0.02, 0.03, q).unwrap();

        let pattern = PauliString::from_symplectic(n, 0, 0b0101).unwrap();
        let stabilizer = crate::clifford::conjugate_pauli(&cliff, &pattern).unwrap();
        assert_eq!(stabilizer.to_string(), "XIXZ");
        let value = qrem_measure(&rho, &stabilizer, &spam).unwrap();
        assert!(close(value, 1.0 / (1.0 - 2.0 * q), 1e-9));
    }

    #[test]
    fn qrem_measure_matches_dense_pipeline() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let n = 4;
        let spam = SpamModel::uniform(n, 0.03, 0.05, 0.02).unwrap();
        let circuit = Circuit::from(&graph_state_circuit(&GraphSpec::path(n).unwrap()));
        let rho = apply_circuit(&noisy_initial_state(n, &[0.02; 4]).unwrap(), &circuit, None)
            .unwrap();
        for _ in 0..20 {
            let mask = (1u128 << n) - 1;
            let p = PauliString::from_symplectic(
                n,
                rng.gen::<u128>() & mask,
                rng.gen::<u128>() & mask,
            )
            .unwrap();
            let fast = qrem_measure(&rho, &p, &spam).unwrap();
            let dense = qrem_measure_dense(&rho, &p, &spam).unwrap();
            assert!(close(fast, dense, 1e-10), "{p}: {fast} vs {dense}");
        }
    }

    #[test]
    fn qrem_measure_equals_raw_times_bias_factor() {
        // After mitigation the Z-parity expectation is the raw one divided
        // by prod (1-2q_i) over the support, independent of readout rates.
        let n = 5;
        let rates: Vec<f64> = vec![0.01, 0.03, 0.0, 0.02, 0.04];
        let spam = SpamModel::new(
            rates
                .iter()
                .map(|&q| crate::spam::QubitRates {
                    delta0: 0.02,
                    delta1: 0.06,
                    q,
                })
                .collect(),
        )
        .unwrap();
        let circuit = Circuit::from(&graph_state_circuit(&GraphSpec::path(n).unwrap()));
        let rho = apply_circuit(&noisy_initial_state(n, &rates).unwrap(), &circuit, None).unwrap();
        for s in ["XZIII", "ZXZII", "IZXZI", "YYZII", "ZIXIZ"] {
            let p: PauliString = s.parse().unwrap();
            let raw = rho.expectation_string(&p).unwrap().re;
            let factor =
                qrem_bias_factor(&p.support().iter().map(|&q| rates[q]).collect::<Vec<_>>())
                    .unwrap();
            let corrected = qrem_measure(&rho, &p, &spam).unwrap();
            assert!(close(corrected, raw * factor, 1e-9), "{s}");
        }
    }

    #[test]
    fn exact_evolution_conserves_energy_and_time_zero_is_identity() {
        let h: PauliSumOperator = "0.6 XZ\n0.4 ZX\n0.3 YY".parse().unwrap();
        let rho = DensityMatrix::pure_state(2, 1).unwrap();

        let same = exact_evolution(&h, 0.0, &rho).unwrap();
        assert!((same.to_dmatrix() - rho.to_dmatrix()).norm() < 1e-12);

        let e0 = expectation(&rho, &h).unwrap();
        for t in [0.3, 1.0, 2.7] {
            let evolved = exact_evolution(&h, t, &rho).unwrap();
            let et = expectation(&evolved, &h).unwrap();
            assert!(close(et, e0, 1e-10), "t={t}");
            evolved.validate().unwrap();
        }
    }

    #[test]
    fn exact_evolution_of_z_preserves_populations() {
        let h: PauliSumOperator = "1.0 Z".parse().unwrap();
        let mut c = Circuit::new(1);
        c.push(Gate::H(0)).unwrap();
        let rho = apply_circuit(&DensityMatrix::pure_state(1, 0).unwrap(), &c, None).unwrap();
        let evolved = exact_evolution(&h, std::f64::consts::PI, &rho).unwrap();
        assert!(close(evolved.entry(0, 0).re, 0.5, 1e-12));
        assert!(close(evolved.entry(1, 1).re, 0.5, 1e-12));
        // At t = pi the off-diagonal phase is e^{2 i pi} = 1.
        assert!((evolved.entry(0, 1) - rho.entry(0, 1)).norm() < 1e-10);
    }

    #[test]
    fn apply_circuit_outputs_satisfy_state_invariants() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        for _ in 0..5 {
            let n = 3;
            let mut c = Circuit::new(n);
            for _ in 0..10 {
                match rng.gen_range(0..5) {
                    0 => c.push(Gate::H(rng.gen_range(0..n))).unwrap(),
                    1 => c.push(Gate::Hy(rng.gen_range(0..n))).unwrap(),
                    2 => c.push(Gate::Rz(rng.gen_range(0..n), rng.gen::<f64>())).unwrap(),
                    3 => {
                        let a = rng.gen_range(0..n);
                        let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
                        c.push(Gate::Cnot(a, b)).unwrap();
                    }
                    _ => {
                        let a = rng.gen_range(0..n);
                        let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
                        c.push(Gate::Cz(a, b)).unwrap();
                    }
                }
            }
            let rho = noisy_initial_state(n, &[0.05, 0.01, 0.08]).unwrap();
            let out = apply_circuit(&rho, &c, Some(0.02)).unwrap();
            out.validate().unwrap();
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = noisy_initial_state(3, &[0.1, 0.2, 0.3]).unwrap();
        let reduced = rho.partial_trace_keep(&[1]).unwrap();
        assert!(close(reduced.entry(0, 0).re, 0.8, 1e-12));
        assert!(close(reduced.entry(1, 1).re, 0.2, 1e-12));
    }

    #[test]
    fn exp_pauli_circuit_preserves_density_invariants() {
        let p: PauliString = "XY".parse().unwrap();
        let c = exp_pauli_circuit(&p, 0.37).unwrap();
        let rho = noisy_initial_state(2, &[0.02, 0.05]).unwrap();
        let out = apply_circuit(&rho, &c, None).unwrap();
        out.validate().unwrap();
    }
}
