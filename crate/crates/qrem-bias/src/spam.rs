//! State-preparation-and-measurement (SPAM) error model.
//!
//! Each qubit carries a readout error pair `(delta0, delta1)` and an
//! initialization flip rate `q`. Readout acts on outcome distributions as the
//! column-stochastic single-qubit matrix
//!
//! ```text
//!       | 1-delta0   delta1 |
//! M  =  |                   |        column j = response to true state j
//!       | delta0   1-delta1 |
//! ```
//!
//! and imperfect initialization as `Q = [[1-q, q], [q, 1-q]]`. A calibration
//! run performed on imperfectly initialized qubits measures `M·Q`, not `M`,
//! so the mitigation matrix that actually undoes SPAM is
//! `Lambda = Q^-1 · M^-1` rather than `M^-1`. Inverting the calibrated
//! matrix on real data therefore divides every Z-type expectation by
//! `(1-2q)` per measured qubit — the source of the bias this crate studies.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};

/// Dense assignment/mitigation matrices are limited to this many qubits;
/// beyond it only the analytic factor path is available.
pub const DENSE_MATRIX_QUBIT_CAP: usize = 14;

const PROB_SUM_TOL: f64 = 1e-9;

/// Per-qubit SPAM rates, all in `[0, 0.5)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct QubitRates {
    pub delta0: f64,
    pub delta1: f64,
    pub q: f64,
}

/// Readout and initialization error rates for a register of qubits.
///
/// Rates are validated at construction: `1 - 2q` must stay away from zero for
/// the mitigation matrix to exist, and `M` must be invertible.
#[derive(Clone, Debug, PartialEq)]
pub struct SpamModel {
    rates: Vec<QubitRates>,
}

fn check_rate(r: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&r) || !r.is_finite() {
        return Err(Error::InvalidRate(r));
    }
    Ok(r)
}

impl SpamModel {
    pub fn new(rates: Vec<QubitRates>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidConfig("SPAM model needs at least one qubit".into()));
        }
        for r in &rates {
            check_rate(r.delta0)?;
            check_rate(r.delta1)?;
            check_rate(r.q)?;
        }
        Ok(Self { rates })
    }

    /// Identical rates on every qubit.
    pub fn uniform(n_qubits: usize, delta0: f64, delta1: f64, q: f64) -> Result<Self> {
        Self::new(vec![QubitRates { delta0, delta1, q }; n_qubits])
    }

    /// Noiseless model (useful as a pipeline identity check).
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::uniform(n_qubits, 0.0, 0.0, 0.0)
    }

    pub fn n_qubits(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self, qubit: usize) -> Result<QubitRates> {
        self.rates
            .get(qubit)
            .copied()
            .ok_or(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.rates.len(),
            })
    }

    /// Initialization rates for all qubits, in qubit order.
    pub fn q_list(&self) -> Vec<f64> {
        self.rates.iter().map(|r| r.q).collect()
    }

    /// Single-qubit readout matrix `M_i` (column-stochastic).
    pub fn readout_matrix_single(&self, qubit: usize) -> Result<Matrix2<f64>> {
        let r = self.rates(qubit)?;
        Ok(Matrix2::new(
            1.0 - r.delta0,
            r.delta1,
            r.delta0,
            1.0 - r.delta1,
        ))
    }

    /// Single-qubit initialization matrix `Q_i`.
    pub fn init_matrix_single(&self, qubit: usize) -> Result<Matrix2<f64>> {
        let r = self.rates(qubit)?;
        Ok(Matrix2::new(1.0 - r.q, r.q, r.q, 1.0 - r.q))
    }

    /// Single-qubit mitigation matrix `Lambda_i = Q_i^-1 M_i^-1`.
    pub fn mitigation_matrix_single(&self, qubit: usize) -> Result<Matrix2<f64>> {
        let m = self.readout_matrix_single(qubit)?;
        let q = self.init_matrix_single(qubit)?;
        let mq = m * q;
        mq.try_inverse().ok_or(Error::SingularMatrix)
    }

    /// Tensor-product readout matrix over the listed qubits. Bit `j` of the
    /// `2^k` outcome index corresponds to `qubits[j]`; pass the list in
    /// ascending order to stay in the global qubit ordering.
    pub fn assignment_matrix(&self, qubits: &[usize]) -> Result<DMatrix<f64>> {
        self.tensor_over(qubits, |q| self.readout_matrix_single(q))
    }

    /// Tensor product of `M_i Q_i`: what a calibration run on imperfectly
    /// initialized qubits actually measures.
    pub fn calibrated_assignment_matrix(&self, qubits: &[usize]) -> Result<DMatrix<f64>> {
        self.tensor_over(qubits, |q| {
            Ok(self.readout_matrix_single(q)? * self.init_matrix_single(q)?)
        })
    }

    /// Tensor product of `Lambda_i = (M_i Q_i)^-1`.
    pub fn mitigation_matrix(&self, qubits: &[usize]) -> Result<DMatrix<f64>> {
        self.tensor_over(qubits, |q| self.mitigation_matrix_single(q))
    }

    fn tensor_over<F>(&self, qubits: &[usize], single: F) -> Result<DMatrix<f64>>
    where
        F: Fn(usize) -> Result<Matrix2<f64>>,
    {
        if qubits.len() > DENSE_MATRIX_QUBIT_CAP {
            return Err(Error::SizeGuard {
                what: "dense assignment matrix",
                limit: DENSE_MATRIX_QUBIT_CAP,
                requested: qubits.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for &q in qubits {
            if !seen.insert(q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        let mut acc = DMatrix::<f64>::identity(1, 1);
        for &q in qubits {
            // New factor becomes the most significant bit, so qubits[0]
            // stays at the least significant position.
            acc = single(q)?.kronecker(&acc);
        }
        Ok(acc)
    }
}

/// Parse a SPAM model from text: either per-qubit records
/// `qubit, delta0, delta1, q` (one per line, qubits 0..n-1 each exactly once)
/// or the uniform shorthand `uniform: delta0 delta1 q n`. `#` starts a
/// comment.
pub fn parse_spam_model(text: &str) -> Result<SpamModel> {
    let mut records: Vec<(usize, QubitRates)> = Vec::new();
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
        if let Some(rest) = line.strip_prefix("uniform:") {
            let vals = parse_floats(rest, line_no)?;
            if vals.len() != 4 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "uniform shorthand needs 'delta0 delta1 q n'".into(),
                });
            }
            let n = vals[3] as usize;
            if n == 0 || (vals[3] - n as f64).abs() > 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("invalid qubit count {}", vals[3]),
                });
            }
            if !records.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "uniform shorthand cannot be mixed with per-qubit records".into(),
                });
            }
            return SpamModel::uniform(n, vals[0], vals[1], vals[2]);
        }
        let vals = parse_floats(line, line_no)?;
        if vals.len() != 4 {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected 'qubit, delta0, delta1, q'".into(),
            });
        }
        records.push((
            vals[0] as usize,
            QubitRates {
                delta0: vals[1],
                delta1: vals[2],
                q: vals[3],
            },
        ));
    }
    if records.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no SPAM records found".into(),
        });
    }
    records.sort_by_key(|(q, _)| *q);
    let n = records.len();
    let mut rates = Vec::with_capacity(n);
    for (expect, (qubit, r)) in records.into_iter().enumerate() {
        if qubit != expect {
            return Err(Error::Parse {
                line: 0,
                msg: format!("qubit records must cover 0..{} exactly once", n - 1),
            });
        }
        rates.push(r);
    }
    SpamModel::new(rates)
}

fn parse_floats(s: &str, line_no: usize) -> Result<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("unparseable number '{t}'"),
            })
        })
        .collect()
}

/// An outcome distribution over `2^k` bitstrings. Entries of a freshly
/// constructed vector are non-negative and sum to one; mitigated vectors may
/// carry negative quasi-probability entries, which are flagged rather than
/// clipped.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    values: Vec<f64>,
    quasi: bool,
}

impl ProbabilityVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(Error::InvalidProbability(format!(
                "length {} is not a power of two",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidProbability(format!("negative entry {v}")));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbability(format!("entries sum to {sum}")));
        }
        Ok(Self {
            values,
            quasi: false,
        })
    }

    /// Accept a possibly-negative quasi-probability vector (still normalized).
    pub fn quasi(values: Vec<f64>) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(Error::InvalidProbability(format!(
                "length {} is not a power of two",
                values.len()
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbability(format!("entries sum to {sum}")));
        }
        let quasi = values.iter().any(|v| *v < 0.0);
        Ok(Self { values, quasi })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True iff any entry is negative (possible only after mitigation).
    pub fn is_quasi(&self) -> bool {
        self.quasi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Expectation of the all-qubit parity `Z⊗...⊗Z`.
    pub fn parity_expectation(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, p)| if i.count_ones() % 2 == 0 { *p } else { -*p })
            .sum()
    }
}

/// Apply the conventional mitigation step: solve `calibration · x = p`.
///
/// The result is the raw linear correction; negative entries are preserved
/// and flagged as quasi-probabilities, never clipped or renormalized.
pub fn conventional_qrem(
    p: &ProbabilityVector,
    calibration: &DMatrix<f64>,
) -> Result<ProbabilityVector> {
    if calibration.nrows() != p.len() || calibration.ncols() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            actual: calibration.nrows(),
        });
    }
    let rhs = nalgebra::DVector::from_column_slice(p.values());
    let solved = calibration
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularMatrix)?;
    ProbabilityVector::quasi(solved.iter().copied().collect())
}

/// Mitigated single-qubit Z expectation: `raw / (1 - 2q)`.
pub fn qrem_z_expectation(raw_z: f64, q: f64) -> Result<f64> {
    check_rate(q)?;
    Ok(raw_z / (1.0 - 2.0 * q))
}

/// Magnification applied by contaminated mitigation to an observable
/// supported on the given qubits: `prod_i (1 - 2 q_i)^-1`.
pub fn qrem_bias_factor(q_per_qubit: &[f64]) -> Result<f64> {
    let mut f = 1.0;
    for &q in q_per_qubit {
        check_rate(q)?;
        f /= 1.0 - 2.0 * q;
    }
    Ok(f)
}

/// Relative observable error `Delta = (1-2q)^-n - 1` induced by contaminated
/// mitigation in the worst (full-support) case.
pub fn safety_bound_delta(n_qubits: usize, q: f64) -> Result<f64> {
    check_rate(q)?;
    Ok((1.0 - 2.0 * q).powi(-(n_qubits as i32)) - 1.0)
}

/// First-order estimate `Delta ~ 2 sum_i q_i` of the relative error.
pub fn first_order_delta(q_per_qubit: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &q in q_per_qubit {
        check_rate(q)?;
        sum += q;
    }
    Ok(2.0 * sum)
}

/// Qubit count `n*` at which `Delta(n, q)` reaches the bound `b`:
/// solves `(1-2q)^-n - 1 = b`.
pub fn bound_contour_n(bound: f64, q: f64) -> Result<f64> {
    check_rate(q)?;
    if q == 0.0 {
        return Err(Error::InvalidRate(q));
    }
    if bound <= 0.0 {
        return Err(Error::InvalidConfig(format!("bound level {bound} must be positive")));
    }
    Ok((1.0 + bound).ln() / -(1.0 - 2.0 * q).ln())
}
