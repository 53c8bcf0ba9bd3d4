//! Pauli-string algebra, Pauli-sum operators, and the Jordan-Wigner
//! transformation of fermionic excitation operators.
//!
//! A [`PauliString`] is stored in binary symplectic form: one bit mask for the
//! X component, one for the Z component, plus a fourth-root-of-unity phase.
//! Qubit `i` carries I/X/Z/Y according to the bit pair `(x_i, z_i)` =
//! (0,0)/(1,0)/(0,1)/(1,1). Qubit 0 is the least significant bit of basis
//! state indices everywhere in this crate, and the leftmost character of a
//! string literal such as `"XYZ"` refers to qubit 0.
//!
//! The phase convention is fixed as `X·Z = -i·Y`, tested exhaustively against
//! dense 2x2 matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum number of qubits representable by the bit-mask layout.
pub const MAX_QUBITS: usize = 128;

/// Merge tolerance below which a Pauli-sum coefficient is dropped.
const COEFF_TOL: f64 = 1e-12;

/// A unit phase attached to a Pauli string: one of `{+1, +i, -1, -i}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    /// Phase as `i^k` for `k` in `0..4`.
    pub fn from_exponent(k: u8) -> Self {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    /// Exponent `k` such that the phase equals `i^k`.
    pub fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn as_complex(self) -> Complex64 {
        match self {
            Phase::PlusOne => Complex64::new(1.0, 0.0),
            Phase::PlusI => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// True for `+1` and `-1`.
    pub fn is_real(self) -> bool {
        matches!(self, Phase::PlusOne | Phase::MinusOne)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::PlusOne => write!(f, "+"),
            Phase::PlusI => write!(f, "+i"),
            Phase::MinusOne => write!(f, "-"),
            Phase::MinusI => write!(f, "-i"),
        }
    }
}

/// Single-qubit Pauli letter.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliOp::I),
            'X' => Some(PauliOp::X),
            'Y' => Some(PauliOp::Y),
            'Z' => Some(PauliOp::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            PauliOp::I => (false, false),
            PauliOp::X => (true, false),
            PauliOp::Z => (false, true),
            PauliOp::Y => (true, true),
        }
    }
}

/// An n-qubit Pauli operator in symplectic (x bits, z bits, phase) form.
///
/// Internally the operator is kept in the canonical order
/// `i^k · prod_q X_q^(x_q) · prod_q Z_q^(z_q)`; the exponent `k` absorbs the
/// `i` factor of every Y letter so that multiplication reduces to XORs plus a
/// popcount. The user-facing [`phase`](Self::phase) is always relative to the
/// literal letters, e.g. `PauliString::from_str("Y")` has phase `+1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_bits: u128,
    z_bits: u128,
    /// Exponent of i in the canonical form.
    phase_exp: u8,
}

impl PauliString {
    /// The identity operator on `n` qubits.
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self {
            n_qubits,
            x_bits: 0,
            z_bits: 0,
            phase_exp: 0,
        })
    }

    /// Build from bit masks with literal phase `+1`.
    pub fn from_symplectic(n_qubits: usize, x_bits: u128, z_bits: u128) -> Result<Self> {
        check_width(n_qubits)?;
        let mask = width_mask(n_qubits);
        if x_bits & !mask != 0 || z_bits & !mask != 0 {
            return Err(Error::QubitOutOfRange {
                index: 127 - (x_bits | z_bits).leading_zeros() as usize,
                n_qubits,
            });
        }
        let n_y = (x_bits & z_bits).count_ones() as u8;
        Ok(Self {
            n_qubits,
            x_bits,
            z_bits,
            phase_exp: n_y % 4,
        })
    }

    /// A single Pauli letter on one qubit, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, op: PauliOp) -> Result<Self> {
        check_width(n_qubits)?;
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits,
            });
        }
        let (x, z) = op.bits();
        Self::from_symplectic(
            n_qubits,
            (x as u128) << qubit,
            (z as u128) << qubit,
        )
    }

    pub fn x(n_qubits: usize, qubit: usize) -> Result<Self> {
        Self::single(n_qubits, qubit, PauliOp::X)
    }

    pub fn y(n_qubits: usize, qubit: usize) -> Result<Self> {
        Self::single(n_qubits, qubit, PauliOp::Y)
    }

    pub fn z(n_qubits: usize, qubit: usize) -> Result<Self> {
        Self::single(n_qubits, qubit, PauliOp::Z)
    }

    /// Replace the literal phase.
    pub fn with_phase(mut self, phase: Phase) -> Self {
        let n_y = (self.x_bits & self.z_bits).count_ones() as u8;
        self.phase_exp = (phase.exponent() + n_y) % 4;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_bits(&self) -> u128 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u128 {
        self.z_bits
    }

    /// Phase relative to the literal Pauli letters.
    pub fn phase(&self) -> Phase {
        let n_y = (self.x_bits & self.z_bits).count_ones() as u8;
        Phase::from_exponent((self.phase_exp + 4 - n_y % 4) % 4)
    }

    /// Letter on one qubit.
    pub fn letter(&self, qubit: usize) -> PauliOp {
        let x = (self.x_bits >> qubit) & 1 == 1;
        let z = (self.z_bits >> qubit) & 1 == 1;
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (false, true) => PauliOp::Z,
            (true, true) => PauliOp::Y,
        }
    }

    /// Bit mask of qubits carrying a non-identity letter.
    pub fn support_mask(&self) -> u128 {
        self.x_bits | self.z_bits
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        bits_of(self.support_mask())
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    /// True iff the operator is the identity with phase `+1`.
    pub fn is_identity(&self) -> bool {
        self.support_mask() == 0 && self.phase_exp == 0
    }

    /// Product `self · rhs` with exact phase accumulation.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.n_qubits != rhs.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: rhs.n_qubits,
            });
        }
        // Z^z1 X^x2 = (-1)^(z1 & x2) X^x2 Z^z1
        let swaps = (self.z_bits & rhs.x_bits).count_ones() as u8;
        Ok(Self {
            n_qubits: self.n_qubits,
            x_bits: self.x_bits ^ rhs.x_bits,
            z_bits: self.z_bits ^ rhs.z_bits,
            phase_exp: (self.phase_exp + rhs.phase_exp + 2 * (swaps % 2)) % 4,
        })
    }

    /// True iff `[self, rhs] = 0`, via the binary symplectic product.
    pub fn commutes_with(&self, rhs: &Self) -> Result<bool> {
        if self.n_qubits != rhs.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: rhs.n_qubits,
            });
        }
        let sym = (self.x_bits & rhs.z_bits).count_ones()
            + (self.z_bits & rhs.x_bits).count_ones();
        Ok(sym % 2 == 0)
    }

    /// Hermitian adjoint (conjugates the phase, letters unchanged).
    pub fn adjoint(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            x_bits: self.x_bits,
            z_bits: self.z_bits,
            phase_exp: (4 - self.phase_exp) % 4,
        }
    }

    /// Dense `2^n x 2^n` matrix of the operator (n capped at 12).
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > 12 {
            return Err(Error::SizeGuard {
                what: "dense Pauli matrix",
                limit: 12,
                requested: self.n_qubits,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let ik = Phase::from_exponent(self.phase_exp).as_complex();
        let x = self.x_bits as usize;
        for col in 0..dim {
            let sign = if ((self.z_bits as usize & col).count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[(col ^ x, col)] = ik * sign;
        }
        Ok(m)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = self.phase();
        match phase {
            Phase::PlusOne => {}
            Phase::MinusOne => write!(f, "-")?,
            Phase::PlusI => write!(f, "i")?,
            Phase::MinusI => write!(f, "-i")?,
        }
        for q in 0..self.n_qubits {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[phase]LETTERS` where phase is one of `+ - i -i +i` and the
    /// leftmost letter acts on qubit 0.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("-i") {
            (Phase::MinusI, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (Phase::PlusI, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (Phase::PlusI, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MinusOne, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::PlusOne, r)
        } else {
            (Phase::PlusOne, s)
        };
        if rest.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "empty Pauli string".into(),
            });
        }
        let mut x = 0u128;
        let mut z = 0u128;
        for (q, c) in rest.chars().enumerate() {
            if q >= MAX_QUBITS {
                return Err(Error::SizeGuard {
                    what: "Pauli string",
                    limit: MAX_QUBITS,
                    requested: rest.chars().count(),
                });
            }
            let op = PauliOp::from_char(c).ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("invalid Pauli character '{c}'"),
            })?;
            let (xb, zb) = op.bits();
            x |= (xb as u128) << q;
            z |= (zb as u128) << q;
        }
        Ok(PauliString::from_symplectic(rest.chars().count(), x, z)?.with_phase(phase))
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::SizeGuard {
            what: "Pauli string",
            limit: MAX_QUBITS,
            requested: n_qubits,
        });
    }
    Ok(())
}

fn width_mask(n_qubits: usize) -> u128 {
    if n_qubits == 128 {
        u128::MAX
    } else {
        (1u128 << n_qubits) - 1
    }
}

/// Indices of set bits, ascending.
pub(crate) fn bits_of(mut mask: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let b = mask.trailing_zeros() as usize;
        out.push(b);
        mask &= mask - 1;
    }
    out
}

/// A real-coefficient linear combination of Pauli strings.
///
/// Terms are canonicalized on construction: duplicates (same bit masks) are
/// merged, coefficients below 1e-12 are dropped, and each surviving term is
/// stored as a signed real coefficient times a string whose phase is `+1`
/// (Hermitian component) or `+i` (anti-Hermitian component, as produced by
/// the Jordan-Wigner transformation of `T - T†`). Terms are sorted by bit
/// masks, so equal operators compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSumOperator {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSumOperator {
    pub fn new(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let complex = terms
            .into_iter()
            .map(|(c, p)| (Complex64::new(c, 0.0), p))
            .collect();
        Self::from_complex_terms(n_qubits, complex)
    }

    /// Build from complex-weighted strings; the weights must come out purely
    /// real or purely imaginary per merged term.
    pub(crate) fn from_complex_terms(
        n_qubits: usize,
        terms: Vec<(Complex64, PauliString)>,
    ) -> Result<Self> {
        check_width(n_qubits)?;
        let mut acc: BTreeMap<(u128, u128), Complex64> = BTreeMap::new();
        for (c, p) in terms {
            if p.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    actual: p.n_qubits(),
                });
            }
            *acc.entry((p.x_bits(), p.z_bits())).or_insert(Complex64::new(0.0, 0.0)) +=
                c * p.phase().as_complex();
        }
        let mut out = Vec::new();
        for ((x, z), amp) in acc {
            if amp.norm() <= COEFF_TOL {
                continue;
            }
            let plain = PauliString::from_symplectic(n_qubits, x, z)?;
            if amp.im.abs() <= COEFF_TOL {
                out.push((amp.re, plain));
            } else if amp.re.abs() <= COEFF_TOL {
                out.push((amp.im, plain.with_phase(Phase::PlusI)));
            } else {
                return Err(Error::NonHermitian(format!(
                    "term {plain} has complex coefficient {amp}"
                )));
            }
        }
        Ok(Self {
            n_qubits,
            terms: out,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every term is a real multiple of a Hermitian string.
    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.phase().is_real())
    }

    /// Dense matrix of the operator.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (c, p) in &self.terms {
            m += p.to_dense()? * Complex64::new(*c, 0.0);
        }
        Ok(m)
    }

    /// Serialize in the one-term-per-line text format. Only defined for
    /// Hermitian operators (real coefficients over plain letters).
    pub fn to_text(&self) -> Result<String> {
        let mut out = String::new();
        for (c, p) in &self.terms {
            let sign = match p.phase() {
                Phase::PlusOne => 1.0,
                Phase::MinusOne => -1.0,
                _ => {
                    return Err(Error::NonHermitian(
                        "text format holds Hermitian operators only".into(),
                    ))
                }
            };
            let mut letters = String::with_capacity(self.n_qubits);
            for q in 0..self.n_qubits {
                letters.push(p.letter(q).as_char());
            }
            out.push_str(&format!("{} {}\n", sign * c, letters));
        }
        Ok(out)
    }
}

/// Parse the Pauli-sum text format: one `<coefficient> <string>` per line,
/// strings over `{I,X,Y,Z}` with the leftmost character on qubit 0, `#`
/// starting a comment, blank lines ignored. Duplicate terms are merged.
pub fn parse_pauli_sum(text: &str) -> Result<PauliSumOperator> {
    let mut n_qubits: Option<usize> = None;
    let mut terms: Vec<(f64, PauliString)> = Vec::new();
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
        let coeff_txt = parts.next().unwrap();
        let string_txt = parts.next().ok_or_else(|| Error::Parse {
            line: line_no,
            msg: "expected '<coefficient> <string>'".into(),
        })?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing tokens after Pauli string".into(),
            });
        }
        let coeff: f64 = coeff_txt.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("unparseable coefficient '{coeff_txt}'"),
        })?;
        let width = string_txt.chars().count();
        match n_qubits {
            None => n_qubits = Some(width),
            Some(n) if n != width => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("string length {width} does not match first term ({n})"),
                })
            }
            _ => {}
        }
        let string: PauliString = string_txt.parse().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: line_no, msg },
            other => other,
        })?;
        if !string.phase().is_real() {
            return Err(Error::Parse {
                line: line_no,
                msg: "phase prefixes are not allowed in operator files".into(),
            });
        }
        terms.push((coeff, string));
    }
    let n = n_qubits.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "no terms found".into(),
    })?;
    PauliSumOperator::new(n, terms)
}

impl FromStr for PauliSumOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pauli_sum(s)
    }
}

/// A single or double fermionic excitation, with the index of the variational
/// parameter that drives it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FermionExcitation {
    /// `a†_p a_q` with `p != q`.
    Single { p: usize, q: usize, slot: usize },
    /// `a†_p a†_q a_r a_s` with `p > q`, `r > s`, all four indices distinct.
    Double {
        p: usize,
        q: usize,
        r: usize,
        s: usize,
        slot: usize,
    },
}

impl FermionExcitation {
    pub fn slot(&self) -> usize {
        match self {
            FermionExcitation::Single { slot, .. } => *slot,
            FermionExcitation::Double { slot, .. } => *slot,
        }
    }

    pub fn max_orbital(&self) -> usize {
        match self {
            FermionExcitation::Single { p, q, .. } => (*p).max(*q),
            FermionExcitation::Double { p, q, r, s, .. } => (*p).max(*q).max(*r).max(*s),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FermionExcitation::Single { p, q, .. } => {
                if p == q {
                    return Err(Error::InvalidExcitation(format!(
                        "single excitation requires p != q, got ({p},{q})"
                    )));
                }
            }
            FermionExcitation::Double { p, q, r, s, .. } => {
                if p <= q || r <= s {
                    return Err(Error::InvalidExcitation(format!(
                        "double excitation requires p > q and r > s, got ({p},{q},{r},{s})"
                    )));
                }
                let mut idx = [p, q, r, s];
                idx.sort_unstable();
                if idx.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidExcitation(format!(
                        "double excitation requires four distinct orbitals, got ({p},{q},{r},{s})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Jordan-Wigner image of the anti-Hermitian generator `T - T†` of an
/// excitation, so that `exp(theta * result)` is unitary.
///
/// The mapping uses the ascending convention: mode `j` maps to
/// `(X_j ∓ iY_j)/2` dressed with `Z` on every qubit strictly below `j`.
/// Every term of the output carries a real coefficient and a `+i` phase;
/// coefficients have magnitude 1/2 for singles and 1/8 for doubles.
pub fn jordan_wigner_excitation(
    exc: &FermionExcitation,
    n_qubits: usize,
) -> Result<PauliSumOperator> {
    check_width(n_qubits)?;
    exc.validate()?;
    if exc.max_orbital() >= n_qubits {
        return Err(Error::QubitOutOfRange {
            index: exc.max_orbital(),
            n_qubits,
        });
    }

    let modes: Vec<(usize, bool)> = match *exc {
        FermionExcitation::Single { p, q, .. } => vec![(p, true), (q, false)],
        FermionExcitation::Double { p, q, r, s, .. } => {
            vec![(p, true), (q, true), (r, false), (s, false)]
        }
    };

    let forward = ladder_product(&modes, n_qubits)?;
    // T† reverses the factor order and flips creation/annihilation.
    let reversed: Vec<(usize, bool)> =
        modes.iter().rev().map(|&(m, dag)| (m, !dag)).collect();
    let backward = ladder_product(&reversed, n_qubits)?;

    let mut terms = forward;
    terms.extend(backward.into_iter().map(|(c, p)| (-c, p)));
    PauliSumOperator::from_complex_terms(n_qubits, terms)
}

/// Expand an ordered product of ladder operators into complex-weighted
/// Pauli strings.
fn ladder_product(
    modes: &[(usize, bool)],
    n_qubits: usize,
) -> Result<Vec<(Complex64, PauliString)>> {
    let mut acc: Vec<(Complex64, PauliString)> =
        vec![(Complex64::new(1.0, 0.0), PauliString::identity(n_qubits)?)];
    for &(mode, dagger) in modes {
        let parity = (1u128 << mode) - 1;
        let x_part = PauliString::from_symplectic(n_qubits, 1u128 << mode, parity)?;
        let y_part =
            PauliString::from_symplectic(n_qubits, 1u128 << mode, parity | (1u128 << mode))?;
        // a† = (X - iY)/2 · Z-string, a = (X + iY)/2 · Z-string
        let y_coeff = Complex64::new(0.0, if dagger { -0.5 } else { 0.5 });
        let x_coeff = Complex64::new(0.5, 0.0);
        let mut next = Vec::with_capacity(acc.len() * 2);
        for (c, p) in &acc {
            next.push((c * x_coeff, p.multiply(&x_part)?));
            next.push((c * y_coeff, p.multiply(&y_part)?));
        }
        acc = next;
    }
    Ok(acc)
}
