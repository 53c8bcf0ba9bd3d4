//! Fake-fidelity evaluation for Clifford-prepared entangled states.
//!
//! An initialization-error pattern `a` contributes the Pauli `Z^a` with
//! weight `lambda_a = prod_{i in a} (1 - 2 q_i)` to the prepared state.
//! Pushing `Z^a` through the preparation circuit yields a stabilizer-group
//! element `A'(a)`, and the mitigated fidelity estimate averages to
//!
//! ```text
//! F = 2^-n * sum_a lambda_a / lambda_supp(A'(a))
//! ```
//!
//! which exceeds one whenever the circuit inflates pattern weights. Four
//! evaluation routes are provided: exact enumeration over all `2^n`
//! patterns (n <= 24), uniform random sampling of patterns (n <= 128),
//! O(n^2) dynamic programs for the linear cluster and linear GHZ states at
//! uniform `q`, and a closed form for the fully connected graph state.
//! Enumeration is chunked with a fixed pairwise reduction order, so results
//! are bit-stable regardless of worker count.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::clifford::{conjugate_pauli, CliffordCircuit};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Exact enumeration guard; no performance promise past 22 qubits.
pub const ENUMERATION_QUBIT_CAP: usize = 24;

/// Patterns per enumeration chunk. Fixed so the reduction tree, and hence
/// the floating-point result, is independent of thread count.
const CHUNK: usize = 1 << 12;

/// How a fidelity value was produced.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FidelityMethod {
    ExactEnumeration,
    Sampled,
    DpLinearCluster,
    DpLinearGhz,
    ClosedFormFullGraph,
}

impl fmt::Display for FidelityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FidelityMethod::ExactEnumeration => "exact-enumeration",
            FidelityMethod::Sampled => "sampled",
            FidelityMethod::DpLinearCluster => "dp-linear-cluster",
            FidelityMethod::DpLinearGhz => "dp-linear-ghz",
            FidelityMethod::ClosedFormFullGraph => "closed-form-full-graph",
        };
        write!(f, "{s}")
    }
}

/// A fidelity value with its statistical error and provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct FidelityEstimate {
    pub value: f64,
    /// Zero for exact methods.
    pub std_error: f64,
    pub method: FidelityMethod,
    pub n_qubits: usize,
    /// Initialization rates used, one per qubit.
    pub q: Vec<f64>,
    /// Sampling seed, when the method is statistical.
    pub seed: Option<u64>,
}

fn check_rates(q_per_qubit: &[f64], n_qubits: usize) -> Result<()> {
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
    Ok(())
}

/// Stabilizer-group generator images `U Z_i U†`, as bit-mask pairs.
fn propagated_generators(circuit: &CliffordCircuit) -> Result<Vec<(u128, u128)>> {
    (0..circuit.n_qubits())
        .map(|i| {
            let z = PauliString::z(circuit.n_qubits(), i)?;
            let img = conjugate_pauli(circuit, &z)?;
            Ok((img.x_bits(), img.z_bits()))
        })
        .collect()
}

fn product_over_bits(mut mask: u128, factors: &[f64]) -> f64 {
    let mut p = 1.0;
    while mask != 0 {
        let b = mask.trailing_zeros() as usize;
        p *= factors[b];
        mask &= mask - 1;
    }
    p
}

/// Pairwise tree sum in fixed order.
fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

/// Fake fidelity by exact enumeration of all `2^n` error patterns.
pub fn exact_fake_fidelity(
    circuit: &CliffordCircuit,
    q_per_qubit: &[f64],
) -> Result<FidelityEstimate> {
    let n = circuit.n_qubits();
    if n > ENUMERATION_QUBIT_CAP {
        return Err(Error::SizeGuard {
            what: "pattern enumeration",
            limit: ENUMERATION_QUBIT_CAP,
            requested: n,
        });
    }
    check_rates(q_per_qubit, n)?;
    let factors: Vec<f64> = q_per_qubit.iter().map(|q| 1.0 - 2.0 * q).collect();
    let gens = propagated_generators(circuit)?;

    let total = 1u64 << n;
    let n_chunks = ((total as usize) + CHUNK - 1) / CHUNK;
    let partials: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = (chunk * CHUNK) as u64;
            let end = total.min(start + CHUNK as u64);
            // Walk patterns in Gray-code order so consecutive steps toggle
            // one generator in the running product.
            let first = start ^ (start >> 1);
            let (mut px, mut pz) = (0u128, 0u128);
            let mut bits = first;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                px ^= gens[b].0;
                pz ^= gens[b].1;
                bits &= bits - 1;
            }
            let mut pattern = first;
            let mut sum = 0.0;
            for j in start..end {
                if j != start {
                    let toggle = j.trailing_zeros() as usize;
                    px ^= gens[toggle].0;
                    pz ^= gens[toggle].1;
                    pattern ^= 1 << toggle;
                }
                let lambda_pattern = product_over_bits(pattern as u128, &factors);
                let lambda_support = product_over_bits(px | pz, &factors);
                sum += lambda_pattern / lambda_support;
            }
            sum
        })
        .collect();

    Ok(FidelityEstimate {
        value: tree_sum(&partials) / total as f64,
        std_error: 0.0,
        method: FidelityMethod::ExactEnumeration,
        n_qubits: n,
        q: q_per_qubit.to_vec(),
        seed: None,
    })
}

/// Fake fidelity by uniform sampling of `m` error patterns with a
/// deterministic seeded generator.
pub fn sampled_fake_fidelity(
    circuit: &CliffordCircuit,
    q_per_qubit: &[f64],
    m: usize,
    seed: u64,
) -> Result<FidelityEstimate> {
    let n = circuit.n_qubits();
    if m == 0 {
        return Err(Error::InvalidConfig("sample count must be at least 1".into()));
    }
    check_rates(q_per_qubit, n)?;
    let factors: Vec<f64> = q_per_qubit.iter().map(|q| 1.0 - 2.0 * q).collect();
    let gens = propagated_generators(circuit)?;
    let mask = if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    };

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for j in 0..m {
        let pattern = rng.gen::<u128>() & mask;
        let (mut px, mut pz) = (0u128, 0u128);
        let mut bits = pattern;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            px ^= gens[b].0;
            pz ^= gens[b].1;
            bits &= bits - 1;
        }
        let ratio = product_over_bits(pattern, &factors) / product_over_bits(px | pz, &factors);
        let delta = ratio - mean;
        mean += delta / (j + 1) as f64;
        m2 += delta * (ratio - mean);
    }
    let std_error = if m > 1 {
        (m2 / (m - 1) as f64 / m as f64).sqrt()
    } else {
        0.0
    };

    Ok(FidelityEstimate {
        value: mean,
        std_error,
        method: FidelityMethod::Sampled,
        n_qubits: n,
        q: q_per_qubit.to_vec(),
        seed: Some(seed),
    })
}

/// Un-mitigated expectation of a product of `m_g` distinct stabilizer
/// generators under uniform initialization error: `(1 - 2q)^m_g`.
pub fn noisy_generator_expectation(m_g: usize, q: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&q) {
        return Err(Error::InvalidRate(q));
    }
    Ok((1.0 - 2.0 * q).powi(m_g as i32))
}

/// Transition table of a per-qubit dynamic program: for each state, the two
/// equally likely successors and the power-difference increment each incurs.
type DpTransitions<const S: usize> = [[(usize, i32); 2]; S];

/// Mass table indexed by `[state][t + n]` for `t` clamped to `[-n, n]`.
struct DpTable<const S: usize> {
    n: usize,
    mass: Vec<Vec<f64>>,
}

impl<const S: usize> DpTable<S> {
    fn seeded(n: usize, seeds: &[(usize, f64)]) -> Self {
        let mut mass = vec![vec![0.0; 2 * n + 1]; S];
        for &(state, value) in seeds {
            mass[state][n] = value;
        }
        Self { n, mass }
    }

    fn step(&mut self, transitions: &DpTransitions<S>) {
        let width = 2 * self.n + 1;
        let mut next = vec![vec![0.0; width]; S];
        for s in 0..S {
            for t_idx in 0..width {
                let m = self.mass[s][t_idx];
                if m == 0.0 {
                    continue;
                }
                for &(s_next, dt) in &transitions[s] {
                    let idx = t_idx as i64 + dt as i64;
                    // Out-of-range power differences carry no mass.
                    if idx >= 0 && (idx as usize) < width {
                        next[s_next][idx as usize] += 0.5 * m;
                    }
                }
            }
        }
        self.mass = next;
    }

    /// `F = sum_{s,t} x^{-t} mass[s][t]` with `x = 1 - 2q`.
    fn fidelity(&self, q: f64) -> f64 {
        let x = 1.0 - 2.0 * q;
        let mut total = 0.0;
        for s in 0..S {
            for t_idx in 0..2 * self.n + 1 {
                let m = self.mass[s][t_idx];
                if m != 0.0 {
                    let t = t_idx as i32 - self.n as i32;
                    total += m * x.powi(-t);
                }
            }
        }
        total
    }
}

fn check_dp_args(n: usize, q: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "dynamic program defined for n >= 2, got {n}"
        )));
    }
    if !(0.0..0.5).contains(&q) {
        return Err(Error::InvalidRate(q));
    }
    Ok(())
}

/// Four-state recurrence for the 1D (linear cluster) graph state at uniform
/// `q`. State `s = 2*prev + cur` tracks whether the previous and current
/// qubits are part of the error pattern; the power difference `t` counts
/// support growth over pattern size. O(n^2) time.
pub fn dp_linear_cluster(n: usize, q: f64) -> Result<FidelityEstimate> {
    check_dp_args(n, q)?;
    const TRANSITIONS: DpTransitions<4> = [
        [(0, 0), (1, 1)],
        [(2, 1), (3, 0)],
        [(0, 0), (1, -1)],
        [(2, 1), (3, 0)],
    ];
    let mut table = DpTable::<4>::seeded(n, &[(0, 0.5), (1, 0.5)]);
    for _ in 0..n - 1 {
        table.step(&TRANSITIONS);
    }
    Ok(FidelityEstimate {
        value: table.fidelity(q),
        std_error: 0.0,
        method: FidelityMethod::DpLinearCluster,
        n_qubits: n,
        q: vec![q; n],
        seed: None,
    })
}

/// Three-state recurrence for the linear-chain GHZ preparation at uniform
/// `q`. States 0/1 follow patterns that exclude qubit 0, state 2 compresses
/// every pattern containing it. O(n^2) time.
pub fn dp_linear_ghz(n: usize, q: f64) -> Result<FidelityEstimate> {
    check_dp_args(n, q)?;
    const TRANSITIONS: DpTransitions<3> = [
        [(0, 0), (1, 1)],
        [(0, 0), (1, -1)],
        [(2, 0), (2, 1)],
    ];
    let mut table = DpTable::<3>::seeded(n, &[(0, 0.5), (2, 0.5)]);
    for _ in 0..n - 1 {
        table.step(&TRANSITIONS);
    }
    Ok(FidelityEstimate {
        value: table.fidelity(q),
        std_error: 0.0,
        method: FidelityMethod::DpLinearGhz,
        n_qubits: n,
        q: vec![q; n],
        seed: None,
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Closed form for the fully connected graph state at uniform `q`:
/// even-size patterns keep their weight, odd-size patterns inflate to full
/// support, giving a binomial mass over the power difference.
pub fn closed_form_full_graph(n: usize, q: f64) -> Result<FidelityEstimate> {
    check_dp_args(n, q)?;
    let x = 1.0 - 2.0 * q;
    let scale = 0.5f64.powi(n as i32 + 1);
    let mut value = 0.0;
    for t in 0..n {
        let parity = if (n - t) % 2 == 1 { 2.0 } else { 0.0 };
        let mut d = parity * scale * binomial(n, t);
        if t == 0 {
            d += 0.5;
        }
        if d != 0.0 {
            value += d * x.powi(-(t as i32));
        }
    }
    Ok(FidelityEstimate {
        value,
        std_error: 0.0,
        method: FidelityMethod::ClosedFormFullGraph,
        n_qubits: n,
        q: vec![q; n],
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{ghz_circuit, graph_state_circuit, GhzVariant, GraphSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn path_circuit(n: usize) -> CliffordCircuit {
        graph_state_circuit(&GraphSpec::path(n).unwrap())
    }

    #[test]
    fn zero_rates_give_unit_fidelity() {
        let c = path_circuit(5);
        let est = exact_fake_fidelity(&c, &[0.0; 5]).unwrap();
        assert!(close(est.value, 1.0, 1e-15));

        let est = sampled_fake_fidelity(&c, &[0.0; 5], 200, 1).unwrap();
        assert!(close(est.value, 1.0, 1e-15));
        assert!(close(est.std_error, 0.0, 1e-15));

        assert!(close(dp_linear_cluster(7, 0.0).unwrap().value, 1.0, 1e-15));
        assert!(close(dp_linear_ghz(7, 0.0).unwrap().value, 1.0, 1e-15));
        assert!(close(closed_form_full_graph(7, 0.0).unwrap().value, 1.0, 1e-15));
    }

    #[test]
    fn two_qubit_path_has_closed_form() {
        // Hand enumeration over the four stabilizers gives
        // F = (2 + 2/(1-2q)) / 4.
        let q = 0.01;
        let est = exact_fake_fidelity(&path_circuit(2), &[q; 2]).unwrap();
        let expected = 0.25 * (2.0 + 2.0 / (1.0 - 2.0 * q));
        assert!(close(est.value, expected, 1e-14));
        assert!(close(est.value, 1.0102040816326531, 1e-12));
    }

    #[test]
    fn enumeration_monotone_in_qubit_count_for_path_graph() {
        let q = 0.01;
        let mut prev = 1.0;
        for n in 2..=20 {
            let est = exact_fake_fidelity(&path_circuit(n), &vec![q; n]).unwrap();
            assert!(est.value > prev, "n={n}");
            prev = est.value;
        }
    }

    #[test]
    fn enumeration_beats_one_for_any_circuit() {
        // Random Clifford preparations keep the mitigated estimate >= 1.
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        use crate::clifford::CliffordGate;
        for n in 2..=5 {
            for _ in 0..10 {
                let mut c = CliffordCircuit::new(n);
                for _ in 0..12 {
                    match rng.gen_range(0..3) {
                        0 => c.push(CliffordGate::H(rng.gen_range(0..n))).unwrap(),
                        1 => {
                            let a = rng.gen_range(0..n);
                            let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
                            c.push(CliffordGate::Cz(a, b)).unwrap();
                        }
                        _ => {
                            let a = rng.gen_range(0..n);
                            let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
                            c.push(CliffordGate::Cnot(a, b)).unwrap();
                        }
                    }
                }
                let q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 0.2).collect();
                let est = exact_fake_fidelity(&c, &q).unwrap();
                assert!(est.value >= 1.0 - 1e-12);
            }
        }
        // Identity circuit maps every pattern to itself: exactly one.
        let c = CliffordCircuit::new(3);
        let est = exact_fake_fidelity(&c, &[0.1, 0.2, 0.3]).unwrap();
        assert!(close(est.value, 1.0, 1e-13));
    }

    #[test]
    fn dp_cluster_matches_enumeration() {
        for q in [0.001, 0.01, 0.05] {
            for n in 2..=14 {
                let dp = dp_linear_cluster(n, q).unwrap();
                let exact = exact_fake_fidelity(&path_circuit(n), &vec![q; n]).unwrap();
                assert!(
                    close(dp.value, exact.value, 1e-10),
                    "n={n} q={q}: dp={} exact={}",
                    dp.value,
                    exact.value
                );
            }
        }
    }

    #[test]
    fn dp_ghz_matches_enumeration() {
        for q in [0.001, 0.01, 0.05] {
            for n in 2..=14 {
                let dp = dp_linear_ghz(n, q).unwrap();
                let circuit = ghz_circuit(n, GhzVariant::Linear).unwrap();
                let exact = exact_fake_fidelity(&circuit, &vec![q; n]).unwrap();
                assert!(
                    close(dp.value, exact.value, 1e-10),
                    "n={n} q={q}: dp={} exact={}",
                    dp.value,
                    exact.value
                );
            }
        }
    }

    #[test]
    fn closed_form_matches_enumeration_on_complete_graphs() {
        let q = 0.02;
        for n in 2..=12 {
            let cf = closed_form_full_graph(n, q).unwrap();
            let circuit = graph_state_circuit(&GraphSpec::complete(n).unwrap());
            let exact = exact_fake_fidelity(&circuit, &vec![q; n]).unwrap();
            assert!(
                close(cf.value, exact.value, 1e-10),
                "n={n}: closed={} exact={}",
                cf.value,
                exact.value
            );
        }
    }

    #[test]
    fn compact_ghz_differs_from_linear_ghz() {
        // The stabilizer group is the same set, but the pattern-to-element
        // pairing differs, so the inflated fidelity differs from n = 4 on.
        let q = 0.01;
        let n = 4;
        let linear = exact_fake_fidelity(&ghz_circuit(n, GhzVariant::Linear).unwrap(), &[q; 4])
            .unwrap()
            .value;
        let compact = exact_fake_fidelity(&ghz_circuit(n, GhzVariant::Compact).unwrap(), &[q; 4])
            .unwrap()
            .value;
        assert!((linear - compact).abs() > 1e-6);
        // Hand-tallied distributions for n = 4.
        let x: f64 = 1.0 - 2.0 * q;
        let linear_expected =
            (x + 4.0 + 6.0 / x + 4.0 / (x * x) + 1.0 / (x * x * x)) / 16.0;
        let compact_expected =
            (5.0 + 7.0 / x + 3.0 / (x * x) + 1.0 / (x * x * x)) / 16.0;
        assert!(close(linear, linear_expected, 1e-13));
        assert!(close(compact, compact_expected, 1e-13));
    }

    #[test]
    fn sampling_reproducible_and_consistent_with_exact() {
        let n = 10;
        let q = vec![0.01; n];
        let c = path_circuit(n);
        let a = sampled_fake_fidelity(&c, &q, 4000, 99).unwrap();
        let b = sampled_fake_fidelity(&c, &q, 4000, 99).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.seed, Some(99));

        let exact = exact_fake_fidelity(&c, &q).unwrap();
        assert!(
            (a.value - exact.value).abs() < 3.0 * a.std_error,
            "sampled {} exact {} (se {})",
            a.value,
            exact.value,
            a.std_error
        );
    }

    #[test]
    fn sampling_is_unbiased_over_many_seeds() {
        let n = 10;
        let q = vec![0.01; n];
        let c = path_circuit(n);
        let exact = exact_fake_fidelity(&c, &q).unwrap().value;
        let estimates: Vec<f64> = (0..200)
            .map(|seed| sampled_fake_fidelity(&c, &q, 100, seed).unwrap().value)
            .collect();
        let grand = estimates.iter().sum::<f64>() / estimates.len() as f64;
        let var = estimates.iter().map(|e| (e - grand).powi(2)).sum::<f64>()
            / (estimates.len() - 1) as f64;
        let se = (var / estimates.len() as f64).sqrt();
        assert!(
            (grand - exact).abs() < 4.0 * se,
            "grand mean {grand} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn sampling_handles_wide_registers() {
        let n = 100;
        let c = ghz_circuit(n, GhzVariant::Linear).unwrap();
        let est = sampled_fake_fidelity(&c, &vec![0.001; n], 2000, 7).unwrap();
        assert!(est.value > 1.0);
        assert!(est.value < 1.5);
    }

    #[test]
    fn generator_product_expectation() {
        assert!(close(noisy_generator_expectation(0, 0.3).unwrap(), 1.0, 1e-15));
        let q = 0.0123;
        assert!(close(
            noisy_generator_expectation(2, q).unwrap(),
            (1.0 - 2.0 * q) * (1.0 - 2.0 * q),
            1e-15
        ));
        assert!(close(noisy_generator_expectation(1, 0.01).unwrap(), 0.98, 1e-15));
    }

    #[test]
    fn dp_guards() {
        assert!(dp_linear_cluster(1, 0.01).is_err());
        assert!(dp_linear_ghz(1, 0.01).is_err());
        assert!(dp_linear_cluster(5, 0.5).is_err());
        let too_big = path_circuit(25);
        assert!(matches!(
            exact_fake_fidelity(&too_big, &[0.01; 25]),
            Err(Error::SizeGuard { .. })
        ));
    }
}
