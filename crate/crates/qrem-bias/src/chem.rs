//! UCCSD-style ansatz assembly, a VQE loop that runs mitigation inside every
//! iteration, and a time-evolution error benchmark.
//!
//! The reference state is the Hartree-Fock occupation `|1...10...0>`
//! prepared with exact X gates; initialization error acts before them, at
//! the very start of the circuit. Energies are evaluated as exact traces
//! (no shot noise), each Hamiltonian term passing through the mitigated
//! measurement pipeline when a SPAM model is supplied.

use crate::circuit::{append_exp_pauli, Circuit, Gate};
use crate::density::{
    apply_circuit, exact_evolution, expectation, noisy_initial_state, qrem_measure, DensityMatrix,
    DENSE_QUBIT_CAP,
};
use crate::error::{Error, Result};
use crate::optimize::{minimize, NelderMeadConfig};
use crate::pauli::{jordan_wigner_excitation, FermionExcitation, Phase, PauliSumOperator};
use crate::spam::SpamModel;

/// An ordered excitation list with Trotter repetition count for the
/// exponential of the cluster operator.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzSpec {
    n_qubits: usize,
    excitations: Vec<FermionExcitation>,
    trotter_reps: usize,
}

impl AnsatzSpec {
    /// Validates every excitation and requires the parameter slots to cover
    /// `0..P-1` contiguously (several excitations may share a slot).
    pub fn new(
        n_qubits: usize,
        excitations: Vec<FermionExcitation>,
        trotter_reps: usize,
    ) -> Result<Self> {
        if trotter_reps == 0 {
            return Err(Error::InvalidConfig("trotter_reps must be at least 1".into()));
        }
        let mut max_slot = None;
        for exc in &excitations {
            exc.validate()?;
            if exc.max_orbital() >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: exc.max_orbital(),
                    n_qubits,
                });
            }
            max_slot = Some(max_slot.map_or(exc.slot(), |m: usize| m.max(exc.slot())));
        }
        if let Some(max) = max_slot {
            let mut seen = vec![false; max + 1];
            for exc in &excitations {
                seen[exc.slot()] = true;
            }
            if !seen.iter().all(|s| *s) {
                return Err(Error::InvalidConfig(
                    "parameter slots must cover 0..P-1 contiguously".into(),
                ));
            }
        }
        Ok(Self {
            n_qubits,
            excitations,
            trotter_reps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn excitations(&self) -> &[FermionExcitation] {
        &self.excitations
    }

    pub fn trotter_reps(&self) -> usize {
        self.trotter_reps
    }

    /// Number of independent variational parameters.
    pub fn param_count(&self) -> usize {
        self.excitations
            .iter()
            .map(|e| e.slot() + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Parse an ansatz file: header `n_qubits n_electrons`, then one excitation
/// per line, `S p q` or `D p q r s`. Each line gets the next parameter slot.
pub fn parse_ansatz(text: &str) -> Result<(AnsatzSpec, usize)> {
    let mut header: Option<(usize, usize)> = None;
    let mut excitations = Vec::new();
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
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if header.is_none() {
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "header must be 'n_qubits n_electrons'".into(),
                });
            }
            let n: usize = tokens[0].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: "bad qubit count".into(),
            })?;
            let e: usize = tokens[1].parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: "bad electron count".into(),
            })?;
            header = Some((n, e));
            continue;
        }
        let slot = excitations.len();
        let parse_idx = |t: &str| -> Result<usize> {
            t.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad orbital index '{t}'"),
            })
        };
        let exc = match tokens[0] {
            "S" if tokens.len() == 3 => FermionExcitation::Single {
                p: parse_idx(tokens[1])?,
                q: parse_idx(tokens[2])?,
                slot,
            },
            "D" if tokens.len() == 5 => FermionExcitation::Double {
                p: parse_idx(tokens[1])?,
                q: parse_idx(tokens[2])?,
                r: parse_idx(tokens[3])?,
                s: parse_idx(tokens[4])?,
                slot,
            },
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected 'S p q' or 'D p q r s'".into(),
                })
            }
        };
        excitations.push(exc);
    }
    let (n_qubits, n_electrons) = header.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing ansatz header".into(),
    })?;
    if n_electrons > n_qubits {
        return Err(Error::Parse {
            line: 1,
            msg: format!("{n_electrons} electrons do not fit {n_qubits} qubits"),
        });
    }
    Ok((AnsatzSpec::new(n_qubits, excitations, 1)?, n_electrons))
}

/// Basis index of the Hartree-Fock occupation: the `n_electrons`
/// lowest-index qubits set.
pub fn hf_state(n_qubits: usize, n_electrons: usize) -> Result<usize> {
    if n_electrons > n_qubits {
        return Err(Error::InvalidConfig(format!(
            "{n_electrons} electrons do not fit {n_qubits} qubits"
        )));
    }
    Ok((1usize << n_electrons) - 1)
}

/// X gates flipping `|0...0>` into the Hartree-Fock occupation.
pub fn hf_prep_circuit(n_qubits: usize, n_electrons: usize) -> Result<Circuit> {
    hf_state(n_qubits, n_electrons)?;
    let mut c = Circuit::new(n_qubits);
    for q in 0..n_electrons {
        c.push(Gate::X(q))?;
    }
    Ok(c)
}

/// Compile the Trotterized cluster exponential
/// `prod_N prod_i exp((theta_i / N) tau_i)` into gates.
///
/// Each excitation's generator is Jordan-Wigner transformed and every
/// resulting Pauli term becomes one V-shaped exponential block whose RZ gate
/// is registered against the excitation's parameter slot (the terms of a
/// single excitation commute, so their order inside a block is immaterial).
pub fn uccsd_circuit(spec: &AnsatzSpec, params: &[f64]) -> Result<Circuit> {
    if params.len() != spec.param_count() {
        return Err(Error::ParameterCount {
            expected: spec.param_count(),
            actual: params.len(),
        });
    }
    let reps = spec.trotter_reps();
    let mut circuit = Circuit::new(spec.n_qubits());
    for _ in 0..reps {
        for exc in spec.excitations() {
            let generator = jordan_wigner_excitation(exc, spec.n_qubits())?;
            for (coeff, string) in generator.terms() {
                if string.phase() != Phase::PlusI {
                    return Err(Error::NonHermitian(format!(
                        "generator term {string} is not anti-Hermitian"
                    )));
                }
                // exp(theta * c * (i * sigma)) = exp(i (theta c) sigma)
                let scale = coeff / reps as f64;
                let plain = string.clone().with_phase(Phase::PlusOne);
                let angle = scale * params[exc.slot()];
                if let Some(rz) = append_exp_pauli(&mut circuit, &plain, angle)? {
                    circuit.bind_rz_to_slot(exc.slot(), rz, scale)?;
                }
            }
        }
    }
    Ok(circuit)
}

/// Optimizer settings for [`vqe_optimize`].
#[derive(Clone, Debug)]
pub struct VqeConfig {
    pub optimizer: NelderMeadConfig,
    /// Starting parameter vector; zeros (the bare Hartree-Fock state) when
    /// empty.
    pub initial_params: Vec<f64>,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            optimizer: NelderMeadConfig::default(),
            initial_params: Vec::new(),
        }
    }
}

/// Outcome of a VQE run.
#[derive(Clone, Debug)]
pub struct VqeResult {
    pub params: Vec<f64>,
    pub energy: f64,
    /// Accepted best energies, non-increasing; the last entry is `energy`.
    pub history: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
    /// Initialization rates of the model used, empty for the clean pipeline.
    pub q_rates: Vec<f64>,
    /// Whether the mitigated measurement pipeline was used.
    pub mitigated: bool,
}

fn energy_objective(
    h: &PauliSumOperator,
    rho: &DensityMatrix,
    spam: Option<&SpamModel>,
) -> Result<f64> {
    match spam {
        Some(model) => {
            let mut acc = 0.0;
            for (coeff, p) in h.terms() {
                acc += coeff * qrem_measure(rho, p, model)?;
            }
            Ok(acc)
        }
        None => expectation(rho, h),
    }
}

/// Minimize `<psi(theta)|H|psi(theta)>` over the ansatz parameters.
///
/// With a SPAM model, the initial state carries the model's initialization
/// error and every Hamiltonian term is measured through readout noise plus
/// the contaminated mitigation inverse, exactly as an experiment applying
/// conventional mitigation inside each iteration would. Without a model the
/// objective is the exact trace. The evaluation is deterministic, so the
/// whole run is reproducible.
pub fn vqe_optimize(
    h: &PauliSumOperator,
    spec: &AnsatzSpec,
    n_electrons: usize,
    spam: Option<&SpamModel>,
    cfg: &VqeConfig,
) -> Result<VqeResult> {
    if h.n_qubits() != spec.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: spec.n_qubits(),
            actual: h.n_qubits(),
        });
    }
    let n = spec.n_qubits();
    if n > DENSE_QUBIT_CAP {
        return Err(Error::SizeGuard {
            what: "VQE state",
            limit: DENSE_QUBIT_CAP,
            requested: n,
        });
    }
    let q_rates = match spam {
        Some(model) => {
            if model.n_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: model.n_qubits(),
                });
            }
            model.q_list()
        }
        None => vec![0.0; n],
    };

    let base = noisy_initial_state(n, &q_rates)?;
    let reference = apply_circuit(&base, &hf_prep_circuit(n, n_electrons)?, None)?;

    let x0 = if cfg.initial_params.is_empty() {
        vec![0.0; spec.param_count()]
    } else {
        if cfg.initial_params.len() != spec.param_count() {
            return Err(Error::ParameterCount {
                expected: spec.param_count(),
                actual: cfg.initial_params.len(),
            });
        }
        cfg.initial_params.clone()
    };

    // Fail early on any structural problem so the optimization closure
    // cannot error.
    let template = uccsd_circuit(spec, &x0)?;
    let _ = energy_objective(h, &apply_circuit(&reference, &template, None)?, spam)?;

    let mut bound = template;
    let objective = |theta: &[f64]| -> f64 {
        bound.bind_parameters(theta).expect("validated parameter count");
        let rho = apply_circuit(&reference, &bound, None).expect("validated circuit");
        energy_objective(h, &rho, spam).expect("validated observable")
    };
    let result = minimize(objective, &x0, &cfg.optimizer);

    Ok(VqeResult {
        params: result.x,
        energy: result.value,
        history: result.history,
        evaluations: result.evals,
        converged: result.converged,
        q_rates: if spam.is_some() { q_rates } else { Vec::new() },
        mitigated: spam.is_some(),
    })
}

/// Time-evolution energy errors at one Trotter slicing.
#[derive(Clone, Debug)]
pub struct QteResult {
    pub n_qubits: usize,
    pub n_slices: usize,
    pub t: f64,
    pub q_rates: Vec<f64>,
    /// Mitigated energy of the Trotter-evolved noisy state.
    pub e_trotter: f64,
    /// Mitigated energy of the exactly evolved noisy state.
    pub e_exact: f64,
    /// Clean reference energy of the Hartree-Fock state.
    pub e_reference: f64,
    /// `e_trotter - e_exact`: the Trotterization contribution.
    pub trotter_error: f64,
    /// `e_trotter - e_reference`: total deviation after mitigation.
    pub total_error: f64,
}

/// Evolve the (noisy) Hartree-Fock state by both the Trotterized and the
/// exact propagator of `H`, measure the energy of each through the mitigated
/// pipeline, and report the error split.
pub fn qte_benchmark(
    h: &PauliSumOperator,
    n_electrons: usize,
    t: f64,
    n_slices: usize,
    spam: &SpamModel,
) -> Result<QteResult> {
    let n = h.n_qubits();
    if n > DENSE_QUBIT_CAP {
        return Err(Error::SizeGuard {
            what: "time-evolution state",
            limit: DENSE_QUBIT_CAP,
            requested: n,
        });
    }
    if spam.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: spam.n_qubits(),
        });
    }
    let prep = hf_prep_circuit(n, n_electrons)?;
    let clean = apply_circuit(&DensityMatrix::pure_state(n, 0)?, &prep, None)?;
    let e_reference = expectation(&clean, h)?;

    let noisy = apply_circuit(&noisy_initial_state(n, &spam.q_list())?, &prep, None)?;

    let trotter = crate::circuit::trotterize(h, t, n_slices)?;
    let rho_trotter = apply_circuit(&noisy, &trotter, None)?;
    let e_trotter = energy_objective(h, &rho_trotter, Some(spam))?;

    let rho_exact = exact_evolution(h, t, &noisy)?;
    let e_exact = energy_objective(h, &rho_exact, Some(spam))?;

    Ok(QteResult {
        n_qubits: n,
        n_slices,
        t,
        q_rates: spam.q_list(),
        e_trotter,
        e_exact,
        e_reference,
        trotter_error: e_trotter - e_exact,
        total_error: e_trotter - e_reference,
    })
}

/// Qubit carrying chain site `k` in the half-filled layout: even sites on
/// qubits `0..n/2` (the occupied block), odd sites on `n/2..n`.
fn tfim_site_qubit(k: usize, n: usize) -> usize {
    if k % 2 == 0 {
        k / 2
    } else {
        n / 2 + k / 2
    }
}

/// Transverse-field Ising chain `H = -j sum X_k X_{k+1} - g sum Z_k` on an
/// open line of `n` sites (n even).
///
/// Chain sites are laid out on qubits so that the Hartree-Fock occupation
/// `|1...10...0>` is the staggered (every-other-site) configuration: even
/// sites fill the low qubits, odd sites the high ones. Each chain bond then
/// couples an occupied qubit to a virtual one, which gives the
/// single-excitation ansatz of [`tfim_ansatz`] first-order traction.
pub fn tfim_chain(n: usize, j: f64, g: f64) -> Result<PauliSumOperator> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidConfig(
            "Ising chain testbed needs an even qubit count >= 2".into(),
        ));
    }
    let mut terms = Vec::new();
    for k in 0..n - 1 {
        let a = tfim_site_qubit(k, n);
        let b = tfim_site_qubit(k + 1, n);
        let x = crate::pauli::PauliString::x(n, a)?
            .multiply(&crate::pauli::PauliString::x(n, b)?)?;
        terms.push((-j, x));
    }
    for k in 0..n {
        terms.push((-g, crate::pauli::PauliString::z(n, tfim_site_qubit(k, n))?));
    }
    PauliSumOperator::new(n, terms)
}

/// Half-filled single-excitation ansatz used as the scaling testbed for the
/// Ising chain: one parameter per chain bond, each driving the hop across
/// that bond from the staggered reference. Returns the spec and the
/// electron count.
pub fn tfim_ansatz(n: usize) -> Result<(AnsatzSpec, usize)> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidConfig(
            "Ising testbed ansatz needs an even qubit count >= 2".into(),
        ));
    }
    let excitations = (0..n - 1)
        .map(|bond| {
            let a = tfim_site_qubit(bond, n);
            let b = tfim_site_qubit(bond + 1, n);
            // Even bonds hop occupied -> virtual, odd bonds the reverse.
            FermionExcitation::Single {
                p: a.max(b),
                q: a.min(b),
                slot: bond,
            }
        })
        .collect();
    Ok((AnsatzSpec::new(n, excitations, 1)?, n / 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::dense_unitary;
    use crate::linalg;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hf_state_indices() {
        assert_eq!(hf_state(4, 2).unwrap(), 0b0011);
        assert_eq!(hf_state(6, 0).unwrap(), 0);
        assert!(hf_state(2, 3).is_err());
    }

    #[test]
    fn hf_energy_is_reference_expectation() {
        let h = tfim_chain(4, 1.0, 0.7).unwrap();
        let prep = hf_prep_circuit(4, 2).unwrap();
        let rho = apply_circuit(&DensityMatrix::pure_state(4, 0).unwrap(), &prep, None).unwrap();
        // Occupied qubits have Z = -1: the field terms cancel at half
        // filling and the XX terms vanish on a basis state.
        let e = expectation(&rho, &h).unwrap();
        assert!(close(e, 0.0, 1e-12));
    }

    #[test]
    fn ansatz_slot_counting() {
        let (spec, n_e) = parse_ansatz("4 2\nS 2 0\nS 3 1\nD 3 2 1 0\n").unwrap();
        assert_eq!(spec.param_count(), 3);
        assert_eq!(n_e, 2);
        assert_eq!(spec.excitations().len(), 3);
    }

    #[test]
    fn ansatz_parsing_errors() {
        assert!(parse_ansatz("").is_err());
        assert!(parse_ansatz("4\nS 2 0\n").is_err());
        assert!(parse_ansatz("4 2\nS 2 2\n").is_err());
        assert!(parse_ansatz("4 2\nD 3 2 1\n").is_err());
        assert!(parse_ansatz("2 3\n").is_err());
        assert!(parse_ansatz("4 2\nS 9 0\n").is_err());
    }

    #[test]
    fn uccsd_zero_parameters_is_identity() {
        let (spec, _) = parse_ansatz("4 2\nS 2 0\nS 3 1\nD 3 2 1 0\n").unwrap();
        let c = uccsd_circuit(&spec, &[0.0; 3]).unwrap();
        let u = dense_unitary(&c).unwrap();
        let id = DMatrix::<Complex64>::identity(16, 16);
        assert!(linalg::distance_up_to_phase(&u, &id) < 1e-11);
    }

    #[test]
    fn uccsd_single_excitation_matches_generator_exponential() {
        // One excitation's terms commute, so a single Trotter slice is the
        // exact exponential of theta * (T - T†) under Jordan-Wigner.
        let exc = FermionExcitation::Single { p: 1, q: 0, slot: 0 };
        let spec = AnsatzSpec::new(2, vec![exc], 1).unwrap();
        let theta = 0.3;
        let u = dense_unitary(&uccsd_circuit(&spec, &[theta]).unwrap()).unwrap();

        let tau = jordan_wigner_excitation(&exc, 2).unwrap().to_dense().unwrap();
        let hgen = &tau * Complex64::new(0.0, -1.0);
        let expected = linalg::expm_i_hermitian(&hgen, theta);
        assert!(linalg::distance_up_to_phase(&u, &expected) < 1e-10);
    }

    #[test]
    fn uccsd_double_excitation_matches_generator_exponential() {
        let exc = FermionExcitation::Double { p: 3, q: 2, r: 1, s: 0, slot: 0 };
        let spec = AnsatzSpec::new(4, vec![exc], 1).unwrap();
        let theta = -0.47;
        let u = dense_unitary(&uccsd_circuit(&spec, &[theta]).unwrap()).unwrap();
        let tau = jordan_wigner_excitation(&exc, 4).unwrap().to_dense().unwrap();
        let hgen = &tau * Complex64::new(0.0, -1.0);
        let expected = linalg::expm_i_hermitian(&hgen, theta);
        assert!(linalg::distance_up_to_phase(&u, &expected) < 1e-10);
    }

    #[test]
    fn uccsd_parameter_count_enforced() {
        let (spec, _) = parse_ansatz("4 2\nS 2 0\n").unwrap();
        assert!(uccsd_circuit(&spec, &[0.1, 0.2]).is_err());
    }

    #[test]
    fn vqe_reaches_sector_ground_state_of_hopping_hamiltonian() {
        // H = -(XX + YY) + 0.2 (Z0 - Z1) has its global ground state inside
        // the single-particle sector, which one single excitation spans.
        let h: PauliSumOperator = "-1.0 XX\n-1.0 YY\n0.2 ZI\n-0.2 IZ".parse().unwrap();
        let spec = AnsatzSpec::new(
            2,
            vec![FermionExcitation::Single { p: 1, q: 0, slot: 0 }],
            1,
        )
        .unwrap();
        let cfg = VqeConfig::default();
        let result = vqe_optimize(&h, &spec, 1, None, &cfg).unwrap();
        let exact = linalg::min_eigenvalue(&h.to_dense().unwrap());
        assert!(
            close(result.energy, exact, 1e-6),
            "vqe {} vs exact {exact}",
            result.energy
        );
        assert!(result.converged);
    }

    #[test]
    fn vqe_objective_at_zero_theta_is_hf_energy() {
        let h = tfim_chain(4, 1.0, 0.9).unwrap();
        let (spec, n_e) = tfim_ansatz(4).unwrap();
        let cfg = VqeConfig {
            optimizer: NelderMeadConfig {
                max_evals: 1,
                ..NelderMeadConfig::default()
            },
            initial_params: Vec::new(),
        };
        let result = vqe_optimize(&h, &spec, n_e, None, &cfg).unwrap();
        let prep = hf_prep_circuit(4, n_e).unwrap();
        let rho = apply_circuit(&DensityMatrix::pure_state(4, 0).unwrap(), &prep, None).unwrap();
        let hf = expectation(&rho, &h).unwrap();
        assert!(close(result.history[0], hf, 1e-12));
    }

    #[test]
    fn vqe_history_is_non_increasing() {
        let h = tfim_chain(4, 1.0, 1.0).unwrap();
        let (spec, n_e) = tfim_ansatz(4).unwrap();
        let result = vqe_optimize(&h, &spec, n_e, None, &VqeConfig::default()).unwrap();
        assert!(result.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(close(*result.history.last().unwrap(), result.energy, 0.0));
    }

    #[test]
    fn vqe_mitigated_with_zero_rates_matches_clean() {
        let h = tfim_chain(2, 1.0, 1.0).unwrap();
        let (spec, n_e) = tfim_ansatz(2).unwrap();
        let clean = vqe_optimize(&h, &spec, n_e, None, &VqeConfig::default()).unwrap();
        let zero = SpamModel::zero(2).unwrap();
        let mitigated = vqe_optimize(&h, &spec, n_e, Some(&zero), &VqeConfig::default()).unwrap();
        assert!(
            close(clean.energy, mitigated.energy, 1e-9),
            "clean {} vs mitigated {}",
            clean.energy,
            mitigated.energy
        );
    }

    #[test]
    fn vqe_bias_appears_at_nonzero_q() {
        let h = tfim_chain(2, 1.0, 1.0).unwrap();
        let (spec, n_e) = tfim_ansatz(2).unwrap();
        let clean = vqe_optimize(&h, &spec, n_e, None, &VqeConfig::default()).unwrap();
        // In-sector optimum is the symmetric superposition at energy -1.
        assert!(close(clean.energy, -1.0, 1e-7));

        let q = 0.001;
        let spam = SpamModel::uniform(2, 0.02, 0.03, q).unwrap();
        let biased = vqe_optimize(&h, &spec, n_e, Some(&spam), &VqeConfig::default()).unwrap();
        assert!(
            biased.energy < clean.energy - q / 2.0,
            "biased {} clean {}",
            biased.energy,
            clean.energy
        );
    }

    #[test]
    fn qte_zero_rate_commuting_hamiltonian_has_no_error() {
        let h: PauliSumOperator = "0.5 ZZII\n0.3 IZZI\n-0.2 IIZZ".parse().unwrap();
        let spam = SpamModel::zero(4).unwrap();
        let r = qte_benchmark(&h, 2, 1.3, 2, &spam).unwrap();
        assert!(close(r.trotter_error, 0.0, 1e-10));
        assert!(close(r.total_error, 0.0, 1e-10));
    }

    #[test]
    fn qte_zero_rate_total_error_equals_trotter_error() {
        // Exact evolution conserves energy, so at q = 0 the two error
        // definitions coincide.
        let h: PauliSumOperator = "0.6 XZII\n0.4 ZXZI\n0.3 IYYI\n0.2 IIZX".parse().unwrap();
        let spam = SpamModel::zero(4).unwrap();
        let r = qte_benchmark(&h, 2, 0.8, 3, &spam).unwrap();
        assert!(close(r.total_error, r.trotter_error, 1e-9));
    }

    #[test]
    fn tfim_chain_layout() {
        let h = tfim_chain(3, 1.0, 0.5).unwrap();
        assert_eq!(h.n_qubits(), 3);
        assert_eq!(h.len(), 2 + 3);
        assert!(h.is_hermitian());
    }

    #[test]
    fn tfim_ansatz_shape() {
        let (spec, n_e) = tfim_ansatz(6).unwrap();
        assert_eq!(n_e, 3);
        assert_eq!(spec.param_count(), 5);
        assert!(tfim_ansatz(5).is_err());
    }
}
