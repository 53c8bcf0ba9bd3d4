//! Experiment drivers behind the command-line binary.
//!
//! Every driver computes a full set of sweep rows, sorts them by sweep key,
//! and writes them with the resolved configuration echoed into the output
//! header, so re-running a config reproduces the file byte for byte. Output
//! is written to a temporary sibling path and atomically renamed; a failing
//! sweep leaves nothing behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::chem::{parse_ansatz, qte_benchmark, tfim_ansatz, tfim_chain, vqe_optimize, VqeConfig};
use crate::circuit::Circuit;
use crate::clifford::{ghz_circuit, graph_state_circuit, parse_graph, GhzVariant, GraphSpec};
use crate::density::{apply_circuit, noisy_initial_state, qrem_measure, DensityMatrix};
use crate::error::{Error, Result};
use crate::fidelity::{
    closed_form_full_graph, dp_linear_cluster, dp_linear_ghz, exact_fake_fidelity,
    sampled_fake_fidelity, FidelityEstimate, ENUMERATION_QUBIT_CAP,
};
use crate::optimize::NelderMeadConfig;
use crate::pauli::{parse_pauli_sum, PauliString, PauliSumOperator};
use crate::spam::{bound_contour_n, parse_spam_model, safety_bound_delta, SpamModel};

/// Output encoding.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

/// Inclusive integer range parsed from `a..b`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusiveRange {
    pub start: usize,
    pub end: usize,
}

impl InclusiveRange {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.end).collect()
    }
}

impl std::str::FromStr for InclusiveRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once("..").ok_or_else(|| {
            Error::InvalidConfig(format!("range '{s}' must look like '2..20'"))
        })?;
        let start = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad range start '{a}'")))?;
        let end = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad range end '{b}'")))?;
        if end < start {
            return Err(Error::InvalidConfig(format!("empty range '{s}'")));
        }
        Ok(Self { start, end })
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let vals: Result<Vec<f64>> = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad number '{t}'")))
        })
        .collect();
    let vals = vals?;
    if vals.is_empty() {
        return Err(Error::InvalidConfig(format!("empty list '{s}'")));
    }
    Ok(vals)
}

/// Comma-separated float list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatList(pub Vec<f64>);

impl std::str::FromStr for FloatList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(FloatList(parse_f64_list(s)?))
    }
}

fn config_header<C: Serialize>(command: &str, cfg: &C) -> String {
    let value = serde_json::to_value(cfg).expect("config serializes");
    let mut out = String::new();
    let _ = writeln!(out, "# command: {command}");
    if let serde_json::Value::Object(map) = value {
        let mut keys: Vec<&String> = map.keys().collect();
        keys.sort();
        for k in keys {
            let _ = writeln!(out, "# {k} = {}", map[k]);
        }
    }
    out
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = PathBuf::from(path);
    let mut name = tmp
        .file_name()
        .ok_or_else(|| Error::InvalidConfig("output path has no file name".into()))?
        .to_os_string();
    name.push(".tmp");
    tmp.set_file_name(name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn render<C: Serialize, R: Serialize>(
    command: &str,
    cfg: &C,
    format: OutputFormat,
    csv_columns: &str,
    csv_rows: Vec<String>,
    json_rows: &[R],
) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = config_header(command, cfg);
            out.push_str(csv_columns);
            out.push('\n');
            for row in csv_rows {
                out.push_str(&row);
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Document<'a, C: Serialize, R: Serialize> {
                command: &'a str,
                config: &'a C,
                rows: &'a [R],
            }
            let doc = Document {
                command,
                config: cfg,
                rows: json_rows,
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("rows serialize");
            text.push('\n');
            text
        }
    }
}

/// State-preparation topologies with built-in circuits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    OneDGraph,
    FullGraph,
    LinearGhz,
    CompactGhz,
}

impl std::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1d-graph" => Ok(Topology::OneDGraph),
            "full-graph" => Ok(Topology::FullGraph),
            "linear-ghz" => Ok(Topology::LinearGhz),
            "compact-ghz" => Ok(Topology::CompactGhz),
            other => Err(Error::InvalidConfig(format!(
                "unknown topology '{other}' (expected 1d-graph, full-graph, linear-ghz, compact-ghz)"
            ))),
        }
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Topology::OneDGraph => "1d-graph",
            Topology::FullGraph => "full-graph",
            Topology::LinearGhz => "linear-ghz",
            Topology::CompactGhz => "compact-ghz",
        };
        write!(f, "{s}")
    }
}

fn topology_circuit(topology: Topology, n: usize) -> Result<crate::clifford::CliffordCircuit> {
    match topology {
        Topology::OneDGraph => Ok(graph_state_circuit(&GraphSpec::path(n)?)),
        Topology::FullGraph => Ok(graph_state_circuit(&GraphSpec::complete(n)?)),
        Topology::LinearGhz => ghz_circuit(n, GhzVariant::Linear),
        Topology::CompactGhz => ghz_circuit(n, GhzVariant::Compact),
    }
}

/// Fidelity evaluation strategy requested on the command line.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    /// Exact enumeration up to the guard, a dynamic program at uniform
    /// rates on topologies that have one, sampling otherwise.
    Auto,
    Exact,
    Dp,
    Sampled,
}

impl std::str::FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MethodChoice::Auto),
            "exact" => Ok(MethodChoice::Exact),
            "dp" => Ok(MethodChoice::Dp),
            "sampled" => Ok(MethodChoice::Sampled),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

/// `fidelity` sweep configuration.
#[derive(Clone, Debug, Serialize)]
pub struct FidelityConfig {
    pub topology: Option<Topology>,
    pub graph_file: Option<PathBuf>,
    pub q: f64,
    pub spam_file: Option<PathBuf>,
    pub n_range: InclusiveRange,
    pub method: MethodChoice,
    pub samples: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct FidelityRow {
    n: usize,
    q: f64,
    method: String,
    fidelity: f64,
    std_error: f64,
    seed: Option<u64>,
}

fn fidelity_estimate(
    cfg: &FidelityConfig,
    topology: Option<Topology>,
    graph: Option<&GraphSpec>,
    n: usize,
    q_rates: &[f64],
) -> Result<FidelityEstimate> {
    let uniform = q_rates.windows(2).all(|w| w[0] == w[1]);
    let dp_available = matches!(
        topology,
        Some(Topology::OneDGraph) | Some(Topology::FullGraph) | Some(Topology::LinearGhz)
    );
    let method = match cfg.method {
        MethodChoice::Exact => MethodChoice::Exact,
        MethodChoice::Dp => MethodChoice::Dp,
        MethodChoice::Sampled => MethodChoice::Sampled,
        MethodChoice::Auto => {
            if uniform && dp_available && n >= 2 {
                MethodChoice::Dp
            } else if n <= ENUMERATION_QUBIT_CAP {
                MethodChoice::Exact
            } else {
                MethodChoice::Sampled
            }
        }
    };
    let circuit = || -> Result<crate::clifford::CliffordCircuit> {
        match (topology, graph) {
            (Some(t), _) => topology_circuit(t, n),
            (None, Some(g)) => Ok(graph_state_circuit(g)),
            (None, None) => Err(Error::InvalidConfig(
                "either a topology or a graph file is required".into(),
            )),
        }
    };
    match method {
        MethodChoice::Exact => exact_fake_fidelity(&circuit()?, q_rates),
        MethodChoice::Sampled => sampled_fake_fidelity(&circuit()?, q_rates, cfg.samples, cfg.seed),
        MethodChoice::Dp => {
            if !uniform {
                return Err(Error::InvalidConfig(
                    "dynamic programs require a uniform initialization rate".into(),
                ));
            }
            let q = q_rates[0];
            match topology {
                Some(Topology::OneDGraph) => dp_linear_cluster(n, q),
                Some(Topology::FullGraph) => closed_form_full_graph(n, q),
                Some(Topology::LinearGhz) => dp_linear_ghz(n, q),
                _ => Err(Error::InvalidConfig(
                    "no dynamic program for this topology; use exact or sampled".into(),
                )),
            }
        }
        MethodChoice::Auto => unreachable!(),
    }
}

/// Fake-fidelity sweep over qubit count (one row per `n`).
pub fn cmd_fidelity(cfg: &FidelityConfig) -> Result<()> {
    let graph = match &cfg.graph_file {
        Some(path) => Some(parse_graph(&fs::read_to_string(path)?)?),
        None => None,
    };
    if cfg.topology.is_some() && graph.is_some() {
        return Err(Error::InvalidConfig(
            "pass either a topology or a graph file, not both".into(),
        ));
    }
    let spam = match &cfg.spam_file {
        Some(path) => Some(parse_spam_model(&fs::read_to_string(path)?)?),
        None => None,
    };
    if let Some(g) = &graph {
        let wanted = cfg.n_range.values();
        if wanted.len() != 1 || wanted[0] != g.n_vertices() {
            return Err(Error::InvalidConfig(
                "with a graph file the n range must match the graph size".into(),
            ));
        }
    }

    let ns = cfg.n_range.values();
    let rows: Result<Vec<(usize, FidelityEstimate)>> = ns
        .par_iter()
        .map(|&n| {
            let q_rates: Vec<f64> = match &spam {
                Some(model) => {
                    if model.n_qubits() < n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            actual: model.n_qubits(),
                        });
                    }
                    model.q_list()[..n].to_vec()
                }
                None => vec![cfg.q; n],
            };
            let est = fidelity_estimate(cfg, cfg.topology, graph.as_ref(), n, &q_rates)?;
            Ok((n, est))
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by_key(|(n, _)| *n);

    let json_rows: Vec<FidelityRow> = rows
        .iter()
        .map(|(n, est)| FidelityRow {
            n: *n,
            q: est.q.iter().sum::<f64>() / est.q.len() as f64,
            method: est.method.to_string(),
            fidelity: est.value,
            std_error: est.std_error,
            seed: est.seed,
        })
        .collect();
    let csv_rows: Vec<String> = json_rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.n,
                r.q,
                r.method,
                r.fidelity,
                r.std_error,
                r.seed.map(|s| s.to_string()).unwrap_or_default()
            )
        })
        .collect();
    let text = render(
        "fidelity",
        cfg,
        cfg.format,
        "n,q,method,fidelity,std_error,seed",
        csv_rows,
        &json_rows,
    );
    write_atomic(&cfg.out, &text)
}

/// `bound` sweep configuration.
#[derive(Clone, Debug, Serialize)]
pub struct BoundConfig {
    pub n_range: InclusiveRange,
    pub q_list: FloatList,
    pub levels: FloatList,
    pub out: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct BoundRow {
    kind: String,
    n: Option<usize>,
    q: f64,
    level: Option<f64>,
    value: f64,
}

/// Relative-error surface `Delta(n, q)` plus the `n*(q)` contour per
/// requested bound level.
pub fn cmd_bound(cfg: &BoundConfig) -> Result<()> {
    let mut rows: Vec<BoundRow> = Vec::new();
    for &n in &cfg.n_range.values() {
        for &q in &cfg.q_list.0 {
            rows.push(BoundRow {
                kind: "delta".into(),
                n: Some(n),
                q,
                level: None,
                value: safety_bound_delta(n, q)?,
            });
        }
    }
    for &level in &cfg.levels.0 {
        for &q in &cfg.q_list.0 {
            if q == 0.0 {
                continue;
            }
            rows.push(BoundRow {
                kind: "contour".into(),
                n: None,
                q,
                level: Some(level),
                value: bound_contour_n(level, q)?,
            });
        }
    }
    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.kind,
                r.n.map(|n| n.to_string()).unwrap_or_default(),
                r.q,
                r.level.map(|l| l.to_string()).unwrap_or_default(),
                r.value
            )
        })
        .collect();
    let text = render(
        "bound",
        cfg,
        cfg.format,
        "kind,n,q,level,value",
        csv_rows,
        &rows,
    );
    write_atomic(&cfg.out, &text)
}

/// `entangle-noisy` sweep configuration.
#[derive(Clone, Debug, Serialize)]
pub struct EntangleNoisyConfig {
    pub n: usize,
    pub q_list: FloatList,
    pub gate_noise: FloatList,
    pub delta0: f64,
    pub delta1: f64,
    pub out: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize, Clone)]
struct EntangleRow {
    n: usize,
    q: f64,
    gate_noise: f64,
    true_fidelity: f64,
    qrem_fidelity: f64,
    gap: f64,
}

/// True versus mitigation-reported fidelity of a noisy 1D cluster state.
///
/// The reported value averages the mitigated expectation of every
/// stabilizer, which is what a stabilizer-sampling experiment converges to.
pub fn cmd_entangle_noisy(cfg: &EntangleNoisyConfig) -> Result<()> {
    let n = cfg.n;
    if n > crate::density::DENSE_QUBIT_CAP {
        return Err(Error::SizeGuard {
            what: "noisy entanglement sweep",
            limit: crate::density::DENSE_QUBIT_CAP,
            requested: n,
        });
    }
    let cliff = graph_state_circuit(&GraphSpec::path(n)?);
    let circuit = Circuit::from(&cliff);
    let ideal = apply_circuit(&DensityMatrix::pure_state(n, 0)?, &circuit, None)?;
    let stabilizers: Result<Vec<PauliString>> = (0..1usize << n)
        .map(|pattern| {
            let z = PauliString::from_symplectic(n, 0, pattern as u128)?;
            crate::clifford::conjugate_pauli(&cliff, &z)
        })
        .collect();
    let stabilizers = stabilizers?;

    let mut points = Vec::new();
    for &q in &cfg.q_list.0 {
        for &noise in &cfg.gate_noise.0 {
            points.push((q, noise));
        }
    }
    let rows: Result<Vec<EntangleRow>> = points
        .par_iter()
        .map(|&(q, noise)| {
            let spam = SpamModel::uniform(n, cfg.delta0, cfg.delta1, q)?;
            let rho = apply_circuit(&noisy_initial_state(n, &vec![q; n])?, &circuit, Some(noise))?;
            let true_fidelity = trace_overlap(&rho, &ideal);
            let mut acc = 0.0;
            for s in &stabilizers {
                acc += qrem_measure(&rho, s, &spam)?;
            }
            let qrem_fidelity = acc / (1 << n) as f64;
            Ok(EntangleRow {
                n,
                q,
                gate_noise: noise,
                true_fidelity,
                qrem_fidelity,
                gap: qrem_fidelity - true_fidelity,
            })
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by(|a, b| (a.q, a.gate_noise).partial_cmp(&(b.q, b.gate_noise)).unwrap());

    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.n, r.q, r.gate_noise, r.true_fidelity, r.qrem_fidelity, r.gap
            )
        })
        .collect();
    let text = render(
        "entangle-noisy",
        cfg,
        cfg.format,
        "n,q,gate_noise,true_fidelity,qrem_fidelity,gap",
        csv_rows,
        &rows,
    );
    write_atomic(&cfg.out, &text)
}

/// `Tr(rho sigma)` for Hermitian states.
fn trace_overlap(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let dim = rho.dim();
    let mut acc = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let prod = rho.entry(i, j) * sigma.entry(j, i);
            acc += prod.re;
        }
    }
    acc
}

/// Hamiltonian + ansatz source: bundled Ising-chain family or files.
#[derive(Clone, Debug, Serialize)]
pub struct ProblemSource {
    pub family: Option<String>,
    pub hamiltonian_file: Option<PathBuf>,
    pub ansatz_file: Option<PathBuf>,
}

fn load_problem(
    source: &ProblemSource,
    n: usize,
) -> Result<(PauliSumOperator, crate::chem::AnsatzSpec, usize)> {
    match (&source.family, &source.hamiltonian_file) {
        (Some(name), None) => match name.as_str() {
            "tfim" => {
                let h = tfim_chain(n, 1.0, 1.0)?;
                let (spec, n_e) = tfim_ansatz(n)?;
                Ok((h, spec, n_e))
            }
            other => Err(Error::InvalidConfig(format!("unknown family '{other}'"))),
        },
        (None, Some(hpath)) => {
            let h = parse_pauli_sum(&fs::read_to_string(hpath)?)?;
            let apath = source.ansatz_file.as_ref().ok_or_else(|| {
                Error::InvalidConfig("a Hamiltonian file needs an ansatz file".into())
            })?;
            let (spec, n_e) = parse_ansatz(&fs::read_to_string(apath)?)?;
            if spec.n_qubits() != h.n_qubits() {
                return Err(Error::DimensionMismatch {
                    expected: h.n_qubits(),
                    actual: spec.n_qubits(),
                });
            }
            Ok((h, spec, n_e))
        }
        _ => Err(Error::InvalidConfig(
            "pass exactly one of --family or --hamiltonian".into(),
        )),
    }
}

/// `vqe` sweep configuration.
#[derive(Clone, Debug, Serialize)]
pub struct VqeCmdConfig {
    pub source: ProblemSource,
    pub n_range: InclusiveRange,
    pub q_list: FloatList,
    pub delta0: f64,
    pub delta1: f64,
    pub max_evals: usize,
    pub f_tol: f64,
    pub out: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize, Clone)]
struct VqeRow {
    n: usize,
    q: f64,
    n_params: usize,
    energy: f64,
    evaluations: usize,
    converged: bool,
}

/// Optimized energy per `(n, q)` point, mitigation inside every iteration.
pub fn cmd_vqe(cfg: &VqeCmdConfig) -> Result<()> {
    let mut points = Vec::new();
    for n in cfg.n_range.values() {
        for &q in &cfg.q_list.0 {
            points.push((n, q));
        }
    }
    let rows: Result<Vec<VqeRow>> = points
        .par_iter()
        .map(|&(n, q)| {
            let (h, spec, n_e) = load_problem(&cfg.source, n)?;
            let spam = SpamModel::uniform(h.n_qubits(), cfg.delta0, cfg.delta1, q)?;
            let vqe_cfg = VqeConfig {
                optimizer: NelderMeadConfig {
                    max_evals: cfg.max_evals,
                    f_tol: cfg.f_tol,
                    ..NelderMeadConfig::default()
                },
                initial_params: Vec::new(),
            };
            let result = vqe_optimize(&h, &spec, n_e, Some(&spam), &vqe_cfg)?;
            Ok(VqeRow {
                n: h.n_qubits(),
                q,
                n_params: spec.param_count(),
                energy: result.energy,
                evaluations: result.evaluations,
                converged: result.converged,
            })
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by(|a, b| (a.n, a.q).partial_cmp(&(b.n, b.q)).unwrap());

    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{}",
                r.n, r.q, r.n_params, r.energy, r.evaluations, r.converged
            )
        })
        .collect();
    let text = render(
        "vqe",
        cfg,
        cfg.format,
        "n,q,n_params,energy,evaluations,converged",
        csv_rows,
        &rows,
    );
    write_atomic(&cfg.out, &text)
}

/// `qte` sweep configuration.
#[derive(Clone, Debug, Serialize)]
pub struct QteCmdConfig {
    pub source: ProblemSource,
    pub n_range: InclusiveRange,
    pub q_list: FloatList,
    pub delta0: f64,
    pub delta1: f64,
    pub t: f64,
    pub slices: Vec<usize>,
    pub out: PathBuf,
    pub format: OutputFormat,
}

#[derive(Serialize, Clone)]
struct QteRow {
    n: usize,
    q: f64,
    t: f64,
    n_slices: usize,
    e_trotter: f64,
    trotter_error: f64,
    total_error: f64,
}

/// Trotter and total energy error per `(n, N_s, q)` point.
pub fn cmd_qte(cfg: &QteCmdConfig) -> Result<()> {
    if cfg.slices.is_empty() {
        return Err(Error::InvalidConfig("need at least one slice count".into()));
    }
    let mut points = Vec::new();
    for n in cfg.n_range.values() {
        for &n_s in &cfg.slices {
            for &q in &cfg.q_list.0 {
                points.push((n, n_s, q));
            }
        }
    }
    let rows: Result<Vec<QteRow>> = points
        .par_iter()
        .map(|&(n, n_s, q)| {
            let (h, _, n_e) = load_problem(&cfg.source, n)?;
            let spam = SpamModel::uniform(h.n_qubits(), cfg.delta0, cfg.delta1, q)?;
            let r = qte_benchmark(&h, n_e, cfg.t, n_s, &spam)?;
            Ok(QteRow {
                n: r.n_qubits,
                q,
                t: r.t,
                n_slices: r.n_slices,
                e_trotter: r.e_trotter,
                trotter_error: r.trotter_error,
                total_error: r.total_error,
            })
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by(|a, b| {
        (a.n, a.n_slices, a.q)
            .partial_cmp(&(b.n, b.n_slices, b.q))
            .unwrap()
    });

    let csv_rows: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.n, r.q, r.t, r.n_slices, r.e_trotter, r.trotter_error, r.total_error
            )
        })
        .collect();
    let text = render(
        "qte",
        cfg,
        cfg.format,
        "n,q,t,n_slices,e_trotter,trotter_error,total_error",
        csv_rows,
        &rows,
    );
    write_atomic(&cfg.out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        let r: InclusiveRange = "2..20".parse().unwrap();
        assert_eq!(r.values().len(), 19);
        assert!("5..2".parse::<InclusiveRange>().is_err());
        assert!("abc".parse::<InclusiveRange>().is_err());
    }

    #[test]
    fn float_list_parsing() {
        let l: FloatList = "0.001,0.01".parse().unwrap();
        assert_eq!(l.0, vec![0.001, 0.01]);
        assert!("".parse::<FloatList>().is_err());
        assert!("x,y".parse::<FloatList>().is_err());
    }

    #[test]
    fn config_header_is_sorted_and_stable() {
        #[derive(Serialize)]
        struct C {
            beta: u32,
            alpha: &'static str,
        }
        let h = config_header("demo", &C { beta: 2, alpha: "x" });
        let expected = "# command: demo\n# alpha = \"x\"\n# beta = 2\n";
        assert_eq!(h, expected);
    }
}
