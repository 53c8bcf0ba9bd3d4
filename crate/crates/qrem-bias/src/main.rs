use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qrem_bias::driver::{
    cmd_bound, cmd_entangle_noisy, cmd_fidelity, cmd_qte, cmd_vqe, BoundConfig,
    EntangleNoisyConfig, FidelityConfig, FloatList, InclusiveRange, MethodChoice, OutputFormat,
    ProblemSource, QteCmdConfig, Topology, VqeCmdConfig,
};

/// Experiment drivers quantifying the bias of readout error mitigation
/// under imperfect qubit initialization. Set RAYON_NUM_THREADS to control
/// parallelism.
#[derive(Parser)]
#[command(name = "qrem-bias", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file path.
    #[arg(long)]
    out: PathBuf,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Mitigation-inflated state fidelity versus qubit count.
    Fidelity {
        /// Built-in preparation: 1d-graph, full-graph, linear-ghz, compact-ghz.
        #[arg(long, conflicts_with = "graph_file")]
        topology: Option<Topology>,
        /// Graph file (first line `n`, then `i j` edges).
        #[arg(long)]
        graph_file: Option<PathBuf>,
        /// Uniform initialization error rate.
        #[arg(long, default_value_t = 0.01)]
        q: f64,
        /// SPAM model file for heterogeneous rates.
        #[arg(long)]
        spam_file: Option<PathBuf>,
        /// Inclusive qubit range, e.g. 2..20.
        #[arg(long, value_name = "A..B")]
        n: InclusiveRange,
        /// Evaluation method: auto, exact, dp, sampled.
        #[arg(long, default_value = "auto")]
        method: MethodChoice,
        /// Sample count for the sampled method.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Relative-error surface Delta(n, q) and acceptable-rate contours.
    Bound {
        /// Inclusive qubit range, e.g. 2..100.
        #[arg(long, value_name = "A..B")]
        n: InclusiveRange,
        /// Comma-separated initialization rates.
        #[arg(long, value_name = "Q1,Q2,...")]
        q: FloatList,
        /// Bound levels for the contours.
        #[arg(long, default_value = "0.1,0.01,0.001")]
        levels: FloatList,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// True vs mitigation-reported fidelity of a noisy 1D cluster state.
    EntangleNoisy {
        /// Qubit count (dense simulation, <= 12).
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Comma-separated initialization rates.
        #[arg(long, value_name = "Q1,Q2,...")]
        q: FloatList,
        /// Comma-separated two-qubit depolarizing rates.
        #[arg(long, default_value = "0.0")]
        gate_noise: FloatList,
        /// Readout error rate on |0>.
        #[arg(long, default_value_t = 0.02)]
        delta0: f64,
        /// Readout error rate on |1>.
        #[arg(long, default_value_t = 0.02)]
        delta1: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Variational ground-state optimization under SPAM + mitigation.
    Vqe {
        /// Built-in problem family (tfim).
        #[arg(long)]
        family: Option<String>,
        /// Hamiltonian file in the Pauli-sum text format.
        #[arg(long, conflicts_with = "family")]
        hamiltonian: Option<PathBuf>,
        /// Ansatz file (header `n_qubits n_electrons`, then S/D lines).
        #[arg(long)]
        ansatz: Option<PathBuf>,
        /// Inclusive qubit range (family problems) or the file's size, e.g. 4..4.
        #[arg(long, value_name = "A..B")]
        n: InclusiveRange,
        /// Comma-separated initialization rates.
        #[arg(long, value_name = "Q1,Q2,...")]
        q: FloatList,
        #[arg(long, default_value_t = 0.02)]
        delta0: f64,
        #[arg(long, default_value_t = 0.02)]
        delta1: f64,
        /// Objective evaluation budget.
        #[arg(long, default_value_t = 4000)]
        max_evals: usize,
        /// Simplex convergence tolerance.
        #[arg(long, default_value_t = 1e-9)]
        f_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Trotterized time evolution: Trotter error vs total mitigated error.
    Qte {
        /// Built-in problem family (tfim).
        #[arg(long)]
        family: Option<String>,
        /// Hamiltonian file in the Pauli-sum text format.
        #[arg(long, conflicts_with = "family")]
        hamiltonian: Option<PathBuf>,
        /// Ansatz file (provides the electron count for the reference state).
        #[arg(long)]
        ansatz: Option<PathBuf>,
        /// Inclusive qubit range, e.g. 4..4.
        #[arg(long, value_name = "A..B")]
        n: InclusiveRange,
        /// Comma-separated initialization rates.
        #[arg(long, value_name = "Q1,Q2,...")]
        q: FloatList,
        #[arg(long, default_value_t = 0.02)]
        delta0: f64,
        #[arg(long, default_value_t = 0.02)]
        delta1: f64,
        /// Total evolution time.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Comma-separated Trotter slice counts.
        #[arg(long, default_value = "1,2,4", value_delimiter = ',')]
        slices: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn run() -> qrem_bias::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Fidelity {
            topology,
            graph_file,
            q,
            spam_file,
            n,
            method,
            samples,
            seed,
            output,
        } => cmd_fidelity(&FidelityConfig {
            topology,
            graph_file,
            q,
            spam_file,
            n_range: n,
            method,
            samples,
            seed,
            out: output.out,
            format: output.format,
        }),
        Command::Bound { n, q, levels, output } => cmd_bound(&BoundConfig {
            n_range: n,
            q_list: q,
            levels,
            out: output.out,
            format: output.format,
        }),
        Command::EntangleNoisy {
            n,
            q,
            gate_noise,
            delta0,
            delta1,
            output,
        } => cmd_entangle_noisy(&EntangleNoisyConfig {
            n,
            q_list: q,
            gate_noise,
            delta0,
            delta1,
            out: output.out,
            format: output.format,
        }),
        Command::Vqe {
            family,
            hamiltonian,
            ansatz,
            n,
            q,
            delta0,
            delta1,
            max_evals,
            f_tol,
            output,
        } => cmd_vqe(&VqeCmdConfig {
            source: ProblemSource {
                family,
                hamiltonian_file: hamiltonian,
                ansatz_file: ansatz,
            },
            n_range: n,
            q_list: q,
            delta0,
            delta1,
            max_evals,
            f_tol,
            out: output.out,
            format: output.format,
        }),
        Command::Qte {
            family,
            hamiltonian,
            ansatz,
            n,
            q,
            delta0,
            delta1,
            t,
            slices,
            output,
        } => cmd_qte(&QteCmdConfig {
            source: ProblemSource {
                family,
                hamiltonian_file: hamiltonian,
                ansatz_file: ansatz,
            },
            n_range: n,
            q_list: q,
            delta0,
            delta1,
            t,
            slices,
            out: output.out,
            format: output.format,
        }),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
