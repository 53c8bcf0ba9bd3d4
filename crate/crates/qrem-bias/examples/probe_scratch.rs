use qrem_bias::chem::{tfim_chain, vqe_optimize, AnsatzSpec, VqeConfig};
use qrem_bias::optimize::NelderMeadConfig;
use qrem_bias::pauli::FermionExcitation;
use qrem_bias::spam::SpamModel;

fn site_qubit(k: usize, n: usize) -> usize {
    if k % 2 == 0 { k / 2 } else { n / 2 + k / 2 }
}

fn bonds(n: usize) -> Vec<(usize, usize)> {
    (0..n - 1)
        .map(|k| {
            let a = site_qubit(k, n);
            let b = site_qubit(k + 1, n);
            (a.max(b), a.min(b))
        })
        .collect()
}

fn occ_virt(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for p in n / 2..n {
        for q in 0..n / 2 {
            v.push((p, q));
        }
    }
    v
}

fn run(name: &str, n: usize, pairs: &[(usize, usize)], reps: usize) {
    let excs: Vec<FermionExcitation> = pairs
        .iter()
        .enumerate()
        .map(|(slot, &(p, q))| FermionExcitation::Single { p, q, slot })
        .collect();
    let spec = AnsatzSpec::new(n, excs, reps).unwrap();
    let h = tfim_chain(n, 1.0, 1.0).unwrap();
    let cfg = VqeConfig {
        optimizer: NelderMeadConfig {
            max_evals: 4000,
            f_tol: 1e-10,
            initial_step: 0.1,
            restarts: 2,
        },
        initial_params: Vec::new(),
    };
    let t0 = std::time::Instant::now();
    let clean = vqe_optimize(&h, &spec, n / 2, Some(&SpamModel::zero(n).unwrap()), &cfg).unwrap();
    let biased = vqe_optimize(
        &h,
        &spec,
        n / 2,
        Some(&SpamModel::uniform(n, 0.02, 0.02, 0.001).unwrap()),
        &cfg,
    )
    .unwrap();
    println!(
        "{name:12} n={n} P={:2} reps={reps} E0={:+.9} bias={:.4e} evals=({},{}) dt={:.1?}",
        spec.param_count(),
        clean.energy,
        (biased.energy - clean.energy).abs(),
        clean.evaluations,
        biased.evaluations,
        t0.elapsed()
    );
}

fn main() {
    for n in [2usize, 4, 6] {
        run("bonds", n, &bonds(n), 1);
        if n > 2 {
            run("bonds-r2", n, &bonds(n), 2);
            run("occ-virt", n, &occ_virt(n), 1);
        }
    }
    run("bonds", 8, &bonds(8), 1);
}
