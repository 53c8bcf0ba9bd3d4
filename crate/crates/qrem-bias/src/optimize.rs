//! Bounded derivative-free simplex minimization (Nelder-Mead).
//!
//! Deterministic given its configuration: the initial simplex is the start
//! point plus one fixed step along each axis, and no randomness enters the
//! update rules. On convergence the simplex is rebuilt around the incumbent
//! best point with a quarter of the previous step (the restart rule), up to
//! `restarts` times or until the evaluation budget runs out.

/// Standard reflection/expansion/contraction/shrink coefficients.
const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

#[derive(Copy, Clone, Debug)]
pub struct NelderMeadConfig {
    /// Hard cap on objective evaluations.
    pub max_evals: usize,
    /// Absolute simplex spread |f_worst - f_best| at which a cycle stops.
    pub f_tol: f64,
    /// Initial step added to each coordinate to build the simplex.
    pub initial_step: f64,
    /// Rebuilds around the best point after convergence.
    pub restarts: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-9,
            initial_step: 0.1,
            restarts: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    /// Best value after each accepted improvement, starting at the initial
    /// point; non-increasing by construction.
    pub history: Vec<f64>,
    pub evals: usize,
    /// True when every cycle ended by reaching `f_tol` within budget.
    pub converged: bool,
}

struct Tracker<F> {
    f: F,
    evals: usize,
    best: f64,
    history: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        self.evals += 1;
        if v < self.best {
            self.best = v;
            self.history.push(v);
        }
        v
    }
}

/// Minimize `f` from `x0`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    cfg: &NelderMeadConfig,
) -> NelderMeadResult {
    let dim = x0.len();
    let mut tracker = Tracker {
        f,
        evals: 0,
        best: f64::INFINITY,
        history: Vec::new(),
    };

    let mut center = x0.to_vec();
    let f0 = tracker.eval(&center);
    let mut best_val = f0;

    if dim == 0 {
        return NelderMeadResult {
            x: center,
            value: best_val,
            history: tracker.history,
            evals: tracker.evals,
            converged: true,
        };
    }

    let mut step = cfg.initial_step;
    let mut converged = true;
    for cycle in 0..=cfg.restarts {
        if cycle > 0 {
            step *= 0.25;
        }
        let done = run_cycle(&mut tracker, &mut center, &mut best_val, step, cfg);
        converged = converged && done;
        if tracker.evals >= cfg.max_evals {
            converged = false;
            break;
        }
    }

    NelderMeadResult {
        x: center,
        value: best_val,
        history: tracker.history.clone(),
        evals: tracker.evals,
        converged,
    }
}

/// One simplex descent; returns true if it reached `f_tol`. Updates
/// `center`/`best_val` with the cycle's best vertex.
fn run_cycle<F: FnMut(&[f64]) -> f64>(
    tracker: &mut Tracker<F>,
    center: &mut Vec<f64>,
    best_val: &mut f64,
    step: f64,
    cfg: &NelderMeadConfig,
) -> bool {
    let dim = center.len();
    let mut simplex: Vec<Vec<f64>> = vec![center.clone()];
    for i in 0..dim {
        let mut v = center.clone();
        v[i] += step;
        simplex.push(v);
    }
    let mut scores: Vec<f64> = Vec::with_capacity(dim + 1);
    scores.push(*best_val);
    for v in &simplex[1..] {
        if tracker.evals >= cfg.max_evals {
            return false;
        }
        scores.push(tracker.eval(v));
    }

    let mut reached_tol = false;
    while tracker.evals < cfg.max_evals {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        if (scores[worst] - scores[best]).abs() < cfg.f_tol {
            reached_tol = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += simplex[i][d];
            }
        }
        centroid.iter_mut().for_each(|c| *c /= dim as f64);

        let lerp = |scale: f64| -> Vec<f64> {
            (0..dim)
                .map(|d| centroid[d] + scale * (centroid[d] - simplex[worst][d]))
                .collect()
        };

        let reflected = lerp(ALPHA);
        let f_reflected = tracker.eval(&reflected);

        if f_reflected < scores[best] {
            if tracker.evals >= cfg.max_evals {
                simplex[worst] = reflected;
                scores[worst] = f_reflected;
                break;
            }
            let expanded = lerp(GAMMA);
            let f_expanded = tracker.eval(&expanded);
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                scores[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                scores[worst] = f_reflected;
            }
        } else if f_reflected < scores[second_worst] {
            simplex[worst] = reflected;
            scores[worst] = f_reflected;
        } else {
            let contracted = lerp(-RHO);
            if tracker.evals >= cfg.max_evals {
                break;
            }
            let f_contracted = tracker.eval(&contracted);
            if f_contracted < scores[worst] {
                simplex[worst] = contracted;
                scores[worst] = f_contracted;
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[best].clone();
                for i in 0..=dim {
                    if i == best {
                        continue;
                    }
                    for d in 0..dim {
                        simplex[i][d] = anchor[d] + SIGMA * (simplex[i][d] - anchor[d]);
                    }
                    if tracker.evals >= cfg.max_evals {
                        break;
                    }
                    scores[i] = tracker.eval(&simplex[i]);
                }
            }
        }
    }

    let (mut best_idx, mut best_score) = (0, scores[0]);
    for (i, &s) in scores.iter().enumerate() {
        if s < best_score {
            best_idx = i;
            best_score = s;
        }
    }
    if best_score < *best_val {
        *best_val = best_score;
        *center = simplex[best_idx].clone();
    }
    reached_tol
}
