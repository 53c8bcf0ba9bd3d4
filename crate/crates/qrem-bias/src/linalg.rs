//! Dense complex linear algebra helpers used by the simulators and by test
//! oracles: Hermitian matrix functions via a real symmetric embedding, and an
//! operator norm.
//!
//! A complex Hermitian `H = A + iB` embeds into the real symmetric
//! `[[A, -B], [B, A]]`; applying a spectral function to the embedding and
//! mapping eigenvectors `(u; v) -> u + iv` recovers the complex result. The
//! embedding doubles every eigenvalue, which the helpers account for.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

fn embed(h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let e = h[(i, j)];
            m[(i, j)] = e.re;
            m[(i + n, j + n)] = e.re;
            m[(i, j + n)] = -e.im;
            m[(i + n, j)] = e.im;
        }
    }
    m
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let eig = SymmetricEigen::new(embed(h));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Every eigenvalue of H appears twice in the embedding.
    vals.into_iter().step_by(2).collect()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(h)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// `exp(i t H)` for Hermitian `H`, computed spectrally.
pub fn expm_i_hermitian(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let n = h.nrows();
    let eig = SymmetricEigen::new(embed(h));
    // W maps the 2n real eigenvectors (u; v) to complex columns u + iv; then
    // exp(i t H) = W diag(e^{i t l} / 2) W^dagger.
    let mut w = DMatrix::<Complex64>::zeros(n, 2 * n);
    for k in 0..2 * n {
        for i in 0..n {
            w[(i, k)] = Complex64::new(eig.eigenvectors[(i, k)], eig.eigenvectors[(i + n, k)]);
        }
    }
    let mut scaled = w.clone();
    for k in 0..2 * n {
        let ph = Complex64::new(0.0, eig.eigenvalues[k] * t).exp() * 0.5;
        for i in 0..n {
            scaled[(i, k)] *= ph;
        }
    }
    scaled * w.adjoint()
}

/// Spectral (operator 2-) norm.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    let gram = m.adjoint() * m;
    hermitian_eigenvalues(&gram)
        .into_iter()
        .fold(0.0f64, f64::max)
        .max(0.0)
        .sqrt()
}

/// Frobenius distance between `a` and `e^{i phi} b` minimized over the global
/// phase `phi`.
pub fn distance_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let overlap: Complex64 = b
        .iter()
        .zip(a.iter())
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (a - b * phase).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let y = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let vals = hermitian_eigenvalues(&y);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((min_eigenvalue(&y) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn expm_of_pauli_is_cos_plus_i_sin() {
        // exp(i t P) = cos(t) I + i sin(t) P for any Pauli P.
        let y = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let t = 0.7312;
        let u = expm_i_hermitian(&y, t);
        let expected = DMatrix::<Complex64>::identity(2, 2) * c(t.cos(), 0.0) + &y * c(0.0, t.sin());
        assert!((u - expected).norm() < 1e-12);
    }

    #[test]
    fn expm_is_unitary_on_random_hermitian() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let n = 8;
        let mut h = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let e = c(rng.gen::<f64>() - 0.5, if i == j { 0.0 } else { rng.gen::<f64>() - 0.5 });
                h[(i, j)] = e;
                h[(j, i)] = e.conj();
            }
        }
        let u = expm_i_hermitian(&h, 1.3);
        let id = DMatrix::<Complex64>::identity(n, n);
        assert!((&u * u.adjoint() - id).norm() < 1e-11);
    }

    #[test]
    fn operator_norm_of_scaled_unitary() {
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(3.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)]);
        assert!((operator_norm(&x) - 3.0).abs() < 1e-10);
    }

    #[test]
    fn phase_optimized_distance_ignores_global_phase() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        let rotated = &id * Complex64::new(0.0, 1.0);
        assert!(distance_up_to_phase(&rotated, &id) < 1e-12);
    }
}
