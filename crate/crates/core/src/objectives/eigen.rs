//! Extreme eigenvalues of symmetric positive semidefinite matrices.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;

use crate::base::seeded_rng;

const MAX_ITERS: usize = 200_000;
const REL_TOL: f64 = 1e-14;

fn start_vector(d: usize) -> DVector<f64> {
    let mut rng = seeded_rng(0x5eed);
    let v = DVector::from_fn(d, |_, _| rng.gen::<f64>() + 0.5);
    let n = v.norm();
    v / n
}

/// Iterates `v <- apply(v)/||apply(v)||` until the Rayleigh quotient settles.
fn power_iteration(d: usize, apply: impl Fn(&DVector<f64>) -> DVector<f64>) -> f64 {
    let mut v = start_vector(d);
    let mut lambda = f64::NAN;
    let mut calm = 0;
    for _ in 0..MAX_ITERS {
        let w = apply(&v);
        let next = v.dot(&w);
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        v = w / n;
        if (next - lambda).abs() <= REL_TOL * next.abs() {
            calm += 1;
            if calm >= 3 {
                return next;
            }
        } else {
            calm = 0;
        }
        lambda = next;
    }
    lambda
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
pub fn largest_eigenvalue(q: &DMatrix<f64>) -> f64 {
    power_iteration(q.nrows(), |v| q * v)
}

/// Smallest eigenvalue of a symmetric PSD matrix by inverse iteration on a
/// Cholesky factor. Numerically singular matrices (no factor, or a smallest
/// eigenvalue below `1e-12` times the largest) report 0.
pub fn smallest_eigenvalue(q: &DMatrix<f64>, largest: f64) -> f64 {
    let Some(chol) = Cholesky::new(q.clone()) else {
        return 0.0;
    };
    let mu = power_iteration(q.nrows(), |v| chol.solve(v));
    if mu.is_nan() || mu <= 0.0 {
        return 0.0;
    }
    let lambda = 1.0 / mu;
    if lambda < 1e-12 * largest {
        0.0
    } else {
        lambda
    }
}
