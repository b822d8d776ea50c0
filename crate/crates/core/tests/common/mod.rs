#![allow(dead_code)]

use gph_core::metric::MetricTag;
use gph_core::{DistanceMatrix, Frame, Matrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Orthonormalized Gaussian `D × d` matrix.
pub fn random_frame(rng: &mut impl Rng, ambient: usize, plane: usize) -> Frame<f64> {
    loop {
        let data: Vec<f64> = (0..ambient * plane).map(|_| rng.sample(StandardNormal)).collect();
        if let Ok(f) = Frame::orthonormalized(&Matrix::from_row_major(ambient, plane, data)) {
            return f;
        }
    }
}

/// `d × d` rotation with determinant `+1`.
pub fn random_rotation(rng: &mut impl Rng, d: usize) -> Matrix<f64> {
    let mut q = random_frame(rng, d, d).into_columns();
    if gph_core::linalg::determinant(&q) < 0.0 {
        for i in 0..d {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> DistanceMatrix<f64> {
    let mut e = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                e[i * n + j] = f(i.min(j), i.max(j));
            }
        }
    }
    DistanceMatrix::from_square(n, e, MetricTag::Euclidean, 0.0).unwrap()
}

pub fn points_matrix(pts: &[Vec<f64>]) -> DistanceMatrix<f64> {
    from_fn(pts.len(), |i, j| {
        pts[i]
            .iter()
            .zip(&pts[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    })
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DistanceMatrix<f64> {
    // mix of metric (points) and arbitrary symmetric matrices, some with ties
    match rng.random_range(0..3) {
        0 => {
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            points_matrix(&pts)
        }
        1 => {
            let vals: Vec<f64> = (0..n * n).map(|_| rng.random_range(0.0..1.0)).collect();
            from_fn(n, |i, j| vals[i * n + j])
        }
        _ => {
            let vals: Vec<f64> = (0..n * n).map(|_| rng.random_range(1..5) as f64).collect();
            from_fn(n, |i, j| vals[i * n + j])
        }
    }
}
