use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grassmann::Frame;
use crate::linalg::Matrix;
use crate::tangent::{FrameField, Provenance};
use crate::{Error, PointCloud, Result};

/// `(a cos t, b sin t)` at `t = 2πi/n`, with unit tangents along `+t`.
pub fn ellipse_sample(a: f64, b: f64, n: usize) -> Result<(PointCloud<f64>, FrameField<f64>)> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Parameter(format!("semi-axes must be positive, got {a}, {b}")));
    }
    if n == 0 {
        return Err(Error::Parameter("sample size must be positive".into()));
    }
    let mut coords = Vec::with_capacity(2 * n);
    let mut frames = Vec::with_capacity(n);
    for i in 0..n {
        let t = TAU * i as f64 / n as f64;
        coords.extend([a * t.cos(), b * t.sin()]);
        let (dx, dy) = (-a * t.sin(), b * t.cos());
        let s = dx.hypot(dy);
        frames.push(Frame::from_trusted(Matrix::from_columns(&[vec![dx / s, dy / s]])));
    }
    Ok((
        PointCloud::new(2, 1, coords)?,
        FrameField::new(frames, true, Provenance::Analytic)?,
    ))
}

/// Möbius band point at band parameter `t` and width coordinate `s`.
pub fn mobius_point(big_r: f64, t: f64, s: f64) -> [f64; 3] {
    let ring = big_r + s * (t / 2.0).cos();
    [ring * t.cos(), ring * t.sin(), s * (t / 2.0).sin()]
}

/// Uniform in `(t, s) ∈ [0, 2π) × [−w, w]`.
pub fn mobius_sample(big_r: f64, w: f64, n: usize, seed: u64) -> Result<PointCloud<f64>> {
    if !(w > 0.0 && w < big_r) {
        return Err(Error::Parameter(format!(
            "Möbius band needs 0 < w < R, got R = {big_r}, w = {w}"
        )));
    }
    if n == 0 {
        return Err(Error::Parameter("sample size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<f64> = (0..n)
        .flat_map(|_| {
            let t = rng.random::<f64>() * TAU;
            let s = (2.0 * rng.random::<f64>() - 1.0) * w;
            mobius_point(big_r, t, s)
        })
        .collect();
    PointCloud::new(3, 2, coords)
}
