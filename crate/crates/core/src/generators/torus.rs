use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::jet::{inverse_2x2_or_diag, SurfaceJet};
use crate::grassmann::Frame;
use crate::linalg::Matrix;
use crate::tangent::{FrameField, Provenance};
use crate::{Error, PointCloud, Result};

/// Step for the central differences behind `∇II`.
pub const JET_FD_STEP: f64 = 1e-5;

/// Torus of revolution `((R + r cos v) cos u, (R + r cos v) sin u, r sin v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Torus {
    pub big_r: f64,
    pub small_r: f64,
}

impl Torus {
    pub fn new(big_r: f64, small_r: f64) -> Result<Self> {
        if !(small_r > 0.0 && small_r < big_r && big_r.is_finite()) {
            return Err(Error::Parameter(format!(
                "torus radii need 0 < r < R, got R = {big_r}, r = {small_r}"
            )));
        }
        Ok(Self { big_r, small_r })
    }

    fn ring(&self, v: f64) -> f64 {
        self.big_r + self.small_r * v.cos()
    }

    pub fn point(&self, u: f64, v: f64) -> [f64; 3] {
        let g = self.ring(v);
        [g * u.cos(), g * u.sin(), self.small_r * v.sin()]
    }

    /// Outward unit normal.
    pub fn normal(&self, u: f64, v: f64) -> [f64; 3] {
        [v.cos() * u.cos(), v.cos() * u.sin(), v.sin()]
    }

    /// Unit vectors along `∂u`, `∂v`; their cross product is the outward normal.
    pub fn tangents(&self, u: f64, v: f64) -> [[f64; 3]; 2] {
        [
            [-u.sin(), u.cos(), 0.0],
            [-v.sin() * u.cos(), -v.sin() * u.sin(), v.cos()],
        ]
    }

    pub fn frame(&self, u: f64, v: f64) -> Frame<f64> {
        let [a, b] = self.tangents(u, v);
        Frame::from_trusted(Matrix::from_columns(&[a.to_vec(), b.to_vec()]))
    }

    /// `diag((R + r cos v)², r²)`.
    pub fn metric(&self, _u: f64, v: f64) -> Matrix<f64> {
        let g = self.ring(v);
        Matrix::from_rows(&[vec![g * g, 0.0], vec![0.0, self.small_r * self.small_r]])
    }

    /// `diag(−(R + r cos v) cos v, −r)` with respect to the outward normal.
    pub fn second_form(&self, _u: f64, v: f64) -> Matrix<f64> {
        Matrix::from_rows(&[vec![-self.ring(v) * v.cos(), 0.0], vec![0.0, -self.small_r]])
    }

    /// `Γ^l_ij` as `gamma[l][(i, j)]`, from central differences of the metric.
    pub fn christoffel(&self, u: f64, v: f64) -> [Matrix<f64>; 2] {
        let h = JET_FD_STEP;
        let dg = [
            diff(|s| self.metric(u + s, v), h),
            diff(|s| self.metric(u, v + s), h),
        ];
        let ginv = inverse_2x2_or_diag(&self.metric(u, v));
        let mut gamma = [Matrix::zeros(2, 2), Matrix::zeros(2, 2)];
        for (l, out) in gamma.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = 0.0;
                    for m in 0..2 {
                        s += ginv[(l, m)] * (dg[i][(m, j)] + dg[j][(m, i)] - dg[m][(i, j)]);
                    }
                    out[(i, j)] = 0.5 * s;
                }
            }
        }
        gamma
    }

    /// `(∇_k h)_ij` for `k = u, v`.
    pub fn covariant_second_form(&self, u: f64, v: f64) -> Vec<Matrix<f64>> {
        let step = JET_FD_STEP;
        let dh = [
            diff(|s| self.second_form(u + s, v), step),
            diff(|s| self.second_form(u, v + s), step),
        ];
        let h = self.second_form(u, v);
        let gamma = self.christoffel(u, v);
        (0..2)
            .map(|k| {
                let mut out = Matrix::zeros(2, 2);
                for i in 0..2 {
                    for j in 0..2 {
                        let mut x = dh[k][(i, j)];
                        for l in 0..2 {
                            x -= gamma[l][(k, i)] * h[(l, j)] + gamma[l][(k, j)] * h[(i, l)];
                        }
                        out[(i, j)] = x;
                    }
                }
                out
            })
            .collect()
    }

    pub fn jet(&self, u: f64, v: f64) -> SurfaceJet {
        SurfaceJet {
            params: vec![u, v],
            position: self.point(u, v).to_vec(),
            frame: self.frame(u, v),
            normals: vec![self.normal(u, v).to_vec()],
            metric: self.metric(u, v),
            second_form: vec![self.second_form(u, v)],
            covariant_second_form: vec![self.covariant_second_form(u, v)],
        }
    }

    /// `⟨∂_i∂_j X, ν⟩` by second differences of the parametrization.
    pub fn second_form_from_positions(&self, u: f64, v: f64, step: f64) -> Matrix<f64> {
        let x = |a: f64, b: f64| self.point(a, b);
        let nu = self.normal(u, v);
        let dot = |p: [f64; 3]| p[0] * nu[0] + p[1] * nu[1] + p[2] * nu[2];
        let comb = |terms: &[(f64, f64, f64)]| {
            let mut acc = [0.0; 3];
            for &(w, a, b) in terms {
                let p = x(a, b);
                for k in 0..3 {
                    acc[k] += w * p[k];
                }
            }
            acc
        };
        let h2 = step * step;
        let uu = comb(&[(1.0, u + step, v), (-2.0, u, v), (1.0, u - step, v)]);
        let vv = comb(&[(1.0, u, v + step), (-2.0, u, v), (1.0, u, v - step)]);
        let uv = comb(&[
            (0.25, u + step, v + step),
            (-0.25, u + step, v - step),
            (-0.25, u - step, v + step),
            (0.25, u - step, v - step),
        ]);
        Matrix::from_rows(&[
            vec![dot(uu) / h2, dot(uv) / h2],
            vec![dot(uv) / h2, dot(vv) / h2],
        ])
    }

    pub fn area(&self) -> f64 {
        TAU * TAU * self.big_r * self.small_r
    }
}

fn diff(f: impl Fn(f64) -> Matrix<f64>, h: f64) -> Matrix<f64> {
    f(h).sub(&f(-h)).scale(1.0 / (2.0 * h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusSampling {
    /// Rectangular `(u, v)` grid; `n` must factor into two sides ≥ 3.
    Grid,
    /// Independent points, uniform with respect to surface area.
    UniformRandom,
}

#[derive(Clone, Debug)]
pub struct TorusSample {
    pub torus: Torus,
    /// `(u, v)` per point.
    pub params: Vec<[f64; 2]>,
    pub cloud: PointCloud<f64>,
    /// Analytic, consistently oriented.
    pub frames: FrameField<f64>,
}

impl TorusSample {
    pub fn jet(&self, i: usize) -> SurfaceJet {
        let [u, v] = self.params[i];
        self.torus.jet(u, v)
    }
}

/// Grid sides `(n_u, n_v)` with `n_v` nearest the aspect-matched `√(n r/R)`.
fn grid_shape(n: usize, torus: &Torus) -> Result<(usize, usize)> {
    let target = (n as f64 * torus.small_r / torus.big_r).sqrt().ln();
    (3..=n / 3)
        .filter(|nv| n % nv == 0)
        .min_by(|a, b| {
            let da = ((*a as f64).ln() - target).abs();
            let db = ((*b as f64).ln() - target).abs();
            da.total_cmp(&db).then(a.cmp(b))
        })
        .map(|nv| (n / nv, nv))
        .ok_or_else(|| Error::Parameter(format!("{n} points do not form a grid with both sides ≥ 3")))
}

pub fn torus_sample(big_r: f64, small_r: f64, n: usize, seed: u64, mode: TorusSampling) -> Result<TorusSample> {
    let torus = Torus::new(big_r, small_r)?;
    if n == 0 {
        return Err(Error::Parameter("sample size must be positive".into()));
    }
    let params: Vec<[f64; 2]> = match mode {
        TorusSampling::Grid => {
            let (nu, nv) = grid_shape(n, &torus)?;
            (0..nu)
                .flat_map(|a| {
                    (0..nv).map(move |b| [TAU * a as f64 / nu as f64, TAU * b as f64 / nv as f64])
                })
                .collect()
        }
        TorusSampling::UniformRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let top = big_r + small_r;
            (0..n)
                .map(|_| {
                    let u = rng.random::<f64>() * TAU;
                    // area element is proportional to R + r cos v
                    let v = loop {
                        let v = rng.random::<f64>() * TAU;
                        if rng.random::<f64>() * top <= torus.ring(v) {
                            break v;
                        }
                    };
                    [u, v]
                })
                .collect()
        }
    };
    let coords: Vec<f64> = params
        .iter()
        .flat_map(|&[u, v]| torus.point(u, v))
        .collect();
    let cloud = PointCloud::new(3, 2, coords)?;
    let frames = FrameField::new(
        params.iter().map(|&[u, v]| torus.frame(u, v)).collect(),
        true,
        Provenance::Analytic,
    )?;
    Ok(TorusSample {
        torus,
        params,
        cloud,
        frames,
    })
}
