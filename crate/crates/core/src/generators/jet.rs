use serde::Serialize;

use crate::grassmann::Frame;
use crate::linalg::Matrix;

/// Second-order geometry of an embedded surface at one parameter point, in
/// parameter coordinates.
///
/// `second_form[α]` holds `h^α_ij = ⟨∂_i∂_j X, ν_α⟩` and
/// `covariant_second_form[α][k]` holds `(∇_k h^α)_ij`. Only codimension-one
/// surfaces are produced, so the normal connection does not contribute.
#[derive(Clone, Debug, Serialize)]
pub struct SurfaceJet {
    pub params: Vec<f64>,
    pub position: Vec<f64>,
    #[serde(skip)]
    pub frame: Frame<f64>,
    pub normals: Vec<Vec<f64>>,
    #[serde(skip)]
    pub metric: Matrix<f64>,
    #[serde(skip)]
    pub second_form: Vec<Matrix<f64>>,
    #[serde(skip)]
    pub covariant_second_form: Vec<Vec<Matrix<f64>>>,
}

impl SurfaceJet {
    pub fn dim(&self) -> usize {
        self.metric.rows()
    }

    pub fn metric_inverse(&self) -> Matrix<f64> {
        inverse_2x2_or_diag(&self.metric)
    }

    /// `g(v, v)`.
    pub fn norm_sq(&self, v: &[f64]) -> f64 {
        bilinear(&self.metric, v, v)
    }

    /// `v / |v|_g`.
    pub fn unit(&self, v: &[f64]) -> Vec<f64> {
        let s = self.norm_sq(v).sqrt();
        v.iter().map(|x| x / s).collect()
    }

    /// `|II(v, v)|` for unit `v`.
    pub fn normal_curvature(&self, v: &[f64]) -> f64 {
        self.second_form
            .iter()
            .map(|h| bilinear(h, v, v).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Hilbert–Schmidt norm of the normal-valued covector `II(v, ·)`.
    pub fn ii_row_norm(&self, v: &[f64]) -> f64 {
        let ginv = self.metric_inverse();
        self.second_form
            .iter()
            .map(|h| covector_norm_sq(&ginv, &contract(h, v)))
            .sum::<f64>()
            .sqrt()
    }

    /// Hilbert–Schmidt norm of `(∇_v II)(v, ·)`.
    pub fn nabla_ii_row_norm(&self, v: &[f64]) -> f64 {
        let ginv = self.metric_inverse();
        self.covariant_second_form
            .iter()
            .map(|per_k| {
                let mut dh = Matrix::zeros(self.dim(), self.dim());
                for (k, m) in per_k.iter().enumerate() {
                    for i in 0..self.dim() {
                        for j in 0..self.dim() {
                            dh[(i, j)] += v[k] * m[(i, j)];
                        }
                    }
                }
                covector_norm_sq(&ginv, &contract(&dh, v))
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Operator norm `sup |II(v, w)|` over g-unit `v, w`: the largest
    /// principal curvature in absolute value.
    pub fn ii_operator_norm(&self) -> f64 {
        let ginv = self.metric_inverse();
        self.second_form
            .iter()
            .map(|h| {
                let shape = ginv.mul(h);
                // eigenvalues of the 2×2 shape operator
                let (a, b, c, d) = (shape[(0, 0)], shape[(0, 1)], shape[(1, 0)], shape[(1, 1)]);
                let tr = a + d;
                let det = a * d - b * c;
                let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
                (tr / 2.0 + disc).abs().max((tr / 2.0 - disc).abs())
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn bilinear(m: &Matrix<f64>, a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            s += a[i] * m[(i, j)] * b[j];
        }
    }
    s
}

fn contract(m: &Matrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| v[i] * m[(i, j)]).sum())
        .collect()
}

fn covector_norm_sq(ginv: &Matrix<f64>, a: &[f64]) -> f64 {
    bilinear(ginv, a, a)
}

pub(crate) fn inverse_2x2_or_diag(m: &Matrix<f64>) -> Matrix<f64> {
    match m.rows() {
        1 => Matrix::from_rows(&[vec![1.0 / m[(0, 0)]]]),
        2 => {
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            Matrix::from_rows(&[
                vec![m[(1, 1)] / det, -m[(0, 1)] / det],
                vec![-m[(1, 0)] / det, m[(0, 0)] / det],
            ])
        }
        k => panic!("metric inverse implemented for surfaces and curves, got dimension {k}"),
    }
}
