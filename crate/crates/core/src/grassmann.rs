//! Subspace comparison on the (oriented) Grassmannian.
//!
//! A d-plane in ℝᴰ is carried by a [`Frame`], a D×d matrix with orthonormal
//! columns; the column order fixes its orientation. Everything here reduces
//! to the d×d Gram product `AᵀB`: its singular values are the cosines of the
//! principal angles and the sign of its determinant tells whether the two
//! frames induce the same orientation.

use serde::{Deserialize, Serialize};

use crate::linalg::{determinant, singular_values, Matrix};
use crate::{Error, Result, Scalar};

/// Orthonormal basis of a d-plane in ℝᴰ.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame<T> {
    columns: Matrix<T>,
}

impl<T: Scalar> Frame<T> {
    /// Wrap a D×d matrix, checking `1 ≤ d ≤ D` and orthonormality.
    pub fn new(columns: Matrix<T>) -> Result<Self> {
        let (ambient, plane) = (columns.rows(), columns.cols());
        if plane == 0 || plane > ambient {
            return Err(Error::Dimension(format!(
                "frame must satisfy 1 <= d <= D, got D={ambient}, d={plane}"
            )));
        }
        let defect = columns.orthonormality_defect();
        if !(defect <= T::orthonormal_tol()) {
            return Err(Error::Data(format!(
                "frame columns are not orthonormal (defect {defect})"
            )));
        }
        Ok(Self { columns })
    }

    /// Orthonormalize arbitrary independent columns (Gram–Schmidt keeps the
    /// orientation of the input basis).
    pub fn orthonormalized(columns: &Matrix<T>) -> Result<Self> {
        let q = crate::linalg::orthonormalize_columns(columns)
            .ok_or_else(|| Error::Data("columns are linearly dependent".into()))?;
        Self::new(q)
    }

    /// Span of the first `d` standard basis vectors of ℝᴰ.
    pub fn standard(ambient_dim: usize, plane_dim: usize) -> Result<Self> {
        let mut m = Matrix::zeros(ambient_dim, plane_dim);
        for i in 0..plane_dim.min(ambient_dim) {
            m[(i, i)] = T::one();
        }
        Self::new(m)
    }

    pub(crate) fn from_trusted(columns: Matrix<T>) -> Self {
        debug_assert!(columns.orthonormality_defect() <= T::orthonormal_tol());
        Self { columns }
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.columns.rows()
    }

    #[inline]
    pub fn plane_dim(&self) -> usize {
        self.columns.cols()
    }

    pub fn columns(&self) -> &Matrix<T> {
        &self.columns
    }

    pub fn into_columns(self) -> Matrix<T> {
        self.columns
    }

    /// Reverse the orientation by negating the last basis vector.
    pub fn flip_orientation(&mut self) {
        let last = self.plane_dim() - 1;
        for i in 0..self.ambient_dim() {
            self.columns[(i, last)] = -self.columns[(i, last)];
        }
    }

    pub fn flipped(&self) -> Self {
        let mut f = self.clone();
        f.flip_orientation();
        f
    }

    /// Orthogonal projector `F Fᵀ` onto the plane.
    pub fn projector(&self) -> Matrix<T> {
        self.columns.mul(&self.columns.transpose())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() || self.plane_dim() != other.plane_dim() {
            return Err(Error::Dimension(format!(
                "frames live in different Grassmannians: ({}, {}) vs ({}, {})",
                self.ambient_dim(),
                self.plane_dim(),
                other.ambient_dim(),
                other.plane_dim()
            )));
        }
        Ok(())
    }
}

/// Sign of `det(AᵀB)`, with a zero band for numerically perpendicular planes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetSign {
    Negative,
    Zero,
    Positive,
}

impl DetSign {
    pub fn classify<T: Scalar>(det: T) -> Self {
        if det.abs() <= T::det_zero_band() {
            DetSign::Zero
        } else if det > T::zero() {
            DetSign::Positive
        } else {
            DetSign::Negative
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            DetSign::Negative => -1,
            DetSign::Zero => 0,
            DetSign::Positive => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramSvd<T> {
    /// Singular values of `AᵀB`, descending, clamped to `[0, 1]`.
    pub singular_values: Vec<T>,
    pub det: T,
    pub det_sign: DetSign,
}

/// Principal angles `θ₁ ≥ … ≥ θ_d` together with the orientation sign.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalAngles<T> {
    pub angles: Vec<T>,
    pub det_sign: DetSign,
}

impl<T: Scalar> PrincipalAngles<T> {
    pub fn largest(&self) -> T {
        self.angles.first().copied().unwrap_or_else(T::zero)
    }
}

pub fn gram_svd<T: Scalar>(a: &Frame<T>, b: &Frame<T>) -> Result<GramSvd<T>> {
    a.check_compatible(b)?;
    let gram = a.columns.t_mul(&b.columns);
    let singular_values = singular_values(&gram)
        .into_iter()
        .map(|s| s.max(T::zero()).min(T::one()))
        .collect();
    let det = determinant(&gram);
    Ok(GramSvd {
        singular_values,
        det,
        det_sign: DetSign::classify(det),
    })
}

/// Angles come from `arccos σ` for large angles and from the singular values
/// of `B − A(AᵀB)` (the sines) below π/4, where `arccos` loses half the digits.
pub fn principal_angles<T: Scalar>(a: &Frame<T>, b: &Frame<T>) -> Result<PrincipalAngles<T>> {
    let svd = gram_svd(a, b)?;
    let residual = b.columns.sub(&a.columns.mul(&a.columns.t_mul(&b.columns)));
    let mut sines: Vec<T> = singular_values(&residual)
        .into_iter()
        .map(|s| s.max(T::zero()).min(T::one()))
        .collect();
    sines.reverse();
    // σ descending pairs with sines ascending; both give θ ascending.
    let half = T::lit(0.5);
    let mut angles: Vec<T> = svd
        .singular_values
        .iter()
        .zip(&sines)
        .map(|(&c, &s)| if c * c >= half { s.asin() } else { c.acos() })
        .collect();
    angles.reverse();
    Ok(PrincipalAngles {
        angles,
        det_sign: svd.det_sign,
    })
}

pub fn grassmann_distance<T: Scalar>(a: &Frame<T>, b: &Frame<T>) -> Result<T> {
    Ok(unoriented_from_angles(&principal_angles(a, b)?.angles))
}

fn unoriented_from_angles<T: Scalar>(angles: &[T]) -> T {
    angles.iter().map(|&t| t * t).sum::<T>().sqrt()
}

fn antipodal_from_angles<T: Scalar>(angles: &[T]) -> T {
    let mut it = angles.iter();
    let first = it.next().copied().unwrap_or_else(T::zero);
    let rest: T = it.map(|&t| t * t).sum();
    let far = T::PI() - first;
    (far * far + rest).sqrt()
}

/// Oriented Grassmannian distance plus whether the orientation comparison
/// was numerically undecidable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedDistance<T> {
    pub value: T,
    /// `det(AᵀB)` fell in the zero band. Both branches then agree up to the
    /// band width and the smaller (unoriented) one is returned.
    pub degenerate: bool,
}

pub fn oriented_grassmann_distance<T: Scalar>(
    a: &Frame<T>,
    b: &Frame<T>,
) -> Result<OrientedDistance<T>> {
    Ok(oriented_from_angles(&principal_angles(a, b)?))
}

pub(crate) fn oriented_from_angles<T: Scalar>(pa: &PrincipalAngles<T>) -> OrientedDistance<T> {
    match pa.det_sign {
        DetSign::Positive => OrientedDistance {
            value: unoriented_from_angles(&pa.angles),
            degenerate: false,
        },
        DetSign::Negative => OrientedDistance {
            value: antipodal_from_angles(&pa.angles),
            degenerate: false,
        },
        DetSign::Zero => OrientedDistance {
            value: unoriented_from_angles(&pa.angles).min(antipodal_from_angles(&pa.angles)),
            degenerate: true,
        },
    }
}

/// Hilbert–Schmidt norm of `AAᵀ − BBᵀ`.
pub fn projector_distance<T: Scalar>(a: &Frame<T>, b: &Frame<T>) -> Result<T> {
    a.check_compatible(b)?;
    Ok(a.projector().sub(&b.projector()).frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn frame(cols: &[Vec<f64>]) -> Frame<f64> {
        Frame::new(Matrix::from_columns(cols)).unwrap()
    }

    fn rotated_pair(theta: f64) -> (Frame<f64>, Frame<f64>) {
        let a = frame(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let b = frame(&[vec![theta.cos(), 0.0, theta.sin()], vec![0.0, 1.0, 0.0]]);
        (a, b)
    }

    fn orthogonal_pair() -> (Frame<f64>, Frame<f64>) {
        let a = frame(&[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]]);
        let b = frame(&[vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]]);
        (a, b)
    }

    #[test]
    fn gram_svd_identity() {
        let a = Frame::<f64>::standard(5, 3).unwrap();
        let s = gram_svd(&a, &a).unwrap();
        assert_eq!(s.singular_values, vec![1.0, 1.0, 1.0]);
        assert_eq!(s.det_sign, DetSign::Positive);
    }

    #[test]
    fn gram_svd_orthogonal_planes() {
        let (a, b) = orthogonal_pair();
        let s = gram_svd(&a, &b).unwrap();
        assert_eq!(s.singular_values, vec![0.0, 0.0]);
        assert_eq!(s.det_sign, DetSign::Zero);
    }

    #[test]
    fn gram_svd_rotated_plane() {
        // AᵀB = [[cos .3, 0], [0, 1]] by hand.
        let (a, b) = rotated_pair(0.3);
        let s = gram_svd(&a, &b).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-15);
        assert!((s.singular_values[1] - 0.3f64.cos()).abs() < 1e-15);
        assert_eq!(s.det_sign, DetSign::Positive);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Frame::<f64>::standard(3, 2).unwrap();
        let b = Frame::<f64>::standard(4, 2).unwrap();
        assert!(matches!(gram_svd(&a, &b), Err(Error::Dimension(_))));
        let c = Frame::<f64>::standard(3, 1).unwrap();
        assert!(matches!(grassmann_distance(&a, &c), Err(Error::Dimension(_))));
    }

    #[test]
    fn frame_rejects_non_orthonormal_columns() {
        let m = Matrix::from_columns(&[vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert!(Frame::new(m).is_err());
        assert!(Frame::new(Matrix::<f64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn principal_angle_examples() {
        let a = Frame::<f64>::standard(4, 2).unwrap();
        assert_eq!(principal_angles(&a, &a).unwrap().angles, vec![0.0, 0.0]);

        let (a, b) = rotated_pair(0.3);
        let pa = principal_angles(&a, &b).unwrap();
        assert!((pa.angles[0] - 0.3).abs() < 1e-14);
        assert!(pa.angles[1].abs() < 1e-15);

        let (a, b) = orthogonal_pair();
        let pa = principal_angles(&a, &b).unwrap();
        assert_eq!(pa.angles, vec![PI / 2.0, PI / 2.0]);
    }

    #[test]
    fn grassmann_distance_examples() {
        let a = Frame::<f64>::standard(3, 2).unwrap();
        assert_eq!(grassmann_distance(&a, &a).unwrap(), 0.0);
        let (a, b) = rotated_pair(0.3);
        assert!((grassmann_distance(&a, &b).unwrap() - 0.3).abs() < 1e-14);
        let (a, b) = orthogonal_pair();
        assert!((grassmann_distance(&a, &b).unwrap() - PI / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn oriented_distance_examples() {
        let a = Frame::<f64>::standard(3, 2).unwrap();
        let swapped = frame(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]);
        let d = oriented_grassmann_distance(&a, &swapped).unwrap();
        assert_eq!(d.value, PI);
        assert!(!d.degenerate);
        assert_eq!(oriented_grassmann_distance(&a, &a).unwrap().value, 0.0);

        let (a, b) = rotated_pair(0.3);
        assert!((oriented_grassmann_distance(&a, &b).unwrap().value - 0.3).abs() < 1e-14);
    }

    #[test]
    fn oriented_distance_flags_perpendicular_planes() {
        let (a, b) = orthogonal_pair();
        let d = oriented_grassmann_distance(&a, &b).unwrap();
        assert!(d.degenerate);
        assert!((d.value - PI / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn projector_distance_examples() {
        let a = Frame::<f64>::standard(3, 2).unwrap();
        assert_eq!(projector_distance(&a, &a).unwrap(), 0.0);
        let (a, b) = orthogonal_pair();
        assert!((projector_distance(&a, &b).unwrap() - 2.0).abs() < 1e-15);
        // Explicit projector difference: entries ±sinθcosθ and -sin²θ, sin²θ.
        let (a, b) = rotated_pair(0.3);
        let (s, c) = (0.3f64.sin(), 0.3f64.cos());
        let oracle = (2.0 * (s * s).powi(2) + 2.0 * (s * c).powi(2)).sqrt();
        let got = projector_distance(&a, &b).unwrap();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 0.417_928_684_2).abs() < 1e-9);
    }

    #[test]
    fn clamping_avoids_nan() {
        let eps = 5e-13;
        let m = Matrix::<f64>::from_columns(&[vec![1.0 + eps, 0.0], vec![0.0, 1.0 + eps]]);
        let a = Frame::new(m).unwrap();
        let pa = principal_angles(&a, &a).unwrap();
        assert!(pa.angles.iter().all(|t| t.is_finite() && *t < 1e-11));
        assert!(grassmann_distance(&a, &a).unwrap().is_finite());
    }

    #[test]
    fn works_in_single_precision() {
        let a = Frame::<f32>::standard(3, 2).unwrap();
        let b = Frame::new(Matrix::from_columns(&[
            vec![0.3f32.cos(), 0.0, 0.3f32.sin()],
            vec![0.0, 1.0, 0.0],
        ]))
        .unwrap();
        assert!((grassmann_distance(&a, &b).unwrap() - 0.3).abs() < 1e-3);
        assert_eq!(
            oriented_grassmann_distance(&a, &a.flipped()).unwrap().value,
            std::f32::consts::PI
        );
    }
}
