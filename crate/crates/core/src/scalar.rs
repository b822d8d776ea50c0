use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar the geometric kernels are written against.
///
/// The numerical thresholds are tied to the precision of the type: the
/// `f64` values are the ones the pipeline is specified with, the `f32`
/// values are scaled to single precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Band around zero in which `det(AᵀB)` is reported as sign 0.
    fn det_zero_band() -> Self;
    /// Off-diagonal convergence threshold for the Jacobi sweeps.
    fn jacobi_tol() -> Self;
    /// Smallest admissible d-th covariance eigenvalue in local PCA.
    fn degenerate_eigenvalue() -> Self;
    /// Orthonormality tolerance for `Frame` columns.
    fn orthonormal_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f64 {
    fn det_zero_band() -> Self {
        1e-12
    }
    fn jacobi_tol() -> Self {
        1e-14
    }
    fn degenerate_eigenvalue() -> Self {
        1e-14
    }
    fn orthonormal_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn det_zero_band() -> Self {
        1e-5
    }
    fn jacobi_tol() -> Self {
        1e-7
    }
    fn degenerate_eigenvalue() -> Self {
        1e-7
    }
    fn orthonormal_tol() -> Self {
        1e-4
    }
}
