//! Persistent homology of point clouds in the Grassmann bundle.
//!
//! A sample of a d-manifold in ℝᴰ is lifted to pairs (point, oriented tangent
//! plane) and compared with `d_c(p, q)² = ‖p − q‖² + c · d_Gr⁺(T_p, T_q)²`.
//! The crate covers every step: neighbor graphs, local PCA frames, orientation
//! propagation, distance matrices, Vietoris–Rips persistence, synthetic data
//! and numerical checks of the accompanying geometric bounds.
//!
//! The geometric core is generic over [`Scalar`] (`f32` or `f64`); the
//! persistence, generator and check modules work in `f64`.

pub mod checks;
pub mod cloud;
pub mod error;
pub mod frames_io;
pub mod generators;
pub mod grassmann;
pub mod linalg;
pub mod metric;
pub mod neighbors;
pub mod orientation;
pub mod persistence;
pub mod pipeline;
pub mod scalar;
pub mod tangent;

pub use cloud::PointCloud;
pub use error::{Error, Result};
pub use grassmann::{
    grassmann_distance, oriented_grassmann_distance, principal_angles, projector_distance,
    DetSign, Frame, OrientedDistance, PrincipalAngles,
};
pub use linalg::Matrix;
pub use metric::{
    choose_scale, dc_distance, distance_matrix, euclidean_matrix, DistanceMatrix, MetricTag,
    ScaleMode, ScaleParams,
};
pub use neighbors::{default_k, knn, Edge, NeighborGraph};
pub use orientation::{propagate_orientation, InconsistencyReport, Propagation};
pub use persistence::{vr_persistence, PersistenceDiagram, PersistencePair};
pub use scalar::Scalar;
pub use tangent::{estimate_frame_field, FrameField, Provenance};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type Frame64 = Frame<f64>;
pub type Frame32 = Frame<f32>;
pub type PointCloud64 = PointCloud<f64>;
pub type PointCloud32 = PointCloud<f32>;
pub type FrameField64 = FrameField<f64>;
pub type FrameField32 = FrameField<f32>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type DistanceMatrix32 = DistanceMatrix<f32>;
