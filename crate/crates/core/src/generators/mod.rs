//! Synthetic samples with analytic ground truth, the double-gyre flow with
//! delay embedding, and point-file loaders.

mod curves;
mod gyre;
mod io;
mod jet;
mod torus;

pub use curves::{ellipse_sample, mobius_point, mobius_sample};
pub use gyre::{
    delay_embed, delay_steps, double_gyre_trajectory, IntegrationWarning, Trajectory,
    TrajectoryConfig,
};
pub use io::{
    load_points, parse_points, points_to_csv, save_points_csv, sidecar_path, write_sidecar,
    PointFormat,
};
pub use jet::SurfaceJet;
pub(crate) use jet::inverse_2x2_or_diag;
pub use torus::{torus_sample, Torus, TorusSample, TorusSampling, JET_FD_STEP};
