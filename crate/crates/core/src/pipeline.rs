//! The end-to-end path from a sample to a pair of distance matrices:
//! neighbors, local PCA, orientation, subsampling, scale selection.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::{choose_scale, distance_matrix, euclidean_matrix, ScaleParams};
use crate::neighbors::{default_k, knn};
use crate::orientation::{propagate_orientation, InconsistencyReport, Propagation};
use crate::tangent::{estimate_frame_field, FrameField};
use crate::{DistanceMatrix, Error, PointCloud, Result, Scalar};

/// `m` distinct indices of `0..n`, uniform without replacement, sorted.
/// Returns all indices when `m ≥ n`.
pub fn subsample_indices(n: usize, m: usize, seed: u64) -> Vec<usize> {
    if m >= n {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, n, m).into_vec();
    idx.sort_unstable();
    idx
}

#[derive(Clone, Debug)]
pub enum OrientedFrames<T> {
    Oriented { field: FrameField<T>, k: usize, flips: usize },
    Inconsistent { k: usize, report: InconsistencyReport },
}

/// k-NN (default `k` from the sample size), local PCA, orientation along
/// the symmetrized neighbor graph.
pub fn estimate_oriented_frames<T: Scalar>(cloud: &PointCloud<T>, k: Option<usize>) -> Result<OrientedFrames<T>> {
    let k = match k {
        Some(k) => k,
        None => default_k(cloud.len(), cloud.intrinsic_dim())?,
    };
    let graph = knn(cloud, k)?;
    let field = estimate_frame_field(cloud, &graph)?;
    Ok(match propagate_orientation(&field, &graph.symmetrize())? {
        Propagation::Consistent { field, flips, .. } => OrientedFrames::Oriented { field, k, flips },
        Propagation::Inconsistent(report) => OrientedFrames::Inconsistent { k, report },
    })
}

#[derive(Clone, Debug)]
pub struct BundleMatrices {
    pub indices: Vec<usize>,
    pub scale: ScaleParams,
    /// Euclidean diameter of the subsample.
    pub diameter: f64,
    pub dc: DistanceMatrix<f64>,
    pub euclidean: DistanceMatrix<f64>,
}

/// `d_c` and Euclidean matrices on the subsample `indices` of an oriented
/// field. `c = None` selects the scale from the subsample diameter.
pub fn bundle_matrices<T: Scalar>(
    cloud: &PointCloud<T>,
    field: &FrameField<T>,
    indices: &[usize],
    c: Option<f64>,
) -> Result<BundleMatrices> {
    if field.len() != cloud.len() {
        return Err(Error::Dimension(format!(
            "{} frames for {} points",
            field.len(),
            cloud.len()
        )));
    }
    let sub = cloud.select(indices);
    let sub_field = field.select(indices);
    let scale = match c {
        Some(c) => ScaleParams::manual(c)?,
        None => choose_scale(&sub)?,
    };
    Ok(BundleMatrices {
        indices: indices.to_vec(),
        scale,
        diameter: sub.diameter().as_f64(),
        dc: distance_matrix(&sub, &sub_field, &scale)?.to_f64(),
        euclidean: euclidean_matrix(&sub).to_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsample_is_deterministic_and_distinct() {
        let a = subsample_indices(100, 30, 4);
        assert_eq!(a, subsample_indices(100, 30, 4));
        assert_eq!(a.len(), 30);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsample_indices(5, 9, 0), vec![0, 1, 2, 3, 4]);
    }
}
