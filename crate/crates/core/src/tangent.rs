//! Tangent planes by local PCA.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grassmann::{grassmann_distance, Frame};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::neighbors::NeighborGraph;
use crate::{Error, PointCloud, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Estimated,
    Analytic,
}

/// One frame per sample point. `oriented` is set only by orientation
/// propagation (or by generators whose frames come from a global
/// parametrization).
#[derive(Clone, Debug, PartialEq)]
pub struct FrameField<T> {
    frames: Vec<Frame<T>>,
    oriented: bool,
    provenance: Provenance,
}

impl<T: Scalar> FrameField<T> {
    pub fn new(frames: Vec<Frame<T>>, oriented: bool, provenance: Provenance) -> Result<Self> {
        if let Some(first) = frames.first() {
            let shape = (first.ambient_dim(), first.plane_dim());
            if let Some(bad) = frames
                .iter()
                .position(|f| (f.ambient_dim(), f.plane_dim()) != shape)
            {
                return Err(Error::Dimension(format!(
                    "frame {bad} does not match the (D, d) = {shape:?} of frame 0"
                )));
            }
        }
        Ok(Self {
            frames,
            oriented,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn frames(&self) -> &[Frame<T>] {
        &self.frames
    }

    pub fn frame(&self, i: usize) -> &Frame<T> {
        &self.frames[i]
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `(D, d)` of the frames, if any.
    pub fn shape(&self) -> Option<(usize, usize)> {
        self.frames
            .first()
            .map(|f| (f.ambient_dim(), f.plane_dim()))
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            frames: indices.iter().map(|&i| self.frames[i].clone()).collect(),
            oriented: self.oriented,
            provenance: self.provenance,
        }
    }

    pub(crate) fn frames_mut(&mut self) -> &mut [Frame<T>] {
        &mut self.frames
    }

    pub(crate) fn set_oriented(&mut self, oriented: bool) {
        self.oriented = oriented;
    }

    pub fn into_frames(self) -> Vec<Frame<T>> {
        self.frames
    }
}

/// Top-`d` principal directions of `{center} ∪ neighbors`, centered at the
/// neighborhood mean.
///
/// Each returned column has its largest-magnitude entry positive (ties go to
/// the lower coordinate index), so the output is deterministic before any
/// orientation is imposed.
pub fn local_pca_frame<T: Scalar>(
    cloud: &PointCloud<T>,
    center: usize,
    neighbors: &[usize],
    d: usize,
) -> Result<Frame<T>> {
    let dim = cloud.ambient_dim();
    if d == 0 || d > dim {
        return Err(Error::Dimension(format!(
            "plane dimension {d} must lie in 1..={dim}"
        )));
    }
    if neighbors.len() < d {
        return Err(Error::Parameter(format!(
            "local PCA in dimension {d} needs at least {d} neighbors, got {}",
            neighbors.len()
        )));
    }
    let mut members = Vec::with_capacity(neighbors.len() + 1);
    members.push(center);
    members.extend(neighbors.iter().copied().filter(|&j| j != center));

    let m = T::from_usize(members.len()).expect("count fits scalar");
    let mut mean = vec![T::zero(); dim];
    for &j in &members {
        for (acc, &x) in mean.iter_mut().zip(cloud.point(j)) {
            *acc = *acc + x;
        }
    }
    for x in &mut mean {
        *x = *x / m;
    }

    let mut cov = Matrix::<T>::zeros(dim, dim);
    let mut centered = vec![T::zero(); dim];
    for &j in &members {
        for ((c, &x), &mu) in centered.iter_mut().zip(cloud.point(j)).zip(&mean) {
            *c = x - mu;
        }
        for a in 0..dim {
            for b in a..dim {
                cov[(a, b)] = cov[(a, b)] + centered[a] * centered[b];
            }
        }
    }
    for a in 0..dim {
        for b in a..dim {
            let v = cov[(a, b)] / m;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }

    let eig = symmetric_eigen(&cov);
    let lambda_d = eig.values[d - 1];
    if !(lambda_d > T::degenerate_eigenvalue()) {
        return Err(Error::DegenerateNeighborhood {
            index: center,
            reason: format!("covariance eigenvalue {d} is {lambda_d}"),
        });
    }

    let mut basis = Matrix::zeros(dim, d);
    for col in 0..d {
        let mut v = eig.vectors.column(col);
        let mut lead = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > v[lead].abs() {
                lead = i;
            }
        }
        if v[lead] < T::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        basis.set_column(col, &v);
    }
    Ok(Frame::from_trusted(basis))
}

/// Local PCA at every point over `{i} ∪ graph.neighbors(i)`.
///
/// On failure the error refers to the lowest offending index.
pub fn estimate_frame_field<T: Scalar>(
    cloud: &PointCloud<T>,
    graph: &NeighborGraph,
) -> Result<FrameField<T>> {
    if graph.len() != cloud.len() {
        return Err(Error::Dimension(format!(
            "graph has {} lists for {} points",
            graph.len(),
            cloud.len()
        )));
    }
    let d = cloud.intrinsic_dim();
    let results: Vec<Result<Frame<T>>> = (0..cloud.len())
        .into_par_iter()
        .map(|i| local_pca_frame(cloud, i, graph.neighbors(i), d))
        .collect();
    let frames = results.into_iter().collect::<Result<Vec<_>>>()?;
    FrameField::new(frames, false, Provenance::Estimated)
}

/// Mean unoriented Grassmann distance between matching frames.
pub fn mean_frame_error<T: Scalar>(estimated: &FrameField<T>, truth: &FrameField<T>) -> Result<T> {
    if estimated.len() != truth.len() || estimated.is_empty() {
        return Err(Error::Dimension(format!(
            "cannot compare {} frames against {}",
            estimated.len(),
            truth.len()
        )));
    }
    let mut total = T::zero();
    for (a, b) in estimated.frames().iter().zip(truth.frames()) {
        total = total + grassmann_distance(a, b)?;
    }
    Ok(total / T::from_usize(estimated.len()).expect("count fits scalar"))
}

/// Log–log least-squares fit of tangent error against sample size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// `−3 / (2(d + 2))`, the rate predicted for ε-ball local PCA.
    pub theoretical_slope: f64,
}

pub fn rate_check(errors_by_n: &[(usize, f64)], intrinsic_dim: usize) -> Result<RateFit> {
    if errors_by_n.len() < 3 {
        return Err(Error::Data(format!(
            "rate fit needs at least 3 sample sizes, got {}",
            errors_by_n.len()
        )));
    }
    if let Some(&(n, e)) = errors_by_n.iter().find(|(n, e)| !(*e > 0.0) || *n == 0) {
        return Err(Error::Data(format!(
            "errors and sample sizes must be positive (n = {n}, error = {e})"
        )));
    }
    let xs: Vec<f64> = errors_by_n.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = errors_by_n.iter().map(|(_, e)| e.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Data("sample sizes must not all be equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
        theoretical_slope: -3.0 / (2.0 * (intrinsic_dim as f64 + 2.0)),
    })
}
