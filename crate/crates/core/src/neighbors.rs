//! Exact k-nearest-neighbor graphs.
//!
//! Brute force over all pairs; ties in distance go to the smaller index so
//! the graph is identical across runs and thread counts.

use rayon::prelude::*;

use crate::{Error, PointCloud, Result, Scalar};

/// Undirected edge `(i, j)` with `i < j`.
pub type Edge = (usize, usize);

/// Neighborhood size `round(n^{2/(d+2)})`, clamped to `[d + 1, n − 1]`.
pub fn default_k(n: usize, intrinsic_dim: usize) -> Result<usize> {
    if n < intrinsic_dim + 2 {
        return Err(Error::InsufficientPoints(format!(
            "need at least d + 2 = {} points, got {n}",
            intrinsic_dim + 2
        )));
    }
    let raw = (n as f64).powf(2.0 / (intrinsic_dim as f64 + 2.0)).round() as usize;
    Ok(raw.clamp(intrinsic_dim + 1, n - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborGraph {
    k: usize,
    lists: Vec<Vec<usize>>,
}

impl NeighborGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// Neighbors of `i`, nearest first.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.lists[i]
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    /// Undirected edge set: `(i, j)` is present iff either endpoint lists the
    /// other. Sorted, without duplicates.
    pub fn symmetrize(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self
            .lists
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&j| (i.min(j), i.max(j))))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

pub fn knn<T: Scalar>(cloud: &PointCloud<T>, k: usize) -> Result<NeighborGraph> {
    let n = cloud.len();
    if k == 0 || k >= n {
        return Err(Error::Parameter(format!(
            "k must lie in 1..={} for {n} points, got {k}",
            n.saturating_sub(1)
        )));
    }
    let lists = (0..n)
        .into_par_iter()
        .map(|i| nearest(cloud, i, k))
        .collect();
    Ok(NeighborGraph { k, lists })
}

fn nearest<T: Scalar>(cloud: &PointCloud<T>, i: usize, k: usize) -> Vec<usize> {
    let p = cloud.point(i);
    let mut cand: Vec<(T, usize)> = (0..cloud.len())
        .filter(|&j| j != i)
        .map(|j| (crate::cloud::squared_distance(p, cloud.point(j)), j))
        .collect();
    let by_dist = |a: &(T, usize), b: &(T, usize)| {
        a.0.partial_cmp(&b.0)
            .expect("finite distances")
            .then(a.1.cmp(&b.1))
    };
    if k < cand.len() {
        cand.select_nth_unstable_by(k - 1, by_dist);
        cand.truncate(k);
    }
    cand.sort_unstable_by(by_dist);
    // a fresh allocation: collecting in place would keep the n-sized buffer
    let mut out = Vec::with_capacity(cand.len());
    out.extend(cand.iter().map(|&(_, j)| j));
    out
}
