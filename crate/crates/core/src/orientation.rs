//! Consistent orientation of a frame field over a neighborhood graph.
//!
//! Frames are oriented along a breadth-first spanning forest: a child whose
//! frame has `det(B_parentᵀ B_child) < 0` gets its last basis vector negated.
//! Every graph edge is then re-checked; a negative determinant on any edge
//! means the sample admits no consistent orientation at this resolution
//! (non-orientable surface, or neighbors farther apart than half the reach).

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::grassmann::{DetSign, Frame};
use crate::linalg::determinant;
use crate::neighbors::Edge;
use crate::tangent::FrameField;
use crate::{Error, PointCloud, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDet {
    pub i: usize,
    pub j: usize,
    pub det: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InconsistencyReport {
    pub violating: Vec<EdgeDet>,
    pub indeterminate: Vec<EdgeDet>,
    pub components: usize,
    pub flips: usize,
}

impl InconsistencyReport {
    /// Plain-text listing, one `i j det` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# orientation inconsistency report");
        let _ = writeln!(out, "# components {} flips {}", self.components, self.flips);
        let _ = writeln!(out, "# violating edges: {}", self.violating.len());
        for e in &self.violating {
            let _ = writeln!(out, "{} {} {:e}", e.i, e.j, e.det);
        }
        let _ = writeln!(out, "# indeterminate edges: {}", self.indeterminate.len());
        for e in &self.indeterminate {
            let _ = writeln!(out, "{} {} {:e}", e.i, e.j, e.det);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum Propagation<T> {
    Consistent {
        field: FrameField<T>,
        flips: usize,
        components: usize,
        /// Edges with `|det| ≤` the zero band; excluded from the verdict.
        indeterminate: Vec<EdgeDet>,
    },
    Inconsistent(InconsistencyReport),
}

impl<T> Propagation<T> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Propagation::Consistent { .. })
    }

    pub fn into_field(self) -> Option<FrameField<T>> {
        match self {
            Propagation::Consistent { field, .. } => Some(field),
            Propagation::Inconsistent(_) => None,
        }
    }
}

fn gram_det<T: Scalar>(a: &Frame<T>, b: &Frame<T>) -> T {
    determinant(&a.columns().t_mul(b.columns()))
}

pub fn propagate_orientation<T: Scalar>(
    field: &FrameField<T>,
    edges: &[Edge],
) -> Result<Propagation<T>> {
    let n = field.len();
    if n == 0 {
        return Err(Error::Parameter("cannot orient an empty frame field".into()));
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(i, j) in edges {
        if i >= n || j >= n {
            return Err(Error::Parameter(format!(
                "edge ({i}, {j}) references a point outside 0..{n}"
            )));
        }
        if i != j {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }

    let mut out = field.clone();
    let frames = out.frames_mut();
    let mut visited = vec![false; n];
    let mut flips = 0;
    let mut components = 0;
    let mut queue = VecDeque::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        components += 1;
        visited[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in &adjacency[u] {
                if visited[w] {
                    continue;
                }
                visited[w] = true;
                if DetSign::classify(gram_det(&frames[u], &frames[w])) == DetSign::Negative {
                    frames[w].flip_orientation();
                    flips += 1;
                }
                queue.push_back(w);
            }
        }
    }

    let mut violating = Vec::new();
    let mut indeterminate = Vec::new();
    let mut checked: Vec<Edge> = edges
        .iter()
        .filter(|(i, j)| i != j)
        .map(|&(i, j)| (i.min(j), i.max(j)))
        .collect();
    checked.sort_unstable();
    checked.dedup();
    for (i, j) in checked {
        let det = gram_det(&frames[i], &frames[j]);
        let record = EdgeDet {
            i,
            j,
            det: det.as_f64(),
        };
        match DetSign::classify(det) {
            DetSign::Negative => violating.push(record),
            DetSign::Zero => indeterminate.push(record),
            DetSign::Positive => {}
        }
    }

    if violating.is_empty() {
        out.set_oriented(true);
        Ok(Propagation::Consistent {
            field: out,
            flips,
            components,
            indeterminate,
        })
    } else {
        Ok(Propagation::Inconsistent(InconsistencyReport {
            violating,
            indeterminate,
            components,
            flips,
        }))
    }
}

/// Half the reach: neighbors closer than this are guaranteed to have
/// positively oriented tangent frames.
pub fn orientation_safety_radius(tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Parameter(format!("reach must be positive, got {tau}")));
    }
    Ok(tau / 2.0)
}

/// Edges longer than `radius`, with their lengths.
pub fn long_edges<T: Scalar>(cloud: &PointCloud<T>, edges: &[Edge], radius: f64) -> Vec<(Edge, f64)> {
    edges
        .iter()
        .filter_map(|&(i, j)| {
            let len = cloud.distance(i, j).as_f64();
            (len > radius).then_some(((i, j), len))
        })
        .collect()
}
