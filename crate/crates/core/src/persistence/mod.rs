//! Vietoris–Rips persistent homology with `Z/2` coefficients.
//!
//! [`vr_persistence`] is the production engine (cohomology with clearing and
//! emergent pairs); [`brute_force_persistence`] is a plain boundary-matrix
//! reduction kept as an oracle for small inputs.

mod bottleneck;
mod brute;
mod io;
mod rips;

pub use bottleneck::{bottleneck_distance, bottleneck_per_degree};
pub use brute::{brute_force_persistence, BRUTE_FORCE_MAX_POINTS};
pub use io::{diagram_svg, diagrams_to_csv, parse_diagrams_csv, save_diagrams_csv, save_diagram_svg};
pub use rips::{enclosing_radius, vr_persistence, MAX_SUPPORTED_DIM};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub birth: f64,
    /// `f64::INFINITY` for classes alive at the threshold.
    pub death: f64,
}

impl PersistencePair {
    pub fn new(birth: f64, death: f64) -> Self {
        Self { birth, death }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }
}

/// Multiset of bars in one homological degree.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub degree: usize,
    pub pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn new(degree: usize, mut pairs: Vec<PersistencePair>) -> Self {
        sort_pairs(&mut pairs);
        Self { degree, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn finite(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| !p.is_infinite())
    }

    pub fn infinite_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.is_infinite()).count()
    }

    /// Bars with `min(death, cap) − birth ≥ min_persistence`.
    pub fn prominent(&self, min_persistence: f64, cap: f64) -> Vec<PersistencePair> {
        self.pairs
            .iter()
            .copied()
            .filter(|p| p.death.min(cap) - p.birth >= min_persistence)
            .collect()
    }
}

pub(crate) fn sort_pairs(pairs: &mut [PersistencePair]) {
    pairs.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
}
