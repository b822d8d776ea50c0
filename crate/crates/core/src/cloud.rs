use crate::{Error, Result, Scalar};

/// `n` points in ℝᴰ sampled from a d-dimensional manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud<T> {
    ambient_dim: usize,
    intrinsic_dim: usize,
    coords: Vec<T>,
}

impl<T: Scalar> PointCloud<T> {
    /// `coords` is row-major, one point per row.
    pub fn new(ambient_dim: usize, intrinsic_dim: usize, coords: Vec<T>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::Dimension("ambient dimension must be positive".into()));
        }
        if intrinsic_dim == 0 || intrinsic_dim > ambient_dim {
            return Err(Error::Dimension(format!(
                "intrinsic dimension {intrinsic_dim} must lie in 1..={ambient_dim}"
            )));
        }
        if coords.is_empty() || coords.len() % ambient_dim != 0 {
            return Err(Error::Data(format!(
                "{} coordinates do not form a nonempty set of {ambient_dim}-vectors",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite coordinate in point {}",
                pos / ambient_dim
            )));
        }
        Ok(Self {
            ambient_dim,
            intrinsic_dim,
            coords,
        })
    }

    pub fn from_points(intrinsic_dim: usize, points: &[Vec<T>]) -> Result<Self> {
        let ambient = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::Dimension("points have differing lengths".into()));
        }
        Self::new(ambient, intrinsic_dim, points.concat())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.ambient_dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.ambient_dim..(i + 1) * self.ambient_dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[T]> {
        self.coords.chunks_exact(self.ambient_dim)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    #[inline]
    pub fn squared_distance(&self, i: usize, j: usize) -> T {
        squared_distance(self.point(i), self.point(j))
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> T {
        self.squared_distance(i, j).sqrt()
    }

    /// Points at the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.ambient_dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self {
            ambient_dim: self.ambient_dim,
            intrinsic_dim: self.intrinsic_dim,
            coords,
        }
    }

    pub fn map_points(&self, mut f: impl FnMut(&[T]) -> Vec<T>) -> Result<Self> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.points() {
            coords.extend(f(p));
        }
        Self::new(self.ambient_dim, self.intrinsic_dim, coords)
    }

    /// Largest pairwise Euclidean distance (exact, O(n²)).
    pub fn diameter(&self) -> T {
        let n = self.len();
        let mut best = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(self.squared_distance(i, j));
            }
        }
        best.sqrt()
    }

    pub fn with_intrinsic_dim(mut self, intrinsic_dim: usize) -> Result<Self> {
        if intrinsic_dim == 0 || intrinsic_dim > self.ambient_dim {
            return Err(Error::Dimension(format!(
                "intrinsic dimension {intrinsic_dim} must lie in 1..={}",
                self.ambient_dim
            )));
        }
        self.intrinsic_dim = intrinsic_dim;
        Ok(self)
    }
}

#[inline]
pub fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum()
}
