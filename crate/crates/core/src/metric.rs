//! Distance matrices: plain Euclidean, and the bundle distance
//! `d_c(p, q) = sqrt(‖p − q‖² + c · d_Gr⁺(F_p, F_q)²)` that adds the oriented
//! Grassmannian distance between tangent frames to the positional one.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grassmann::{oriented_from_angles, principal_angles, Frame};
use crate::tangent::FrameField;
use crate::{Error, PointCloud, Result, Scalar};

pub const GPDM_MAGIC: &[u8; 4] = b"GPDM";
pub const GPDM_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleMode {
    Auto,
    Manual,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleParams {
    pub c: f64,
    pub mode: ScaleMode,
}

impl ScaleParams {
    pub fn manual(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Parameter(format!("scale c must be positive, got {c}")));
        }
        Ok(Self {
            c,
            mode: ScaleMode::Manual,
        })
    }
}

/// Diameter of the oriented Grassmannian `Gr⁺(D, d)`.
pub fn grassmannian_diameter(ambient_dim: usize, plane_dim: usize) -> f64 {
    let m = plane_dim.min(ambient_dim - plane_dim) as f64;
    std::f64::consts::PI.max(std::f64::consts::FRAC_PI_2 * m.sqrt())
}

/// `c` such that the sample diameter matches the diameter of `Gr⁺_c(D, d)`.
pub fn scale_for_diameter(diameter: f64, ambient_dim: usize, plane_dim: usize) -> Result<ScaleParams> {
    if !(diameter > 0.0) {
        return Err(Error::DegenerateCloud(format!(
            "sample diameter is {diameter}; all points coincide"
        )));
    }
    let g = grassmannian_diameter(ambient_dim, plane_dim);
    Ok(ScaleParams {
        c: diameter * diameter / (g * g),
        mode: ScaleMode::Auto,
    })
}

pub fn choose_scale<T: Scalar>(cloud: &PointCloud<T>) -> Result<ScaleParams> {
    if cloud.len() < 2 {
        return Err(Error::InsufficientPoints(
            "scale selection needs at least two points".into(),
        ));
    }
    scale_for_diameter(
        cloud.diameter().as_f64(),
        cloud.ambient_dim(),
        cloud.intrinsic_dim(),
    )
}

pub fn dc_distance<T: Scalar>(p: &[T], q: &[T], fp: &Frame<T>, fq: &Frame<T>, c: T) -> Result<T> {
    if p.len() != q.len() || p.len() != fp.ambient_dim() {
        return Err(Error::Dimension(format!(
            "points of length {} and {} with frames in R^{}",
            p.len(),
            q.len(),
            fp.ambient_dim()
        )));
    }
    let positional = crate::cloud::squared_distance(p, q);
    let g = oriented_from_angles(&principal_angles(fp, fq)?).value;
    Ok((positional + c * g * g).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricTag {
    Euclidean,
    GrassmannDc,
}

impl MetricTag {
    pub fn code(self) -> u8 {
        match self {
            MetricTag::Euclidean => 0,
            MetricTag::GrassmannDc => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(MetricTag::Euclidean),
            1 => Some(MetricTag::GrassmannDc),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricTag::Euclidean => "euclidean",
            MetricTag::GrassmannDc => "grassmann_dc",
        }
    }
}

/// Dense symmetric distance matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    entries: Vec<T>,
    tag: MetricTag,
    /// Scale used for `d_c`; 0 for Euclidean matrices.
    c: f64,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Validate a row-major n×n matrix: finite, nonnegative, zero diagonal,
    /// symmetric within 1e−12 (relative to the largest entry).
    pub fn from_square(n: usize, entries: Vec<T>, tag: MetricTag, c: f64) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Matrix(format!(
                "{} entries do not form a {n}x{n} matrix",
                entries.len()
            )));
        }
        let scale = entries
            .iter()
            .fold(T::zero(), |m, &x| if x.abs() > m { x.abs() } else { m })
            .max(T::one());
        let tol = T::lit(1e-12) * scale;
        for i in 0..n {
            if entries[i * n + i] != T::zero() {
                return Err(Error::Matrix(format!("diagonal entry {i} is nonzero")));
            }
            for j in 0..n {
                let x = entries[i * n + j];
                if !x.is_finite() || x < T::zero() {
                    return Err(Error::Matrix(format!("entry ({i}, {j}) = {x} is not a distance")));
                }
                if (x - entries[j * n + i]).abs() > tol {
                    return Err(Error::Matrix(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
            }
        }
        Ok(Self { n, entries, tag, c })
    }

    /// Fill from a function on `i < j`.
    pub(crate) fn from_upper(n: usize, tag: MetricTag, c: f64, rows: Vec<Vec<T>>) -> Self {
        let mut entries = vec![T::zero(); n * n];
        for (i, row) in rows.into_iter().enumerate() {
            for (off, x) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                entries[i * n + j] = x;
                entries[j * n + i] = x;
            }
        }
        Self { n, entries, tag, c }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn tag(&self) -> MetricTag {
        self.tag
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn max_entry(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |m, &x| if x > m { x } else { m })
    }

    pub fn to_f64(&self) -> DistanceMatrix<f64> {
        DistanceMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x.as_f64()).collect(),
            tag: self.tag,
            c: self.c,
        }
    }

    pub fn submatrix(&self, indices: &[usize]) -> Self {
        let m = indices.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                entries.push(self.get(i, j));
            }
        }
        Self {
            n: m,
            entries,
            tag: self.tag,
            c: self.c,
        }
    }

    /// Little-endian binary: magic, version, n, tag, c, then the strict lower
    /// triangle row by row.
    pub fn write_gpdm<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(GPDM_MAGIC)?;
        w.write_all(&GPDM_VERSION.to_le_bytes())?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&[self.tag.code()])?;
        w.write_all(&self.c.to_le_bytes())?;
        for i in 1..self.n {
            for j in 0..i {
                w.write_all(&self.get(i, j).as_f64().to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn save_gpdm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_gpdm(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Full square matrix, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 24);
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format!("{:.16e}", self.get(i, j).as_f64()));
            }
            out.push('\n');
        }
        out
    }
}

impl DistanceMatrix<f64> {
    pub fn read_gpdm<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)
            .map_err(|e| Error::Matrix(format!("cannot read distance matrix: {e}")))?;
        Self::from_gpdm_bytes(&buf)
    }

    pub fn load_gpdm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_gpdm_bytes(&bytes)
    }

    pub fn from_gpdm_bytes(bytes: &[u8]) -> Result<Self> {
        const HEADER: usize = 4 + 4 + 4 + 1 + 8;
        if bytes.len() < HEADER || &bytes[..4] != GPDM_MAGIC {
            return Err(Error::Matrix("missing GPDM header".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let version = u32_at(4);
        if version != GPDM_VERSION {
            return Err(Error::Matrix(format!("unsupported GPDM version {version}")));
        }
        let n = u32_at(8) as usize;
        let tag = MetricTag::from_code(bytes[12])
            .ok_or_else(|| Error::Matrix(format!("unknown metric tag {}", bytes[12])))?;
        let c = f64::from_le_bytes(bytes[13..21].try_into().unwrap());
        let count = n * n.saturating_sub(1) / 2;
        if bytes.len() != HEADER + 8 * count {
            return Err(Error::Matrix(format!(
                "expected {count} entries for n = {n}, file has {} bytes of data",
                bytes.len() - HEADER
            )));
        }
        let mut entries = vec![0.0; n * n];
        let mut off = HEADER;
        for i in 1..n {
            for j in 0..i {
                let x = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
                off += 8;
                entries[i * n + j] = x;
                entries[j * n + i] = x;
            }
        }
        Self::from_square(n, entries, tag, c)
    }
}

pub fn euclidean_matrix<T: Scalar>(cloud: &PointCloud<T>) -> DistanceMatrix<T> {
    let n = cloud.len();
    let rows = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| cloud.distance(i, j)).collect())
        .collect();
    DistanceMatrix::from_upper(n, MetricTag::Euclidean, 0.0, rows)
}

/// All-pairs `d_c` from an oriented frame field.
pub fn distance_matrix<T: Scalar>(
    cloud: &PointCloud<T>,
    field: &FrameField<T>,
    params: &ScaleParams,
) -> Result<DistanceMatrix<T>> {
    if !field.is_oriented() {
        return Err(Error::Precondition(
            "d_c needs an oriented frame field; run orientation propagation first".into(),
        ));
    }
    if field.len() != cloud.len() {
        return Err(Error::Dimension(format!(
            "{} frames for {} points",
            field.len(),
            cloud.len()
        )));
    }
    if let Some((ambient, _)) = field.shape() {
        if ambient != cloud.ambient_dim() {
            return Err(Error::Dimension(format!(
                "frames live in R^{ambient}, points in R^{}",
                cloud.ambient_dim()
            )));
        }
    }
    if !(params.c > 0.0) {
        return Err(Error::Parameter(format!("scale c must be positive, got {}", params.c)));
    }
    let n = cloud.len();
    let c = T::lit(params.c);
    let rows: Vec<Result<Vec<T>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| dc_distance(cloud.point(i), cloud.point(j), field.frame(i), field.frame(j), c))
                .collect()
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(DistanceMatrix::from_upper(n, MetricTag::GrassmannDc, params.c, rows))
}
