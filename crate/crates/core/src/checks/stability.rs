use serde::Serialize;
use serde_json::json;

use super::Verdict;
use crate::generators::Torus;
use crate::grassmann::Frame;
use crate::linalg::Matrix;
use crate::metric::{distance_matrix, ScaleParams};
use crate::persistence::{bottleneck_per_degree, vr_persistence, PersistenceDiagram};
use crate::tangent::{FrameField, Provenance};
use crate::{PointCloud, Result};

/// Vector field `s` in `q ↦ q + δ s(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Perturbation {
    /// Outward unit normal.
    Normal,
    /// The same vector everywhere (a rigid translation).
    Constant([f64; 3]),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityRow {
    pub delta: f64,
    /// Bottleneck distance to the unperturbed diagrams, per degree.
    pub bottleneck: Vec<f64>,
}

const JACOBIAN_STEP: f64 = 1e-6;

fn perturbed_point(torus: &Torus, s: Perturbation, delta: f64, u: f64, v: f64) -> [f64; 3] {
    let p = torus.point(u, v);
    let dir = match s {
        Perturbation::Normal => torus.normal(u, v),
        Perturbation::Constant(w) => w,
    };
    std::array::from_fn(|k| p[k] + delta * dir[k])
}

/// Points and Gram–Schmidt frames of the central-difference Jacobian of
/// the perturbed parametrization.
fn perturbed_sample(
    torus: &Torus,
    params: &[[f64; 2]],
    s: Perturbation,
    delta: f64,
) -> Result<(PointCloud<f64>, FrameField<f64>)> {
    let h = JACOBIAN_STEP;
    let mut coords = Vec::with_capacity(3 * params.len());
    let mut frames = Vec::with_capacity(params.len());
    for &[u, v] in params {
        coords.extend(perturbed_point(torus, s, delta, u, v));
        let du_p = perturbed_point(torus, s, delta, u + h, v);
        let du_m = perturbed_point(torus, s, delta, u - h, v);
        let dv_p = perturbed_point(torus, s, delta, u, v + h);
        let dv_m = perturbed_point(torus, s, delta, u, v - h);
        let du: Vec<f64> = (0..3).map(|k| (du_p[k] - du_m[k]) / (2.0 * h)).collect();
        let dv: Vec<f64> = (0..3).map(|k| (dv_p[k] - dv_m[k]) / (2.0 * h)).collect();
        frames.push(Frame::orthonormalized(&Matrix::from_columns(&[du, dv]))?);
    }
    Ok((
        PointCloud::new(3, 2, coords)?,
        FrameField::new(frames, true, Provenance::Analytic)?,
    ))
}

fn diagrams(
    torus: &Torus,
    params: &[[f64; 2]],
    s: Perturbation,
    delta: f64,
    scale: &ScaleParams,
    maxdim: usize,
) -> Result<Vec<PersistenceDiagram>> {
    let (cloud, field) = perturbed_sample(torus, params, s, delta)?;
    let d = distance_matrix(&cloud, &field, scale)?;
    vr_persistence(&d, maxdim, None)
}

/// `d_c` diagrams of the torus sample at parameters `params`, displaced by
/// `δ s` for each `δ` in `deltas`, compared with the undisplaced diagrams.
pub fn stability_experiment(
    torus: &Torus,
    params: &[[f64; 2]],
    s: Perturbation,
    deltas: &[f64],
    c: f64,
    maxdim: usize,
) -> Result<Vec<StabilityRow>> {
    let scale = ScaleParams::manual(c)?;
    let base = diagrams(torus, params, s, 0.0, &scale, maxdim)?;
    deltas
        .iter()
        .map(|&delta| {
            let dg = diagrams(torus, params, s, delta, &scale, maxdim)?;
            Ok(StabilityRow {
                delta,
                bottleneck: bottleneck_per_degree(&base, &dg),
            })
        })
        .collect()
}

/// Per degree, the distances must not grow as `δ` shrinks (within `1e−6`),
/// and the value at the smallest `δ` must be at most `0.05×` the value at
/// the largest or below `1e−3`.
pub fn check_stability(rows: &[StabilityRow]) -> Verdict {
    let deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let inputs = json!({ "deltas": deltas });
    if rows.len() < 2 {
        return Verdict::skipped("stability", inputs, "need at least two perturbation sizes");
    }
    let mut sorted: Vec<&StabilityRow> = rows.iter().collect();
    sorted.sort_by(|a, b| b.delta.total_cmp(&a.delta));
    let degrees = sorted[0].bottleneck.len();
    let mut worst_growth = f64::NEG_INFINITY;
    let mut tail_ok = true;
    let (mut last, mut first) = (0.0f64, 0.0f64);
    for k in 0..degrees {
        for w in sorted.windows(2) {
            worst_growth = worst_growth.max(w[1].bottleneck[k] - w[0].bottleneck[k]);
        }
        let hi = sorted[0].bottleneck[k];
        let lo = sorted[sorted.len() - 1].bottleneck[k];
        tail_ok &= lo <= 0.05 * hi || lo <= 1e-3;
        last = last.max(lo);
        first = first.max(hi);
    }
    let pass = worst_growth <= 1e-6 && tail_ok;
    Verdict::new("stability", inputs, last, first, 1e-6 - worst_growth, pass).with_note(format!(
        "largest increase toward smaller δ: {worst_growth:.3e}"
    ))
}
