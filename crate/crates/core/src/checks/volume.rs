use std::f64::consts::{PI, TAU};

use serde::Serialize;
use serde_json::json;

use super::Verdict;
use crate::generators::inverse_2x2_or_diag;
use crate::generators::Torus;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// `2π / (2π + 4)`.
pub const SYS_RATIO_LIMIT: f64 = TAU / (TAU + 4.0);
/// `1 / (2π (2π + 4))`.
pub const L_RATIO_LIMIT: f64 = 1.0 / (TAU * (TAU + 4.0));

/// A parametrized surface on the periodic domain `[0, 2π)²`.
pub trait Surface {
    fn ambient_dim(&self) -> usize;
    fn metric_at(&self, u: f64, v: f64) -> Matrix<f64>;
    /// One matrix per unit normal.
    fn second_forms_at(&self, u: f64, v: f64) -> Vec<Matrix<f64>>;
}

impl Surface for Torus {
    fn ambient_dim(&self) -> usize {
        3
    }

    fn metric_at(&self, u: f64, v: f64) -> Matrix<f64> {
        self.metric(u, v)
    }

    fn second_forms_at(&self, u: f64, v: f64) -> Vec<Matrix<f64>> {
        vec![self.second_form(u, v)]
    }
}

/// `g_c = g + c Σ_α h_α g⁻¹ h_α`, the metric pulled back by the lift to
/// position and tangent plane.
fn lifted_metric(g: &Matrix<f64>, forms: &[Matrix<f64>], c: f64) -> Matrix<f64> {
    let ginv = inverse_2x2_or_diag(g);
    let mut out = g.clone();
    for h in forms {
        let term = h.mul(&ginv).mul(h);
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                out[(i, j)] += c * term[(i, j)];
            }
        }
    }
    out
}

fn det2(m: &Matrix<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Trapezoid rule for a `2π`-periodic integrand, doubling the node count
/// from 16 until successive values agree to `rel_tol` (relative to
/// `max(1, |I|)`). Returns the value and the last difference.
pub fn trapezoid_periodic(f: impl Fn(f64) -> f64, rel_tol: f64, max_nodes: usize) -> (f64, f64) {
    let sum = |n: usize| (0..n).map(|k| f(TAU * k as f64 / n as f64)).sum::<f64>() * TAU / n as f64;
    let mut n = 16;
    let mut prev = sum(n);
    loop {
        n *= 2;
        let next = sum(n);
        let diff = (next - prev).abs();
        if diff <= rel_tol * next.abs().max(1.0) || n >= max_nodes {
            return (next, diff);
        }
        prev = next;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeCheck {
    pub c: f64,
    pub vol: f64,
    pub vol_c: f64,
    /// `sup ‖II‖₂` over the quadrature nodes.
    pub ii_norm: f64,
    /// `(1 + c a² min(d, D − d))^{d/2} vol`.
    pub bound: f64,
    /// Difference between the last two refinements of `vol_c`.
    pub refinement_gap: f64,
    pub pass: bool,
}

impl VolumeCheck {
    pub fn verdict(&self) -> Verdict {
        Verdict::new(
            "volume_bound",
            json!({"c": self.c, "ii_norm": self.ii_norm}),
            self.vol_c,
            self.bound,
            self.bound - self.vol_c,
            self.pass,
        )
    }
}

/// Principal-curvature bound `sup ‖II‖₂` from the shape operators.
fn operator_norm(g: &Matrix<f64>, forms: &[Matrix<f64>]) -> f64 {
    let ginv = inverse_2x2_or_diag(g);
    forms
        .iter()
        .map(|h| {
            let s = ginv.mul(h);
            let (a, b, c, d) = (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
            let half = (a + d) / 2.0;
            let disc = (half * half - (a * d - b * c)).max(0.0).sqrt();
            (half + disc).abs().max((half - disc).abs())
        })
        .fold(0.0, f64::max)
}

/// `vol_c` by the tensor trapezoid rule on `[0, 2π)²`, refined by doubling
/// until two successive values agree to `1e−8`.
///
/// Fails with a numerics error when the last two refinements still differ
/// by more than `1e−5`.
pub fn check_volume_bound(surface: &impl Surface, c: f64) -> Result<VolumeCheck> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Parameter(format!("scale must be nonnegative, got {c}")));
    }
    const MAX_NODES: usize = 1024;
    let integrate = |n: usize, c: f64| -> (f64, f64) {
        let mut total = 0.0;
        let mut a = 0.0f64;
        for i in 0..n {
            let u = TAU * i as f64 / n as f64;
            for j in 0..n {
                let v = TAU * j as f64 / n as f64;
                let g = surface.metric_at(u, v);
                let forms = surface.second_forms_at(u, v);
                total += det2(&lifted_metric(&g, &forms, c)).sqrt();
                a = a.max(operator_norm(&g, &forms));
            }
        }
        (total * (TAU / n as f64).powi(2), a)
    };
    let converge = |c: f64| -> Result<(f64, f64, f64)> {
        let mut n = 16;
        let (mut prev, _) = integrate(n, c);
        loop {
            n *= 2;
            let (next, a) = integrate(n, c);
            let gap = (next - prev).abs();
            if gap <= 1e-8 * next.abs().max(1.0) {
                return Ok((next, a, gap));
            }
            if n >= MAX_NODES {
                if gap > 1e-5 * next.abs().max(1.0) {
                    return Err(Error::Numerics(format!(
                        "volume quadrature did not settle: refinements differ by {gap:.3e}"
                    )));
                }
                return Ok((next, a, gap));
            }
            prev = next;
        }
    };
    let (vol, _, _) = converge(0.0)?;
    let (vol_c, a, gap) = converge(c)?;
    let d = 2.0;
    let codim = (surface.ambient_dim() as f64 - d).min(d);
    let bound = (1.0 + c * a * a * codim).powf(d / 2.0) * vol;
    Ok(VolumeCheck {
        c,
        vol,
        vol_c,
        ii_norm: a,
        bound,
        refinement_gap: gap,
        pass: vol_c <= bound * (1.0 + 1e-9),
    })
}

/// Torus quantities under the lifted metric `g_c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusQuantities {
    pub big_r: f64,
    pub small_r: f64,
    pub c: f64,
    /// `4π² R r`.
    pub vol: f64,
    /// `2π √(r² + c) ∫₀^{2π} √((R + r cos v)² + c cos² v) dv`.
    pub vol_c: f64,
    /// `2π √(r² + c) (2πR + 4√c)`.
    pub vol_c_upper: f64,
    /// `min(½ √(4r² + cπ²), R)`.
    pub l_c: f64,
    /// `2π(R − r)`, a lower bound for the systole when `c = (R − r)²`.
    pub sys_lower: f64,
    pub sys_bound_applies: bool,
    /// `sys_lower² / vol_c`.
    pub sys_ratio: f64,
    /// `L_c² / vol_c`.
    pub l_ratio: f64,
    /// `sys_lower² / vol_c_upper`.
    pub sys_ratio_bound: f64,
    /// `L_c² / vol_c_upper`.
    pub l_ratio_bound: f64,
}

pub fn torus_quantities(big_r: f64, small_r: f64, c: f64) -> Result<TorusQuantities> {
    Torus::new(big_r, small_r)?;
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Parameter(format!("scale must be nonnegative, got {c}")));
    }
    let (integral, _) = trapezoid_periodic(
        |v| ((big_r + small_r * v.cos()).powi(2) + c * v.cos().powi(2)).sqrt(),
        1e-13,
        1 << 20,
    );
    let root = (small_r * small_r + c).sqrt();
    let vol_c = TAU * root * integral;
    let vol_c_upper = TAU * root * (TAU * big_r + 4.0 * c.sqrt());
    let l_c = (0.5 * (4.0 * small_r * small_r + c * PI * PI).sqrt()).min(big_r);
    let sys_lower = TAU * (big_r - small_r);
    let target = (big_r - small_r).powi(2);
    Ok(TorusQuantities {
        big_r,
        small_r,
        c,
        vol: TAU * TAU * big_r * small_r,
        vol_c,
        vol_c_upper,
        l_c,
        sys_lower,
        sys_bound_applies: (c - target).abs() <= 1e-12 * target.max(1.0),
        sys_ratio: sys_lower * sys_lower / vol_c,
        l_ratio: l_c * l_c / vol_c,
        sys_ratio_bound: sys_lower * sys_lower / vol_c_upper,
        l_ratio_bound: l_c * l_c / vol_c_upper,
    })
}

impl TorusQuantities {
    /// The ratios against their limits: the bound-based ratios match the
    /// limits for thin tori, and the exact ratios stay above them.
    pub fn verdicts(&self) -> Vec<Verdict> {
        let inputs = json!({"R": self.big_r, "r": self.small_r, "c": self.c});
        if !self.sys_bound_applies {
            return vec![Verdict::skipped(
                "torus_ratios",
                inputs,
                "the systole bound 2π(R − r) needs c = (R − r)²",
            )];
        }
        let tol = 5e-3;
        let near = |name: &str, value: f64, limit: f64| {
            let gap = (value - limit).abs();
            Verdict::new(name, inputs.clone(), value, limit, tol - gap, gap <= tol)
        };
        let above = |name: &str, value: f64, limit: f64| {
            Verdict::new(name, inputs.clone(), value, limit, value - limit, value >= limit - tol)
        };
        vec![
            near("torus_sys_ratio_bound", self.sys_ratio_bound, SYS_RATIO_LIMIT),
            near("torus_l_ratio_bound", self.l_ratio_bound, L_RATIO_LIMIT),
            above("torus_sys_ratio", self.sys_ratio, SYS_RATIO_LIMIT),
            above("torus_l_ratio", self.l_ratio, L_RATIO_LIMIT),
        ]
    }
}

/// The normalized-bottleneck chain
/// `L_c / vol_c^{1/2} ≥ √(4L² + cπ²) / (2 vol_c^{1/2}) > L / vol^{1/2}`
/// on a torus with `L = r`, one verdict per `c`, plus strict increase of
/// the middle term across the grid.
pub fn check_normalized_bottleneck(big_r: f64, small_r: f64, c_grid: &[f64]) -> Result<Vec<Verdict>> {
    let torus = Torus::new(big_r, small_r)?;
    let l = small_r.min(big_r - small_r);
    let a = (0..720)
        .map(|k| {
            let v = TAU * k as f64 / 720.0;
            operator_norm(&torus.metric(0.0, v), &[torus.second_form(0.0, v)])
        })
        .fold(0.0, f64::max);
    let base = json!({"R": big_r, "r": small_r, "ii_norm": a});
    if small_r > big_r - small_r {
        return Ok(vec![Verdict::skipped(
            "normalized_bottleneck",
            base,
            "the tube is not the narrowest bottleneck (r > R − r)",
        )]);
    }
    if l * a > 1.0 + 1e-12 {
        return Ok(vec![Verdict::skipped(
            "normalized_bottleneck",
            base,
            format!("hypothesis L ≤ 1/‖II‖₂ fails: L = {l}, 1/‖II‖₂ = {}", 1.0 / a),
        )]);
    }
    let top = 12.0 * l * l / (PI * PI);
    let vol = TAU * TAU * big_r * small_r;
    let euclidean = l / vol.sqrt();
    let mut out = Vec::new();
    let mut middles = Vec::new();
    let mut sorted = c_grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    for &c in &sorted {
        let inputs = json!({"R": big_r, "r": small_r, "c": c});
        if !(c > 0.0 && c <= top * (1.0 + 1e-12)) {
            out.push(Verdict::skipped(
                "normalized_bottleneck_chain",
                inputs,
                format!("c outside (0, 12L²/π²] = (0, {top}]"),
            ));
            continue;
        }
        let q = torus_quantities(big_r, small_r, c)?;
        let norm = q.vol_c.sqrt();
        let lhs = q.l_c / norm;
        let middle = (4.0 * l * l + c * PI * PI).sqrt() / (2.0 * norm);
        middles.push(middle);
        let margin = (lhs - middle).min(middle - euclidean);
        out.push(
            Verdict::new(
                "normalized_bottleneck_chain",
                inputs,
                lhs,
                euclidean,
                margin,
                lhs >= middle * (1.0 - 1e-12) && middle > euclidean,
            )
            .with_note(format!("middle term {middle:.12e}")),
        );
    }
    if middles.len() >= 2 {
        let step = middles
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        out.push(Verdict::new(
            "normalized_bottleneck_monotone",
            json!({"R": big_r, "r": small_r, "grid_points": middles.len()}),
            step,
            0.0,
            step,
            step > 0.0,
        ));
    }
    Ok(out)
}
