use serde_json::json;

use super::Verdict;
use crate::generators::{SurfaceJet, Torus};
use crate::{Error, Result};

/// `√(κ(v)² + c ‖(∇_v II)(v, ·)‖²) / (1 + c ‖II(v, ·)‖²)` for a unit `v`.
pub fn curvature_ratio(jet: &SurfaceJet, v: &[f64], c: f64) -> f64 {
    let kappa = jet.normal_curvature(v);
    let nabla = jet.nabla_ii_row_norm(v);
    let ii = jet.ii_row_norm(v);
    (kappa * kappa + c * nabla * nabla).sqrt() / (1.0 + c * ii * ii)
}

/// Strict decrease of the curvature ratio along `cs` (sorted ascending).
/// Skipped unless `κ(v) ‖II(v, ·)‖ > ‖(∇_v II)(v, ·)‖`.
pub fn check_curvature_monotonicity(jet: &SurfaceJet, v: &[f64], cs: &[f64]) -> Verdict {
    let v = jet.unit(v);
    let inputs = json!({"params": jet.params, "direction": v, "c_grid": cs});
    let kappa = jet.normal_curvature(&v);
    let ii = jet.ii_row_norm(&v);
    let nabla = jet.nabla_ii_row_norm(&v);
    if !(kappa * ii > nabla) {
        return Verdict::skipped(
            "curvature_ratio_monotone",
            inputs,
            format!("hypothesis κ‖II(v,·)‖ > ‖∇II(v,·)‖ fails: {} ≤ {nabla}", kappa * ii),
        );
    }
    let mut sorted = cs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values: Vec<f64> = sorted.iter().map(|&c| curvature_ratio(jet, &v, c)).collect();
    // largest step up; negative when strictly decreasing
    let worst = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    Verdict::new("curvature_ratio_monotone", inputs, worst, 0.0, -worst, worst < 0.0)
}

/// Unit-speed curves on a torus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TorusCurve {
    /// `v` fixed, `u` running once around.
    UCircle { v: f64 },
    /// `u` fixed, a meridian of the tube.
    VCircle { u: f64 },
    /// Geodesic from `(u0, v0)` leaving at `angle` from `∂u`, integrated by
    /// RK4 over the given arc length.
    Geodesic { u0: f64, v0: f64, angle: f64, length: f64 },
}

const CURVE_STEP: f64 = 1e-3;

type State = ([f64; 2], [f64; 2]);

fn geodesic_rhs(torus: &Torus, s: &[f64; 4]) -> [f64; 4] {
    let gamma = torus.christoffel(s[0], s[1]);
    let vel = [s[2], s[3]];
    let mut acc = [0.0; 2];
    for (l, a) in acc.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                *a -= gamma[l][(i, j)] * vel[i] * vel[j];
            }
        }
    }
    [s[2], s[3], acc[0], acc[1]]
}

fn curve_states(torus: &Torus, curve: TorusCurve) -> Vec<State> {
    let (r_big, r) = (torus.big_r, torus.small_r);
    match curve {
        TorusCurve::UCircle { v } => {
            let ring = r_big + r * v.cos();
            let n = (std::f64::consts::TAU * ring / CURVE_STEP).round() as usize;
            (0..=n)
                .map(|k| ([k as f64 * CURVE_STEP / ring, v], [1.0 / ring, 0.0]))
                .collect()
        }
        TorusCurve::VCircle { u } => {
            let n = (std::f64::consts::TAU * r / CURVE_STEP).round() as usize;
            (0..=n)
                .map(|k| ([u, k as f64 * CURVE_STEP / r], [0.0, 1.0 / r]))
                .collect()
        }
        TorusCurve::Geodesic { u0, v0, angle, length } => {
            let ring = r_big + r * v0.cos();
            let mut s = [u0, v0, angle.cos() / ring, angle.sin() / r];
            let n = (length / CURVE_STEP).round() as usize;
            let h = CURVE_STEP;
            let mut out = Vec::with_capacity(n + 1);
            out.push(([s[0], s[1]], [s[2], s[3]]));
            for _ in 0..n {
                let add = |a: &[f64; 4], k: &[f64; 4], w: f64| -> [f64; 4] {
                    std::array::from_fn(|i| a[i] + w * k[i])
                };
                let k1 = geodesic_rhs(torus, &s);
                let k2 = geodesic_rhs(torus, &add(&s, &k1, h / 2.0));
                let k3 = geodesic_rhs(torus, &add(&s, &k2, h / 2.0));
                let k4 = geodesic_rhs(torus, &add(&s, &k3, h));
                s = std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
                out.push(([s[0], s[1]], [s[2], s[3]]));
            }
            out
        }
    }
}

/// `|d/dt log ‖II(γ', ·)‖| ≤ ‖(∇_γ' II)(γ', ·)‖ / ‖II(γ', ·)‖ + 1e−5` at
/// `samples` points of the curve, the derivative by central differences.
pub fn check_log_ii_bound(torus: &Torus, curve: TorusCurve, samples: usize) -> Result<Verdict> {
    let states = curve_states(torus, curve);
    let inputs = json!({
        "R": torus.big_r,
        "r": torus.small_r,
        "curve": format!("{curve:?}"),
        "samples": samples,
    });
    if samples < 2 || states.len() < samples + 2 {
        return Err(Error::Parameter(format!(
            "need 2 ≤ samples ≤ {} for this curve, got {samples}",
            states.len().saturating_sub(2)
        )));
    }
    let log_norm = |k: usize| -> (f64, f64, f64) {
        let ([u, v], vel) = states[k];
        let jet = torus.jet(u, v);
        let ii = jet.ii_row_norm(&vel);
        (ii.ln(), ii, jet.nabla_ii_row_norm(&vel))
    };
    let last = states.len() - 2;
    let mut worst: Option<(f64, f64, f64)> = None;
    for i in 0..samples {
        let k = 1 + i * (last - 1) / (samples - 1);
        let (_, ii, nabla) = log_norm(k);
        if !(ii > 1e-12) {
            return Ok(Verdict::skipped(
                "log_ii_bound",
                inputs,
                format!("II(v, ·) vanishes at sample {i}"),
            ));
        }
        let lhs = ((log_norm(k + 1).0 - log_norm(k - 1).0) / (2.0 * CURVE_STEP)).abs();
        let rhs = nabla / ii;
        if worst.is_none_or(|(_, _, m)| rhs - lhs < m) {
            worst = Some((lhs, rhs, rhs - lhs));
        }
    }
    let (lhs, rhs, margin) = worst.expect("at least two samples");
    Ok(Verdict::new("log_ii_bound", inputs, lhs, rhs, margin, margin >= -1e-5))
}
