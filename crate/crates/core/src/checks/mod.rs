//! Numerical checks of the curvature, volume and bottleneck inequalities on
//! surfaces with closed-form geometry, and a stability experiment for the
//! bundle diagrams.
//!
//! Every check produces a [`Verdict`]; a check whose hypotheses fail is
//! reported as skipped rather than failed.

mod bounds;
mod curvature;
mod stability;
mod volume;

use serde::Serialize;

pub use bounds::{homotopy_radius_bound, HomotopyBound, RadiusTerms};
pub use curvature::{
    check_curvature_monotonicity, check_log_ii_bound, curvature_ratio, TorusCurve,
};
pub use stability::{check_stability, stability_experiment, Perturbation, StabilityRow};
pub use volume::{
    check_normalized_bottleneck, check_volume_bound, torus_quantities, trapezoid_periodic,
    Surface, TorusQuantities, VolumeCheck, L_RATIO_LIMIT, SYS_RATIO_LIMIT,
};

use crate::generators::Torus;
use crate::Result;

/// Outcome of one check. `margin` is positive when the inequality holds
/// with room to spare.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub inputs: serde_json::Value,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(name: &str, inputs: serde_json::Value, lhs: f64, rhs: f64, margin: f64, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            inputs,
            lhs,
            rhs,
            margin,
            pass,
            skipped: false,
            note: None,
        }
    }

    pub fn skipped(name: &str, inputs: serde_json::Value, note: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            inputs,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            pass: false,
            skipped: true,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Failed and not skipped.
    pub fn failed(&self) -> bool {
        !self.skipped && !self.pass
    }
}

/// Names accepted by [`run_suite`]'s filter.
pub const SUITE: [&str; 7] = [
    "curvature_ratio",
    "volume_bound",
    "torus_quantities",
    "normalized_bottleneck",
    "log_ii_bound",
    "homotopy_radius_bound",
    "stability",
];

/// The standard battery on the tori used throughout: `R = 1, r = 0.25` for
/// the curvature and bottleneck checks, `r = 1/1000` for the normalized
/// ratios. `filter` keeps the checks whose name contains it.
pub fn run_suite(filter: Option<&str>) -> Result<Vec<Verdict>> {
    let wanted = |name: &str| filter.is_none_or(|f| name.contains(f));
    let torus = Torus::new(1.0, 0.25)?;
    let mut out = Vec::new();

    if wanted("curvature_ratio") {
        let cs: Vec<f64> = (1..=100).map(|k| k as f64 / 100.0).collect();
        let jet = torus.jet(0.3, 0.7);
        let tube = [0.0, 1.0 / torus.small_r];
        out.push(check_curvature_monotonicity(&jet, &tube, &cs));
        let ratio0 = curvature_ratio(&jet, &tube, 0.0);
        let kappa = jet.normal_curvature(&tube);
        out.push(Verdict::new(
            "curvature_ratio_c0",
            serde_json::json!({"u": 0.3, "v": 0.7, "direction": "tube"}),
            ratio0,
            kappa,
            1e-10 - (ratio0 - kappa).abs(),
            (ratio0 - kappa).abs() <= 1e-10,
        ));
    }
    if wanted("volume_bound") {
        for c in [0.0, 0.1, (1.0f64 - 0.25).powi(2)] {
            out.push(check_volume_bound(&torus, c)?.verdict());
        }
    }
    if wanted("torus_quantities") {
        let q = torus_quantities(1.0, 1e-3, (1.0f64 - 1e-3).powi(2))?;
        out.extend(q.verdicts());
    }
    if wanted("normalized_bottleneck") {
        let top = 12.0 * torus.small_r.powi(2) / std::f64::consts::PI.powi(2);
        let grid: Vec<f64> = (1..=20).map(|k| top * k as f64 / 20.0).collect();
        out.extend(check_normalized_bottleneck(torus.big_r, torus.small_r, &grid)?);
    }
    if wanted("log_ii_bound") {
        for curve in [
            TorusCurve::UCircle { v: std::f64::consts::FRAC_PI_4 },
            TorusCurve::VCircle { u: 0.0 },
            TorusCurve::Geodesic {
                u0: 0.0,
                v0: 0.4,
                angle: 0.7,
                length: std::f64::consts::TAU,
            },
        ] {
            out.push(check_log_ii_bound(&torus, curve, 200)?);
        }
    }
    if wanted("homotopy_radius_bound") {
        let b = homotopy_radius_bound(2.0, 1.0, 10.0)?;
        out.push(b.verdict());
    }
    if wanted("stability") {
        let params = grid_params(24, 8);
        let rows = stability_experiment(
            &torus,
            &params,
            Perturbation::Normal,
            &[0.04, 0.02, 0.01, 0.005, 0.0],
            0.1,
            1,
        )?;
        out.push(check_stability(&rows));
    }
    Ok(out)
}

/// Rectangular `(u, v)` grid with `nu × nv` points.
pub fn grid_params(nu: usize, nv: usize) -> Vec<[f64; 2]> {
    use std::f64::consts::TAU;
    (0..nu)
        .flat_map(|a| (0..nv).map(move |b| [TAU * a as f64 / nu as f64, TAU * b as f64 / nv as f64]))
        .collect()
}

/// Fixed-width table of verdicts.
pub fn summary_table(verdicts: &[Verdict]) -> String {
    let mut out = format!(
        "{:<34} {:>8} {:>14} {:>14} {:>12}\n",
        "check", "status", "lhs", "rhs", "margin"
    );
    for v in verdicts {
        let status = if v.skipped {
            "SKIP"
        } else if v.pass {
            "PASS"
        } else {
            "FAIL"
        };
        out.push_str(&format!(
            "{:<34} {:>8} {:>14.6e} {:>14.6e} {:>12.3e}\n",
            v.name, status, v.lhs, v.rhs, v.margin
        ));
    }
    out
}
