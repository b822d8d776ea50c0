//! Acceptance criteria 1–10. Each test prints one PASS/FAIL line (written
//! straight to stderr so it survives output capture) and then asserts.

mod common;

use std::io::Write as _;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use common::{random_frame, random_matrix};
use gph_core::checks::{
    check_normalized_bottleneck, check_volume_bound, curvature_ratio, stability_experiment,
    torus_quantities, Perturbation, L_RATIO_LIMIT, SYS_RATIO_LIMIT,
};
use gph_core::generators::{
    delay_embed, delay_steps, double_gyre_trajectory, mobius_sample, torus_sample, Torus,
    TorusSampling, TrajectoryConfig,
};
use gph_core::persistence::brute_force_persistence;
use gph_core::pipeline::{bundle_matrices, estimate_oriented_frames, subsample_indices, OrientedFrames};
use gph_core::tangent::{mean_frame_error, rate_check};
use gph_core::{
    default_k, estimate_frame_field, grassmann_distance, knn, oriented_grassmann_distance,
    principal_angles, projector_distance, propagate_orientation, vr_persistence, PersistenceDiagram,
    Propagation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// criteria run one at a time so each runtime is measured alone
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(id: u8, title: &str, pass: bool, detail: &str, elapsed: Duration, budget: Duration) {
    let in_time = elapsed <= budget;
    let status = if pass && in_time { "PASS" } else { "FAIL" };
    let line = format!(
        "{status} criterion {id:>2} {title}: {detail} [{:.2} s, budget {} s]\n",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} over budget: {elapsed:?} > {budget:?}");
}

fn count_prominent(d: &PersistenceDiagram, min: f64, cap: f64) -> usize {
    d.prominent(min, cap).len()
}

fn bar_lengths(d: &PersistenceDiagram, cap: f64) -> Vec<f64> {
    let mut v: Vec<f64> = d.pairs.iter().map(|p| p.death.min(cap) - p.birth).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v.truncate(3);
    v
}

#[test]
fn criterion_01_grassmann_kernels() {
    let _g = serial();
    const TOL: f64 = 1e-8;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_identity, mut worst_order, mut worst_triangle, mut worst_oriented_triangle) =
        (0.0f64, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..1000 {
        let big = rng.random_range(1..=8);
        let d = rng.random_range(1..=big.min(4));
        let a = random_frame(&mut rng, big, d);
        let b = random_frame(&mut rng, big, d);
        let c = random_frame(&mut rng, big, d);
        let angles = principal_angles(&a, &b).unwrap();
        let hs = projector_distance(&a, &b).unwrap().powi(2);
        let sines: f64 = 2.0 * angles.angles.iter().map(|t| t.sin().powi(2)).sum::<f64>();
        worst_identity = worst_identity.max((hs - sines).abs());

        let un = grassmann_distance(&a, &b).unwrap();
        let or = oriented_grassmann_distance(&a, &b).unwrap().value;
        worst_order = worst_order.min(or - un);

        let (bc, ac) = (grassmann_distance(&b, &c).unwrap(), grassmann_distance(&a, &c).unwrap());
        worst_triangle = worst_triangle.max(ac - un - bc);
        let obc = oriented_grassmann_distance(&b, &c).unwrap().value;
        let oac = oriented_grassmann_distance(&a, &c).unwrap().value;
        worst_oriented_triangle = worst_oriented_triangle.max(oac - or - obc);
    }
    let pass = worst_identity <= TOL
        && worst_order >= 0.0
        && worst_triangle <= TOL
        && worst_oriented_triangle <= TOL;
    verdict(
        1,
        "Grassmann kernels",
        pass,
        &format!(
            "1000 pairs, max |‖P_A−P_B‖²−2Σsin²θ| = {worst_identity:.2e} (tol {TOL:e}), \
             min(oriented − unoriented) = {worst_order:.2e}, max triangle excess = {worst_triangle:.2e} \
             (oriented {worst_oriented_triangle:.2e}, tol {TOL:e})"
        ),
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_02_persistence_oracle() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = Vec::new();
    let mut bars = 0;
    for trial in 0..200 {
        let n = rng.random_range(1..=15);
        let maxdim = rng.random_range(0..=2);
        let d = random_matrix(&mut rng, n);
        let fast = vr_persistence(&d, maxdim, None).unwrap();
        let slow = brute_force_persistence(&d, maxdim).unwrap();
        bars += slow.iter().map(PersistenceDiagram::len).sum::<usize>();
        if fast != slow {
            mismatches.push(trial);
        }
    }
    verdict(
        2,
        "persistence engine vs brute force",
        mismatches.is_empty(),
        &format!("200 matrices, n ≤ 15, maxdim ≤ 2, {bars} bars, exact multiset mismatches: {mismatches:?}"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_03_torus_closed_forms() {
    let _g = serial();
    const TOL: f64 = 5e-3;
    const QUAD_TOL: f64 = 1e-8;
    let start = Instant::now();
    let (big_r, small_r) = (1.0, 1e-3);
    let c = (big_r - small_r) * (big_r - small_r);
    let q = torus_quantities(big_r, small_r, c).unwrap();
    let two_d = check_volume_bound(&Torus::new(big_r, small_r).unwrap(), c).unwrap();
    let quad_gap = (two_d.vol_c - q.vol_c).abs() / q.vol_c;
    let sys_gap = (q.sys_ratio_bound - SYS_RATIO_LIMIT).abs();
    let l_gap = (q.l_ratio_bound - L_RATIO_LIMIT).abs();
    let pass = q.sys_bound_applies
        && sys_gap <= TOL
        && l_gap <= TOL
        && q.sys_ratio >= SYS_RATIO_LIMIT - TOL
        && q.l_ratio >= L_RATIO_LIMIT - TOL
        && quad_gap <= QUAD_TOL
        && two_d.refinement_gap <= QUAD_TOL * two_d.vol_c;
    verdict(
        3,
        "torus closed forms",
        pass,
        &format!(
            "sys²/vol_c bound {:.6} vs {SYS_RATIO_LIMIT:.6}, L²/vol_c bound {:.6} vs {L_RATIO_LIMIT:.6} (tol {TOL:e}); \
             exact ratios {:.4}, {:.5}; 1D vs 2D quadrature rel. gap {quad_gap:.1e} (tol {QUAD_TOL:e})",
            q.sys_ratio_bound, q.l_ratio_bound, q.sys_ratio, q.l_ratio
        ),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_04_curvature_monotonicity() {
    let _g = serial();
    const TOL: f64 = 1e-6;
    let start = Instant::now();
    let torus = Torus::new(1.0, 0.25).unwrap();
    let cs: Vec<f64> = (1..=100).map(|k| k as f64 / 100.0).collect();
    let (mut worst_fit, mut worst_step, mut worst_nabla) = (0.0f64, f64::NEG_INFINITY, 0.0f64);
    for (u, v) in [(0.0, 0.0), (0.3, 0.7), (1.0, 2.0), (2.5, 3.1), (4.0, 5.0)] {
        let jet = torus.jet(u, v);
        let tube = [0.0, 1.0 / torus.small_r];
        worst_nabla = worst_nabla.max(jet.nabla_ii_row_norm(&tube));
        let values: Vec<f64> = cs.iter().map(|&c| curvature_ratio(&jet, &tube, c)).collect();
        for (c, r) in cs.iter().zip(&values) {
            worst_fit = worst_fit.max((r - 4.0 / (1.0 + 16.0 * c)).abs());
        }
        for w in values.windows(2) {
            worst_step = worst_step.max(w[1] - w[0]);
        }
    }
    let pass = worst_fit <= TOL && worst_step < 0.0 && worst_nabla <= TOL;
    verdict(
        4,
        "curvature ratio monotone",
        pass,
        &format!(
            "c ∈ {{0.01..1}} at 5 points: max |ratio − 4/(1+16c)| = {worst_fit:.1e} (tol {TOL:e}), \
             largest step {worst_step:.3e} (< 0), ‖∇II(v,·)‖ ≤ {worst_nabla:.1e}"
        ),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_05_normalized_bottleneck_chain() {
    let _g = serial();
    let start = Instant::now();
    let (big_r, r) = (1.0, 0.25);
    let top = 12.0 * r * r / std::f64::consts::PI.powi(2);
    let grid: Vec<f64> = (1..=20).map(|k| top * k as f64 / 20.0).collect();
    let verdicts = check_normalized_bottleneck(big_r, r, &grid).unwrap();
    let chain: Vec<_> = verdicts.iter().filter(|v| v.name == "normalized_bottleneck_chain").collect();
    let monotone = verdicts.iter().find(|v| v.name == "normalized_bottleneck_monotone");
    let min_margin = chain.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min);
    let pass = chain.len() == 20
        && chain.iter().all(|v| v.pass && !v.skipped)
        && monotone.is_some_and(|v| v.pass);
    verdict(
        5,
        "normalized bottleneck chain",
        pass,
        &format!(
            "R = 1, r = 0.25, 20 values of c in (0, {top:.4}]: {} chain verdicts pass, min margin {min_margin:.3e}, \
             middle-term min step {:.3e}",
            chain.iter().filter(|v| v.pass).count(),
            monotone.map_or(f64::NAN, |v| v.margin)
        ),
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_06_thin_torus_separation() {
    let _g = serial();
    const PROMINENCE: f64 = 0.25;
    const CAP: f64 = 0.7;
    let start = Instant::now();
    let s = torus_sample(1.0, 0.1, 2000, 7, TorusSampling::UniformRandom).unwrap();
    let idx = subsample_indices(2000, 800, 11);
    let m = bundle_matrices(&s.cloud, &s.frames, &idx, None).unwrap();
    let cap = CAP * m.diameter;
    let min = PROMINENCE * m.diameter;
    let dc = vr_persistence(&m.dc, 2, Some(cap)).unwrap();
    let eu = vr_persistence(&m.euclidean, 1, Some(cap)).unwrap();
    let (dc_h1, dc_h2, eu_h1) = (
        count_prominent(&dc[1], min, cap),
        count_prominent(&dc[2], min, cap),
        count_prominent(&eu[1], min, cap),
    );
    let pass = dc_h1 == 2 && dc_h2 >= 1 && eu_h1 == 1;
    verdict(
        6,
        "thin torus separation",
        pass,
        &format!(
            "diam(Y) = {:.3}, c = {:.4}, prominence ≥ {PROMINENCE}·diam, cap {CAP}·diam: \
             d_c H₁ = {dc_h1} (want 2) {:?}, d_c H₂ = {dc_h2} (want ≥ 1) {:?}, Euclidean H₁ = {eu_h1} (want 1) {:?}",
            m.diameter,
            m.scale.c,
            bar_lengths(&dc[1], cap),
            bar_lengths(&dc[2], cap),
            bar_lengths(&eu[1], cap)
        ),
        start.elapsed(),
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_07_double_gyre() {
    let _g = serial();
    const H1_PROMINENCE: f64 = 0.2;
    const H2_PROMINENCE: f64 = 0.05;
    const CAP: f64 = 0.8;
    const K: usize = 400;
    let start = Instant::now();
    let cfg = TrajectoryConfig::default();
    let tr = double_gyre_trajectory(&cfg).unwrap();
    assert!(tr.warning.is_none());
    let steps = delay_steps(5.0, cfg.sample_spacing()).unwrap();
    let cloud = delay_embed(&tr.x, steps, 4, 2).unwrap();
    let field = match estimate_oriented_frames(&cloud, Some(K)).unwrap() {
        OrientedFrames::Oriented { field, .. } => field,
        OrientedFrames::Inconsistent { report, .. } => {
            panic!("orientation failed with {} violating edges", report.violating.len())
        }
    };
    let idx = subsample_indices(cloud.len(), 1000, 11);
    let m = bundle_matrices(&cloud, &field, &idx, None).unwrap();
    let cap = CAP * m.diameter;
    let dc = vr_persistence(&m.dc, 2, Some(cap)).unwrap();
    let eu = vr_persistence(&m.euclidean, 1, None).unwrap();
    let (dc_h1, dc_h2, eu_h1) = (
        count_prominent(&dc[1], H1_PROMINENCE * m.diameter, cap),
        count_prominent(&dc[2], H2_PROMINENCE * m.diameter, cap),
        count_prominent(&eu[1], H1_PROMINENCE * m.diameter, f64::INFINITY),
    );
    let pass = dc_h1 >= 2 && dc_h2 >= 1 && eu_h1 < dc_h1;
    verdict(
        7,
        "double gyre",
        pass,
        &format!(
            "{} delay vectors (τ = {steps} samples, m = 4), k = {K}, diam(Y) = {:.3}, c = {:.4}: \
             d_c H₁ = {dc_h1} (want ≥ 2) {:?}, d_c H₂ = {dc_h2} (want ≥ 1) {:?}, Euclidean H₁ = {eu_h1} (want < d_c) {:?}; \
             thresholds H₁ {H1_PROMINENCE}·diam, H₂ {H2_PROMINENCE}·diam",
            cloud.len(),
            m.diameter,
            m.scale.c,
            bar_lengths(&dc[1], cap),
            bar_lengths(&dc[2], cap),
            bar_lengths(&eu[1], f64::INFINITY)
        ),
        start.elapsed(),
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_08_orientation_propagation() {
    let _g = serial();
    let start = Instant::now();
    let s = torus_sample(1.0, 0.25, 2000, 8, TorusSampling::UniformRandom).unwrap();
    let k = default_k(2000, 2).unwrap();
    let graph = knn(&s.cloud, k).unwrap();
    let est = estimate_frame_field(&s.cloud, &graph).unwrap();
    let torus_violations = match propagate_orientation(&est, &graph.symmetrize()).unwrap() {
        Propagation::Consistent { .. } => 0,
        Propagation::Inconsistent(r) => r.violating.len(),
    };
    let band = mobius_sample(1.0, 0.3, 1000, 8).unwrap();
    let g = knn(&band, 10).unwrap();
    let band_est = estimate_frame_field(&band, &g).unwrap();
    let band_violations = match propagate_orientation(&band_est, &g.symmetrize()).unwrap() {
        Propagation::Consistent { .. } => 0,
        Propagation::Inconsistent(r) => r.violating.len(),
    };
    verdict(
        8,
        "orientation propagation",
        torus_violations == 0 && band_violations >= 1,
        &format!(
            "torus R = 1, r = 0.25, n = 2000, k = {k}: {torus_violations} violating edges (want 0); \
             Möbius n = 1000, k = 10: {band_violations} (want ≥ 1)"
        ),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_09_stability() {
    let _g = serial();
    const MONOTONE_TOL: f64 = 1e-6;
    const ZERO_TOL: f64 = 1e-3;
    let start = Instant::now();
    let torus = Torus::new(1.0, 0.25).unwrap();
    let params = gph_core::checks::grid_params(32, 10);
    let deltas = [0.04, 0.02, 0.01, 0.005, 0.0];
    let rows = stability_experiment(&torus, &params, Perturbation::Normal, &deltas, 0.1, 2).unwrap();
    let mut worst_growth = f64::NEG_INFINITY;
    for w in rows.windows(2) {
        for (hi, lo) in w[0].bottleneck.iter().zip(&w[1].bottleneck) {
            worst_growth = worst_growth.max(lo - hi);
        }
    }
    let at_zero = rows[4].bottleneck.iter().copied().fold(0.0, f64::max);
    let table: Vec<String> = rows
        .iter()
        .map(|r| {
            let b: Vec<String> = r.bottleneck.iter().map(|x| format!("{x:.2e}")).collect();
            format!("δ={}: [{}]", r.delta, b.join(", "))
        })
        .collect();
    verdict(
        9,
        "stability under normal perturbation",
        worst_growth <= MONOTONE_TOL && at_zero <= ZERO_TOL,
        &format!(
            "320-point grid, c = 0.1, H₀–H₂ bottleneck {}; largest increase as δ shrinks {worst_growth:.1e} \
             (tol {MONOTONE_TOL:e}), at δ = 0: {at_zero:.1e} (tol {ZERO_TOL:e})",
            table.join("; ")
        ),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_10_tangent_rate() {
    let _g = serial();
    const BAND: (f64, f64) = (-0.9, -0.15);
    let start = Instant::now();
    let mut data = Vec::new();
    for n in [500usize, 1000, 2000, 4000] {
        let k = default_k(n, 2).unwrap();
        let mut total = 0.0;
        for seed in 0..3 {
            let s = torus_sample(1.0, 0.25, n, 100 + seed, TorusSampling::UniformRandom).unwrap();
            let est = estimate_frame_field(&s.cloud, &knn(&s.cloud, k).unwrap()).unwrap();
            total += mean_frame_error(&est, &s.frames).unwrap();
        }
        data.push((n, total / 3.0));
    }
    let fit = rate_check(&data, 2).unwrap();
    let errors: Vec<String> = data.iter().map(|(n, e)| format!("n={n}: {e:.4}")).collect();
    verdict(
        10,
        "tangent estimation rate",
        (BAND.0..=BAND.1).contains(&fit.slope),
        &format!(
            "{}; slope {:.3} in [{}, {}] (reference {:.3})",
            errors.join(", "),
            fit.slope,
            BAND.0,
            BAND.1,
            fit.theoretical_slope
        ),
        start.elapsed(),
        Duration::from_secs(300),
    );
}
