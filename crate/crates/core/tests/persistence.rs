mod common;

use common::{from_fn, points_matrix, random_matrix};
use gph_core::metric::MetricTag;
use gph_core::persistence::{
    bottleneck_per_degree, brute_force_persistence, vr_persistence, PersistenceDiagram,
    PersistencePair,
};
use gph_core::{DistanceMatrix, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bars(d: &PersistenceDiagram) -> Vec<(f64, f64)> {
    d.pairs.iter().map(|p| (p.birth, p.death)).collect()
}

#[test]
fn regular_tetrahedron() {
    let d = from_fn(4, |_, _| 1.0);
    for dgms in [vr_persistence(&d, 1, None).unwrap(), brute_force_persistence(&d, 1).unwrap()] {
        assert_eq!(
            bars(&dgms[0]),
            vec![(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, f64::INFINITY)]
        );
        assert!(dgms[1].is_empty());
    }
}

#[test]
fn square_on_unit_circle() {
    let pts: Vec<Vec<f64>> = (0..4)
        .map(|k| {
            let t = k as f64 * std::f64::consts::FRAC_PI_2;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let d = points_matrix(&pts);
    let side = d.get(0, 1);
    let diag = d.get(0, 2);
    assert!((side - 2f64.sqrt()).abs() < 1e-15 && (diag - 2.0).abs() < 1e-15);
    let fast = vr_persistence(&d, 1, None).unwrap();
    let slow = brute_force_persistence(&d, 1).unwrap();
    assert_eq!(fast, slow);
    let h1 = bars(&fast[1]);
    assert_eq!(h1.len(), 1);
    assert!((h1[0].0 - 2f64.sqrt()).abs() < 1e-15);
    assert!((h1[0].1 - 2.0).abs() < 1e-15);
}

#[test]
fn single_point() {
    let d = DistanceMatrix::from_square(1, vec![0.0], MetricTag::Euclidean, 0.0).unwrap();
    let dg = vr_persistence(&d, 2, None).unwrap();
    assert_eq!(dg.len(), 3);
    assert_eq!(bars(&dg[0]), vec![(0.0, f64::INFINITY)]);
    assert!(dg[1].is_empty() && dg[2].is_empty());
    assert_eq!(brute_force_persistence(&d, 2).unwrap(), dg);
}

#[test]
fn octahedron_has_a_two_sphere() {
    let mut pts = Vec::new();
    for axis in 0..3 {
        for s in [-1.0, 1.0] {
            let mut p = vec![0.0; 3];
            p[axis] = s;
            pts.push(p);
        }
    }
    let d = points_matrix(&pts);
    let dg = vr_persistence(&d, 2, None).unwrap();
    assert_eq!(dg, brute_force_persistence(&d, 2).unwrap());
    let h2 = bars(&dg[2]);
    assert_eq!(h2.len(), 1);
    assert!((h2[0].0 - 2f64.sqrt()).abs() < 1e-15 && (h2[0].1 - 2.0).abs() < 1e-15);
}

#[test]
fn agrees_with_brute_force_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for trial in 0..200 {
        let n = rng.random_range(1..=15);
        let maxdim = rng.random_range(0..=2);
        let d = random_matrix(&mut rng, n);
        let fast = vr_persistence(&d, maxdim, None).unwrap();
        let slow = brute_force_persistence(&d, maxdim).unwrap();
        assert_eq!(fast, slow, "trial {trial}, n = {n}, maxdim = {maxdim}");
    }
}

#[test]
fn threshold_cap_truncates() {
    let pts: Vec<Vec<f64>> = (0..12)
        .map(|k| {
            let t = k as f64 * std::f64::consts::TAU / 12.0;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let d = points_matrix(&pts);
    let full = vr_persistence(&d, 1, None).unwrap();
    assert_eq!(full[1].len(), 1);
    let loop_birth = full[1].pairs[0].birth;
    let capped = vr_persistence(&d, 1, Some(loop_birth * 1.01)).unwrap();
    assert_eq!(capped[1].pairs, vec![PersistencePair::new(loop_birth, f64::INFINITY)]);
}

#[test]
fn rejects_bad_arguments() {
    let d = from_fn(5, |_, _| 1.0);
    assert!(matches!(vr_persistence(&d, 3, None), Err(Error::Parameter(_))));
    let big = from_fn(41, |_, _| 1.0);
    assert!(matches!(brute_force_persistence(&big, 1), Err(Error::Size(_))));
    let asym = DistanceMatrix::from_square(2, vec![0.0, 1.0, 2.0, 0.0], MetricTag::Euclidean, 0.0);
    assert!(matches!(asym, Err(Error::Matrix(_))));
}

#[test]
fn connected_components_count() {
    // three tight clusters far apart, capped below the inter-cluster gap
    let mut pts = Vec::new();
    for c in 0..3 {
        for k in 0..5 {
            pts.push(vec![10.0 * c as f64 + 0.1 * k as f64, 0.0]);
        }
    }
    let d = points_matrix(&pts);
    let capped = vr_persistence(&d, 0, Some(1.0)).unwrap();
    assert_eq!(capped[0].infinite_count(), 3);
    let full = vr_persistence(&d, 0, None).unwrap();
    assert_eq!(full[0].infinite_count(), 1);
}

#[test]
fn perturbation_moves_diagrams_at_most_two_delta() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for &delta in &[1e-3, 1e-2] {
        for _ in 0..3 {
            let n = 50;
            let base = random_matrix(&mut rng, n);
            let noise: Vec<f64> = (0..n * n).map(|_| rng.random_range(-delta..=delta)).collect();
            let moved = from_fn(n, |i, j| (base.get(i, j) + noise[i * n + j]).max(0.0));
            let a = vr_persistence(&base, 1, None).unwrap();
            let b = vr_persistence(&moved, 1, None).unwrap();
            for dist in bottleneck_per_degree(&a, &b) {
                assert!(dist <= 2.0 * delta + 1e-12, "{dist} > 2·{delta}");
            }
        }
    }
}
