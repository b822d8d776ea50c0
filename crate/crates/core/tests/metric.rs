use gph_core::generators::{torus_sample, Torus, TorusSampling};
use gph_core::metric::GPDM_MAGIC;
use gph_core::pipeline::subsample_indices;
use gph_core::{
    dc_distance, distance_matrix, euclidean_matrix, oriented_grassmann_distance, vr_persistence,
    DistanceMatrix, Error, FrameField, MetricTag, PointCloud, Provenance, ScaleParams,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn torus(n: usize, seed: u64) -> (PointCloud<f64>, FrameField<f64>) {
    let s = torus_sample(1.0, 0.3, n, seed, TorusSampling::UniformRandom).unwrap();
    (s.cloud, s.frames)
}

#[test]
fn vanishing_scale_recovers_euclidean() {
    let (cloud, field) = torus(200, 1);
    let dc = distance_matrix(&cloud, &field, &ScaleParams::manual(1e-12).unwrap()).unwrap();
    let eu = euclidean_matrix(&cloud);
    for i in 0..cloud.len() {
        for j in 0..cloud.len() {
            assert!((dc.get(i, j) - eu.get(i, j)).abs() < 1e-5);
        }
    }
}

#[test]
fn dc_dominates_euclidean_strictly_where_planes_differ() {
    let (cloud, field) = torus(300, 2);
    let dc = distance_matrix(&cloud, &field, &ScaleParams::manual(0.2).unwrap()).unwrap();
    let eu = euclidean_matrix(&cloud);
    assert_eq!(dc.tag(), MetricTag::GrassmannDc);
    assert_eq!(eu.tag(), MetricTag::Euclidean);
    for i in 0..cloud.len() {
        assert_eq!(dc.get(i, i), 0.0);
        for j in 0..cloud.len() {
            assert!(dc.get(i, j) >= eu.get(i, j));
            assert_eq!(dc.get(i, j), dc.get(j, i));
            let g = oriented_grassmann_distance(field.frame(i), field.frame(j)).unwrap().value;
            if i != j && g > 1e-6 {
                assert!(dc.get(i, j) > eu.get(i, j), "({i}, {j})");
            }
        }
    }
}

#[test]
fn tube_bottleneck_pair() {
    let (big_r, r) = (1.0, 0.25);
    let t = Torus::new(big_r, r).unwrap();
    let p = t.point(0.0, 0.0);
    let q = t.point(0.0, PI);
    assert!((p[0] - (big_r + r)).abs() < 1e-15 && (q[0] - (big_r - r)).abs() < 1e-15);
    for c in [0.01, 0.1, 1.0, 4.0] {
        let d = dc_distance(&p, &q, &t.frame(0.0, 0.0), &t.frame(0.0, PI), c).unwrap();
        let expect = (4.0 * r * r + c * PI * PI).sqrt();
        assert!((d - expect).abs() < 1e-12, "{d} vs {expect}");
    }
}

#[test]
fn hand_triangle_matches_scalar_calls() {
    let t = Torus::new(2.0, 0.5).unwrap();
    let params = [(0.0, 0.0), (0.4, 1.0), (2.0, -2.5)];
    let pts: Vec<Vec<f64>> = params.iter().map(|&(u, v)| t.point(u, v).to_vec()).collect();
    let cloud = PointCloud::from_points(2, &pts).unwrap();
    let frames = params.iter().map(|&(u, v)| t.frame(u, v)).collect();
    let field = FrameField::new(frames, true, Provenance::Analytic).unwrap();
    let m = distance_matrix(&cloud, &field, &ScaleParams::manual(0.7).unwrap()).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let d = dc_distance(&pts[i], &pts[j], field.frame(i), field.frame(j), 0.7).unwrap();
            assert_eq!(m.get(i, j), if i == j { 0.0 } else { d });
        }
    }
}

#[test]
fn unoriented_field_is_rejected() {
    let (cloud, field) = torus(20, 3);
    let raw = FrameField::new(field.into_frames(), false, Provenance::Estimated).unwrap();
    let err = distance_matrix(&cloud, &raw, &ScaleParams::manual(1.0).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

#[test]
fn euclidean_examples() {
    let dup = PointCloud::new(2, 1, vec![0.3, 0.3, 0.3, 0.3]).unwrap();
    assert_eq!(euclidean_matrix(&dup).get(0, 1), 0.0);
}

#[test]
fn larger_scale_delays_every_merge() {
    let (cloud, field) = torus(120, 4);
    let deaths = |c: f64| -> Vec<f64> {
        let m = distance_matrix(&cloud, &field, &ScaleParams::manual(c).unwrap()).unwrap();
        let dg = vr_persistence(&m, 0, None).unwrap();
        let mut d: Vec<f64> = dg[0].finite().map(|p| p.death).collect();
        d.sort_by(f64::total_cmp);
        d
    };
    let mut last = deaths(0.001);
    for c in [0.01, 0.1, 1.0] {
        let next = deaths(c);
        assert_eq!(next.len(), last.len());
        // sorted MST weights are monotone when every edge weight is
        assert!(next.iter().zip(&last).all(|(a, b)| a >= b));
        last = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn triangle_inequality_on_random_subsets(seed in any::<u64>(), c in 0.01f64..5.0) {
        let (cloud, field) = torus(400, seed);
        let idx = subsample_indices(400, 50, seed ^ 7);
        let sub = cloud.select(&idx);
        let m = distance_matrix(&sub, &field.select(&idx), &ScaleParams::manual(c).unwrap()).unwrap();
        for i in 0..50 {
            for j in 0..50 {
                prop_assert_eq!(m.get(i, j), m.get(j, i));
                for k in 0..50 {
                    prop_assert!(m.get(i, k) <= m.get(i, j) + m.get(j, k) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn scaling_covariance(seed in any::<u64>(), lambda in 0.1f64..10.0, c in 0.01f64..2.0) {
        let (cloud, field) = torus(60, seed);
        let scaled = cloud.map_points(|p| p.iter().map(|x| lambda * x).collect()).unwrap();
        let a = distance_matrix(&cloud, &field, &ScaleParams::manual(c).unwrap()).unwrap();
        let b = distance_matrix(&scaled, &field, &ScaleParams::manual(lambda * lambda * c).unwrap()).unwrap();
        for i in 0..60 {
            for j in 0..60 {
                prop_assert!((b.get(i, j) - lambda * a.get(i, j)).abs() < 1e-10 * lambda.max(1.0));
            }
        }
    }
}

#[test]
fn gpdm_round_trip_is_exact() {
    let (cloud, field) = torus(40, 5);
    let m = distance_matrix(&cloud, &field, &ScaleParams::manual(0.37).unwrap()).unwrap();
    let mut bytes = Vec::new();
    m.write_gpdm(&mut bytes).unwrap();
    assert_eq!(&bytes[..4], GPDM_MAGIC);
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 40);
    assert_eq!(bytes[12], 1);
    assert_eq!(f64::from_le_bytes(bytes[13..21].try_into().unwrap()), 0.37);
    assert_eq!(bytes.len(), 21 + 8 * 40 * 39 / 2);
    let back = DistanceMatrix::read_gpdm(&bytes[..]).unwrap();
    assert_eq!(back, m);
    let mut again = Vec::new();
    back.write_gpdm(&mut again).unwrap();
    assert_eq!(again, bytes);
    assert!(DistanceMatrix::read_gpdm(&bytes[..bytes.len() - 1]).is_err());
}
