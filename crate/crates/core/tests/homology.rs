mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use toposcope_core::diagram::bottleneck_distance;
use toposcope_core::distance::{pairwise_distances, Metric};
use toposcope_core::homology::{build_vr_filtration, cubical_persistence, reduce_filtration, vr_persistence_cloud};
use toposcope_core::types::{validate_diagram, GrayImage, PersistenceDiagram, PointCloud};

fn triples(dgm: &PersistenceDiagram) -> Vec<(usize, f64, f64)> {
    let mut v: Vec<_> = dgm.pairs().iter().map(|p| (p.dim, p.birth, p.death)).collect();
    sort_triples(&mut v);
    v
}

fn same(a: &[(usize, f64, f64)], b: &[(usize, f64, f64)], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() <= tol && (x.2 == y.2 || (x.2 - y.2).abs() <= tol))
}

fn rips(points: &[Vec<f64>], max_dim: usize) -> PersistenceDiagram {
    vr_persistence_cloud(&PointCloud::new(points.to_vec()).unwrap(), Metric::Euclidean, max_dim, None).unwrap()
}

#[test]
fn square_corners() {
    let square = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
    let dgm = rips(&square, 1);
    let h1 = dgm.points(1);
    assert_eq!(h1.len(), 1);
    assert!((h1[0].0 - 1.0).abs() < 1e-9 && (h1[0].1 - 2f64.sqrt()).abs() < 1e-9);
    let mut h0: Vec<f64> = dgm.in_dim(0).filter(|p| !p.is_essential()).map(|p| p.death).collect();
    h0.sort_by(f64::total_cmp);
    assert_eq!(h0, vec![1.0, 1.0, 1.0]);
    assert!(same(&triples(&dgm), &rips_oracle(&square, 1), 1e-12));
}

#[test]
fn circle_has_one_dominant_loop() {
    let dgm = rips(&circle(100), 1);
    let mut pers: Vec<f64> = dgm.in_dim(1).map(|p| p.persistence()).collect();
    pers.sort_by(|a, b| b.total_cmp(a));
    assert!(pers[0] > 1.5);
    assert!(pers.len() == 1 || pers[0] > 10.0 * pers[1]);
    assert!(validate_diagram(&dgm).is_ok());
}

#[test]
fn h2_of_octahedron() {
    let mut pts = Vec::new();
    for axis in 0..3 {
        for s in [-1.0, 1.0] {
            let mut p = vec![0.0; 3];
            p[axis] = s;
            pts.push(p);
        }
    }
    let dgm = rips(&pts, 2);
    assert!(same(&triples(&dgm), &rips_oracle(&pts, 2), 1e-12));
    let h2 = dgm.points(2);
    assert_eq!(h2.len(), 1);
    assert!((h2[0].0 - 2f64.sqrt()).abs() < 1e-12 && (h2[0].1 - 2.0).abs() < 1e-12);
}

#[test]
fn matches_naive_reduction_on_random_clouds() {
    let mut r = rng(11);
    for _ in 0..40 {
        let n = r.gen_range(1..=8);
        let pts = random_cloud(&mut r, n, 2);
        for max_dim in 0..=2 {
            let got = triples(&rips(&pts, max_dim));
            assert!(same(&got, &rips_oracle(&pts, max_dim), 1e-12), "{pts:?} dim {max_dim}");
        }
    }
}

#[test]
fn two_far_clusters() {
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![11.0, 0.0], vec![12.0, 0.0]];
    let dgm = rips(&pts, 0);
    let mut deaths: Vec<f64> = dgm.in_dim(0).map(|p| p.death).collect();
    deaths.sort_by(f64::total_cmp);
    assert_eq!(deaths, vec![1.0, 1.0, 10.0, f64::INFINITY]);
    let mut heights = single_linkage_heights(&pts);
    heights.sort_by(f64::total_cmp);
    assert_eq!(deaths[..3], heights[..]);
}

#[test]
fn max_edge_truncates_the_filtration() {
    let pts = circle(12);
    let full = rips(&pts, 1);
    let pc = PointCloud::new(pts).unwrap();
    let cut = vr_persistence_cloud(&pc, Metric::Euclidean, 1, Some(0.6)).unwrap();
    // the loop is still open at the cutoff, so it never dies
    assert!(cut.in_dim(1).any(|p| p.is_essential()));
    assert!(full.in_dim(1).all(|p| !p.is_essential()));
}

#[test]
fn ring_image() {
    let img = vec![vec![0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]];
    let dgm = cubical_persistence(&GrayImage::from_rows(img.clone()).unwrap(), 1);
    assert_eq!(dgm.points(1), vec![(0.0, 1.0)]);
    assert!(same(&triples(&dgm), &cubical_oracle(&img), 0.0));
}

#[test]
fn cubical_matches_oracle_on_random_images() {
    let mut r = rng(5);
    for _ in 0..30 {
        let (h, w) = (r.gen_range(1..6), r.gen_range(1..6));
        let img: Vec<Vec<f64>> = (0..h).map(|_| (0..w).map(|_| r.gen_range(0..4) as f64).collect()).collect();
        let dgm = cubical_persistence(&GrayImage::from_rows(img.clone()).unwrap(), 1);
        assert!(same(&triples(&dgm), &cubical_oracle(&img), 0.0), "{img:?}");
    }
}

#[test]
fn permutation_invariance() {
    let mut r = rng(99);
    for _ in 0..10 {
        let pts = random_cloud(&mut r, 10, 3);
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut r);
        assert!(same(&triples(&rips(&pts, 1)), &triples(&rips(&shuffled, 1)), 1e-12));
    }
}

#[test]
fn stability_under_perturbation() {
    let mut r = rng(3);
    for _ in 0..10 {
        let pts = random_cloud(&mut r, 12, 2);
        for eps in [0.01, 0.05] {
            let moved: Vec<Vec<f64>> = pts
                .iter()
                .map(|p| {
                    let t: f64 = r.gen_range(0.0..std::f64::consts::TAU);
                    let s: f64 = r.gen_range(0.0..=eps);
                    vec![p[0] + s * t.cos(), p[1] + s * t.sin()]
                })
                .collect();
            let (a, b) = (rips(&pts, 1), rips(&moved, 1));
            for k in 0..=1 {
                assert!(bottleneck_distance(&a, &b, k) <= 2.0 * eps + 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagrams_are_valid_and_h0_counts_points(pts in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 2), 1..9)) {
        let dgm = rips(&pts, 1);
        prop_assert!(validate_diagram(&dgm).is_ok());
        prop_assert_eq!(dgm.in_dim(0).filter(|p| p.is_essential()).count(), 1);
        prop_assert!(dgm.in_dim(0).count() <= pts.len());
        prop_assert!(dgm.in_dim(0).all(|p| p.birth == 0.0));
    }

    #[test]
    fn clearing_agrees_with_naive(pts in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 2), 1..8)) {
        let got = triples(&rips(&pts, 1));
        prop_assert!(same(&got, &rips_oracle(&pts, 1), 1e-12));
    }

    #[test]
    fn h0_deaths_are_single_linkage_heights(pts in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 2), 2..13)) {
        let dgm = rips(&pts, 0);
        let mut deaths: Vec<f64> = dgm.in_dim(0).filter(|p| !p.is_essential()).map(|p| p.death).collect();
        deaths.sort_by(f64::total_cmp);
        let mut heights = single_linkage_heights(&pts);
        heights.sort_by(f64::total_cmp);
        prop_assert_eq!(deaths, heights);
    }

    #[test]
    fn essential_h0_counts_components(
        pts in proptest::collection::vec(proptest::collection::vec(0.0f64..4.0, 2), 1..12),
        max_edge in 0.0f64..2.0,
    ) {
        let pc = PointCloud::new(pts.clone()).unwrap();
        let dgm = vr_persistence_cloud(&pc, Metric::Euclidean, 0, Some(max_edge)).unwrap();
        let essential = dgm.in_dim(0).filter(|p| p.is_essential()).count();
        prop_assert_eq!(essential, components_within(&pts, max_edge));
    }

    #[test]
    fn euler_characteristic_matches_betti_numbers(
        pts in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 2), 1..8),
        max_edge in 0.0f64..1.5,
    ) {
        let dm = pairwise_distances(&PointCloud::new(pts).unwrap(), Metric::Euclidean).unwrap();
        let fc = build_vr_filtration(&dm, 2, max_edge).unwrap();
        let dgm = reduce_filtration(&fc).unwrap();
        let chi: i64 = fc.count_by_dim().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        let betti: i64 = (0..=2)
            .map(|k| {
                let b = dgm.in_dim(k).filter(|p| p.is_essential()).count() as i64;
                if k % 2 == 0 { b } else { -b }
            })
            .sum();
        prop_assert_eq!(chi, betti);
    }
}
