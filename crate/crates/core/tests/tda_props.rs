mod common;

use common::*;
use nalgebra::{Rotation3, Vector3};
use proptest::prelude::*;
use rand::Rng;
use structenc::metrics::FiniteMetricSpace;
use structenc::tda::*;
use structenc_oracles as oracle;

fn rows(space: &FiniteMetricSpace) -> Vec<Vec<f64>> {
    (0..space.len())
        .map(|i| (0..space.len()).map(|j| space.dist[(i, j)]).collect())
        .collect()
}

fn bars(dgm: &PersistenceDiagram, max_dim: usize) -> Vec<(usize, f64, f64)> {
    dgm.pairs
        .iter()
        .filter(|p| p.dim <= max_dim)
        .map(|p| (p.dim, p.birth, p.death))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_matches_rank_oracle(seed in any::<u64>(), n in 2usize..8) {
        let cloud = random_cloud(&mut rng(seed), n, 2);
        let space = FiniteMetricSpace::euclidean(&cloud).unwrap();
        let complex = vietoris_rips(&space, 2, f64::INFINITY);
        let fs: Vec<oracle::FSimplex> = complex.simplices().iter().map(|s| (s.vertices.clone(), s.value)).collect();
        let expected = oracle::persistence_bars(&fs, 1);
        prop_assert_eq!(bars(&persistence(&complex), 1), expected);
    }

    #[test]
    fn rips_matches_subset_enumeration(seed in any::<u64>(), n in 1usize..9) {
        let cloud = random_cloud(&mut rng(seed), n, 3);
        let space = FiniteMetricSpace::euclidean(&cloud).unwrap();
        let complex = vietoris_rips(&space, 2, f64::INFINITY);
        let mut got: Vec<(Vec<usize>, f64)> = complex.simplices().iter().map(|s| (s.vertices.clone(), s.value)).collect();
        let mut expected = oracle::rips_by_subsets(&rows(&space), 2);
        got.sort_by(|a, b| a.0.cmp(&b.0));
        expected.sort_by(|a, b| a.0.cmp(&b.0));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn alive_bars_match_betti_numbers(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let cloud = random_cloud(&mut r, n, 2);
        let space = FiniteMetricSpace::euclidean(&cloud).unwrap();
        let complex = vietoris_rips(&space, 2, f64::INFINITY);
        let dgm = persistence(&complex);
        let fs: Vec<oracle::FSimplex> = complex.simplices().iter().map(|s| (s.vertices.clone(), s.value)).collect();
        for _ in 0..10 {
            let radius = r.random_range(0.0..space.max_distance() * 1.1);
            let betti = oracle::betti_numbers(&fs, radius, 2);
            let mut euler_simplices = 0i64;
            for s in complex.simplices().iter().filter(|s| s.value <= radius) {
                euler_simplices += if s.dim() % 2 == 0 { 1 } else { -1 };
            }
            let mut euler_bars = 0i64;
            for (k, &b) in betti.iter().enumerate().take(3) {
                let alive = dgm.alive_at(k, radius) as i64;
                prop_assert_eq!(alive, b as i64);
                euler_bars += if k % 2 == 0 { alive } else { -alive };
            }
            prop_assert_eq!(euler_simplices, euler_bars);
        }
    }

    #[test]
    fn permutation_invariance(seed in any::<u64>(), n in 2usize..10) {
        let mut r = rng(seed);
        let cloud = random_cloud(&mut r, n, 2);
        let mut shuffled = cloud.clone();
        for i in (1..n).rev() {
            shuffled.swap(i, r.random_range(0..=i));
        }
        let a = persistence(&vietoris_rips(&FiniteMetricSpace::euclidean(&cloud).unwrap(), 2, f64::INFINITY));
        let b = persistence(&vietoris_rips(&FiniteMetricSpace::euclidean(&shuffled).unwrap(), 2, f64::INFINITY));
        for k in 0..=2 {
            prop_assert!(bottleneck(&a, &b, k) <= 1e-12);
        }
    }

    #[test]
    fn bottleneck_matches_brute_force(seed in any::<u64>(), n in 0usize..4, m in 0usize..4) {
        let mut r = rng(seed);
        let mut draw = |count: usize| -> Vec<(f64, f64)> {
            (0..count)
                .map(|_| {
                    let b: f64 = r.random_range(0.0..2.0);
                    (b, b + r.random_range(0.01..2.0))
                })
                .collect()
        };
        let (a, b) = (draw(n), draw(m));
        let as_dgm = |v: &[(f64, f64)]| PersistenceDiagram {
            pairs: v.iter().map(|&(birth, death)| PersistencePair { dim: 1, birth, death }).collect(),
        };
        let fast = bottleneck(&as_dgm(&a), &as_dgm(&b), 1);
        prop_assert_eq!(fast, oracle::brute_bottleneck(&a, &b));
    }
}

#[test]
fn isometries_preserve_diagrams() {
    let mut r = rng(2024);
    for _ in 0..50 {
        let n = r.random_range(3..=12);
        let cloud = random_cloud(&mut r, n, 3);
        let axis = Vector3::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let rot = Rotation3::from_scaled_axis(axis.normalize() * r.random_range(0.0..6.0));
        let shift = Vector3::new(r.random_range(-5.0..5.0), r.random_range(-5.0..5.0), r.random_range(-5.0..5.0));
        let moved: Vec<Vec<f64>> = cloud
            .iter()
            .map(|p| {
                let q = rot * Vector3::new(p[0], p[1], p[2]) + shift;
                vec![q.x, q.y, q.z]
            })
            .collect();
        let raw = FiniteMetricSpace::euclidean(&cloud).unwrap();
        let enc = FiniteMetricSpace::euclidean(&moved).unwrap();
        let report = compare_spaces(&raw, &enc, 2).unwrap();
        assert!(report.distortion <= 1e-10);
        assert!(report.isometry_pass, "{:?}", report.bottleneck);
        assert!(report.bottleneck.iter().all(|b| *b <= 1e-10));
    }
}

#[test]
fn square_bar_matches_oracle() {
    let space = FiniteMetricSpace::euclidean(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
    let dgm = persistence(&vietoris_rips(&space, 2, f64::INFINITY));
    let oracle_bars = oracle::persistence_bars(&oracle::rips_by_subsets(&rows(&space), 2), 1);
    let h1: Vec<_> = oracle_bars.iter().filter(|b| b.0 == 1).collect();
    assert_eq!(h1, vec![&(1, 1.0, 2f64.sqrt())]);
    let ours: Vec<_> = dgm.in_dim(1).map(|p| (p.birth, p.death)).collect();
    assert!((ours[0].0 - 1.0).abs() <= 1e-12 && (ours[0].1 - 2f64.sqrt()).abs() <= 1e-12);
}
