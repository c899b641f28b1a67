use brownlab::pseudospec::pseudospectrum_areas;
use brownlab::rmt::{conj_transpose, haar_unitary, smallest_singular_value};
use brownlab::rng::{complex_gaussian, stream, Purpose};
use brownlab::walks::det;
use brownlab::*;
use ndarray::{Array1, Array2};
use ndarray_linalg::Inverse;
use proptest::prelude::*;

fn matrix(n: usize, seed: u64) -> Array2<c64> {
    let mut rng = stream(seed, Purpose::Misc, n as u64);
    sample_ginibre(n, &mut rng).into_inner()
}

/// Greedy matching of two multisets of complex numbers; returns the worst
/// distance between matched pairs.
fn multiset_distance(a: &[c64], b: &[c64]) -> f64 {
    let mut left: Vec<c64> = b.to_vec();
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = left
            .iter()
            .enumerate()
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        worst = worst.max(d);
        left.swap_remove(k);
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn singular_values_multiply_to_det(n in 1usize..=16, seed in 0u64..10_000) {
        let m = matrix(n, seed);
        let sv = singular_values(&m).unwrap();
        let prod: f64 = sv.values.iter().product();
        let d = det(&m).norm();
        prop_assert!((prod - d).abs() <= 1e-8 * d.max(1e-300), "{prod} vs {d}");
        prop_assert!(sv.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn spectrum_is_similarity_invariant(n in 1usize..=16, seed in 0u64..10_000) {
        let m = matrix(n, seed);
        let mut rng = stream(seed, Purpose::Haar, 0);
        let q: Array2<c64> = haar_unitary(n, &mut rng);
        let conj = q.dot(&m).dot(&q.inv().unwrap());
        let a = esd(&m).unwrap().eigenvalues;
        let b = esd(&conj).unwrap().eigenvalues;
        prop_assert!(multiset_distance(&a, &b) <= 1e-6);
        let tr: c64 = m.diag().sum();
        prop_assert!((esd(&m).unwrap().sum() - tr).norm() <= 1e-6 * n as f64 * (1.0 + tr.norm()));
    }

    #[test]
    fn smin_is_a_lower_bound(n in 1usize..=12, seed in 0u64..10_000) {
        let m = matrix(n, seed);
        let smin = smallest_singular_value(&m).unwrap();
        let mut rng = stream(seed, Purpose::Misc, 99);
        for _ in 0..100 {
            let v = Array1::from_shape_fn(n, |_| complex_gaussian::<c64, _>(&mut rng, 1.0));
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let mv = m.dot(&v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / norm;
            prop_assert!(smin <= mv * (1.0 + 1e-12));
        }
        let g = m.dot(&conj_transpose(&m));
        let sv = singular_values(&m).unwrap();
        let trace: f64 = g.diag().iter().map(|z| z.re).sum();
        let squares: f64 = sv.values.iter().map(|s| s * s).sum();
        prop_assert!((trace - squares).abs() <= 1e-10 * trace.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn area_is_monotone_in_eps(seed in 0u64..1000, a in -4.0..-0.5f64, b in -4.0..-0.5f64) {
        let p = parse("x1*x2 + x2*x1").unwrap();
        let omega = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 6, 6).unwrap();
        let (lo, hi) = (10f64.powf(a.min(b)), 10f64.powf(a.max(b)));
        let areas = pseudospectrum_areas::<c64>(&p, 12, &[lo, hi], &omega, 2, seed).unwrap();
        prop_assert!(areas[0] <= areas[1]);
    }

    #[test]
    fn tail_hits_never_decrease(seed in 0u64..1000) {
        let p = parse("x1*x2").unwrap();
        let ladder = brownlab::stats::log_ladder(1e-4, 1.0, 7);
        let t = tail_estimate::<c64>(&p, 10, c64::new(0.1, 0.0), &ladder, 100, seed).unwrap();
        prop_assert!(t.hits.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(t.hits.iter().all(|&h| h <= t.trials));
    }

    #[test]
    fn stieltjes_has_herglotz_sign(seed in 0u64..1000, re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let p = parse("x1*x2 - x2").unwrap();
        let g = stieltjes::<c64>(&p, 10, c64::new(re, im), &[1e-3, 1.0, 1e3], 1, seed).unwrap();
        prop_assert!(g.iter().all(|v| v.im < 0.0));
    }
}
