use brownlab::rmt::{conj_transpose, haar_unitary, smallest_singular_value};
use brownlab::rng::{complex_gaussian, stream, Purpose};
use brownlab::linearize::assemble_lz;
use brownlab::walks::{
    delta_value, reduction_scan, sample_lz, smin_zeroth_block, vec_col_major, walk_shift, wedge_norm,
};
use brownlab::*;
use ndarray::{Array1, Array2};

fn basis(p: &str, n: usize, seed: u64) -> (Linearization64, WalkBasis64) {
    let lin = Linearization64::build(&parse(p).unwrap()).unwrap();
    let lz = sample_lz(&lin, n, c64::new(0.3, -0.2), seed, 0).unwrap();
    let u = orthocomplement_basis(&lz, 0, seed).unwrap();
    (lin, u)
}

/// Exhaustive maxima over both families by direct determinant evaluation.
fn brute_delta(u: &WalkBasis64, s: &[Array1<c64>]) -> (f64, f64) {
    let (n, r, nv) = (u.size(), u.rank(), s[0].len());
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..r {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    let (mut m1, mut m2) = (0.0f64, 0.0f64);
    for rest in &tuples {
        for l in 1..=nv {
            let rows: Vec<usize> = if l <= r { vec![rest[l - 1]] } else { (0..n).collect() };
            for i0 in rows {
                let mut idx = vec![i0];
                idx.extend_from_slice(rest);
                let v = delta_value(u, s, l, &idx).unwrap().norm();
                if l <= r {
                    m2 = m2.max(v);
                } else {
                    m1 = m1.max(v);
                }
            }
        }
    }
    (m1, m2)
}

#[test]
fn streamed_delta_matches_brute_force() {
    for (p, n) in [("x1*x2 + x2*x1", 12), ("x1*x2 + x2*x1 + x3", 8), ("x1*x1 - 2i*x2", 10)] {
        let (lin, u) = basis(p, n, 11);
        let s = lin.rotated_s();
        let rep = delta_report(&u, &s, 1e-30, DeltaMode::Full).unwrap();
        let (m1, m2) = brute_delta(&u, &s);
        assert!((rep.max_abs_delta1.value - m1).abs() <= 1e-12 * (1.0 + m1), "{p}: {m1}");
        assert!((rep.max_abs_delta2.value - m2).abs() <= 1e-12 * (1.0 + m2), "{p}: {m2}");
        assert!(rep.exhaustive);
        if rep.max_abs_delta2.ell > 0 {
            let w = &rep.max_abs_delta2;
            let again = delta_value(&u, &s, w.ell, &w.indices).unwrap().norm();
            assert!((again - w.value).abs() <= 1e-12);
        }
    }
}

#[test]
fn classify_mode_agrees_on_structure() {
    let (lin, u) = basis("x1*x2 + x2*x1 + x3", 8, 5);
    let s = lin.rotated_s();
    let full = delta_report(&u, &s, 1e-3, DeltaMode::Full).unwrap();
    let quick = delta_report(&u, &s, 1e-3, DeltaMode::Classify).unwrap();
    assert_eq!(full.structured, quick.structured);
    assert!(quick.max_abs_delta() <= full.max_abs_delta());
}

/// `W - M` for a given noise vector, assembled block by block.
fn walk_noise(u: &WalkBasis64, lin: &Linearization64, xi: &[Vec<c64>]) -> Array2<c64> {
    let rs = lin.rotated_s();
    let col: Vec<Array2<c64>> = xi.iter().map(|x| lin.pencil_rotated(x, &rs)).collect();
    test_projection(u, &col).unwrap()
}

#[test]
fn walk_matrix_is_linear_in_the_noise() {
    let (lin, u) = basis("x1*x2 + x2*x1 + x3", 6, 3);
    let phi = walk_matrix(&u, &lin.rotated_s()).unwrap().flat;
    let (n, nv) = (u.size(), lin.num_vars());
    let mut rng = stream(3, Purpose::Misc, 0);
    let xi: Vec<Vec<c64>> = (0..n)
        .map(|_| (0..nv).map(|_| complex_gaussian::<c64, _>(&mut rng, 1.0)).collect())
        .collect();
    let flat = Array1::from_shape_fn(nv * n, |a| xi[a % n][a / n]);
    let lhs = vec_col_major(&walk_noise(&u, &lin, &xi));
    let rhs = conj_transpose(&phi).dot(&flat);
    let err = (&lhs - &rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(err <= 1e-12, "{err}");
}

#[test]
fn empirical_covariance_matches_walk_matrix() {
    let (lin, u) = basis("x1*x2 + x2*x1", 8, 21);
    let phi = walk_matrix(&u, &lin.rotated_s()).unwrap().flat;
    let (n, nv, d) = (u.size(), lin.num_vars(), u.dim());
    let trials = 10_000;
    let mut cov = Array2::<c64>::zeros((d * d, d * d));
    for t in 0..trials {
        let mut rng = stream(21, Purpose::Walk, t);
        let xi: Vec<Vec<c64>> = (0..n)
            .map(|_| (0..nv).map(|_| complex_gaussian::<c64, _>(&mut rng, 1.0 / n as f64)).collect())
            .collect();
        let v = vec_col_major(&walk_noise(&u, &lin, &xi));
        for a in 0..d * d {
            for b in 0..d * d {
                cov[[a, b]] += v[a] * v[b].conj();
            }
        }
    }
    cov.mapv_inplace(|z| z / trials as f64);
    let expected = conj_transpose(&phi).dot(&phi).mapv(|z| z / n as f64);
    let fro = |m: &Array2<c64>| m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let rel = fro(&(&cov - &expected)) / fro(&expected);
    assert!(rel <= 0.1, "relative Frobenius error {rel}");
}

#[test]
fn walk_noise_has_mean_zero() {
    let (lin, u) = basis("x1*x2 + x2*x1", 10, 8);
    let m = walk_shift(&u, &lin, c64::new(0.3, -0.2));
    let d = u.dim();
    let trials = 4000;
    let mut mean = Array2::<c64>::zeros((d, d));
    let mut rng = stream(8, Purpose::Walk, 0);
    for _ in 0..trials {
        let xi: Vec<Vec<c64>> = (0..u.size())
            .map(|_| (0..2).map(|_| complex_gaussian::<c64, _>(&mut rng, 0.1)).collect())
            .collect();
        mean = mean + (&m + &walk_noise(&u, &lin, &xi));
    }
    mean.mapv_inplace(|z| z / trials as f64);
    let err = (&mean - &m).iter().map(|z| z.norm()).fold(0.0, f64::max);
    // Entry variance is at most the summed pencil variance, so 5 standard
    // errors is a generous bound.
    assert!(err <= 5.0 * (0.1 * 4.0 / trials as f64).sqrt(), "{err}");
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

#[test]
fn greedy_rows_against_exhaustive_search() {
    let mut rng = stream(31, Purpose::Misc, 0);
    for n in 3..=10 {
        for r in 1..=2usize {
            if n < r + 1 {
                continue;
            }
            let u0 = Array2::from_shape_fn((n, r + 1), |_| complex_gaussian::<c64, _>(&mut rng, 1.0));
            let alpha = smallest_singular_value(&u0).unwrap();
            let sel = select_rows(&u0, alpha).unwrap();
            let greedy = *sel.wedge_norms.last().unwrap();
            assert!((greedy - wedge_norm(&u0, &sel.indices)).abs() <= 1e-10 * (1.0 + greedy));
            let best = subsets(n, r + 1)
                .iter()
                .map(|s| wedge_norm(&u0, s))
                .fold(0.0, f64::max);
            assert!(greedy <= best * (1.0 + 1e-10));
            assert!(best >= (alpha / (n as f64).sqrt()).powi(r as i32 + 1));
            // Each greedy step keeps at least 1/(k+1) of the best possible
            // distance, so the product is within (r+1)! of the optimum.
            let fact: f64 = (1..=r + 1).map(|k| k as f64).product();
            assert!(greedy * fact >= best * (1.0 - 1e-10), "n {n} r {r}: {greedy} vs {best}");
        }
    }
}

#[test]
fn haar_frame_satisfies_wedge_bound() {
    let mut rng = stream(41, Purpose::Haar, 0);
    for r in 1..=3usize {
        let h: Array2<c64> = haar_unitary(20, &mut rng);
        let u0 = h.slice(ndarray::s![.., 0..r + 1]).to_owned();
        let sel = select_rows(&u0, 1.0 - 1e-12).unwrap();
        for (k, w) in sel.wedge_norms.iter().enumerate() {
            assert!(*w >= (1.0 / 20f64.sqrt()).powi(k as i32 + 1));
        }
    }
}

#[test]
fn zeroth_block_is_never_singular() {
    let lin = Linearization64::build(&parse("x1*x2 + x2*x1").unwrap()).unwrap();
    let mut worst = f64::INFINITY;
    for draw in 0..100 {
        let lz = sample_lz(&lin, 30, c64::new(0.0, 0.0), 51, draw).unwrap();
        let u = orthocomplement_basis(&lz, (draw % 30) as usize, 51).unwrap();
        assert!(u.orthonormality_error() <= 1e-10);
        worst = worst.min(smin_zeroth_block(&u).unwrap());
    }
    assert!(worst > 1e-6, "{worst}");
}

#[test]
fn reduction_chain_holds() {
    let lin = Linearization64::build(&parse("x1*x2 + x2*x1 - x1").unwrap()).unwrap();
    for n in [2usize, 5, 10, 20, 40] {
        for z in [c64::new(0.0, 0.0), c64::new(1.0, 0.5)] {
            let lz = sample_lz(&lin, n, z, 61, n as u64).unwrap();
            let scan = reduction_scan(&lz, 61).unwrap();
            assert!(scan.chain_holds(1e-8), "N = {n}, z = {z}: {scan:?}");
        }
    }
}

#[test]
fn basis_binary_round_trip() {
    let (_, u) = basis("x1*x2 + x2*x1", 7, 2);
    let mut bytes = Vec::new();
    u.write_binary(&mut bytes).unwrap();
    let back = WalkBasis64::read_binary(&u.header(), &bytes).unwrap();
    assert_eq!(back.matrix(), u.matrix());
}

/// Mean of `smin` of the test projection at block column `pi(0)` when the
/// Ginibre inputs are relabeled by the permutation `pi`, with its standard
/// error.
fn relabeled_projection_mean(pi: &[usize], trials: u64, seed: u64) -> (f64, f64) {
    let lin = Linearization64::build(&parse("x1*x2 + x2*x1 - x1").unwrap()).unwrap();
    let n = pi.len();
    let perm = Array2::from_shape_fn((n, n), |(a, b)| c64::new(if pi[b] == a { 1.0 } else { 0.0 }, 0.0));
    let vals: Vec<f64> = (0..trials)
        .map(|t| {
            let mut rng = stream(seed, Purpose::Matrices, t);
            let xs: Vec<Array2<c64>> = (0..2)
                .map(|_| {
                    let x = sample_ginibre::<c64, _>(n, &mut rng).into_inner();
                    perm.dot(&x).dot(&perm.t())
                })
                .collect();
            let lz = assemble_lz(&lin, &xs, c64::new(0.2, 0.1)).unwrap();
            let j = pi[0];
            let u = orthocomplement_basis(&lz, j, seed + t).unwrap();
            let h = test_projection(&u, &lz.block_column(j)).unwrap();
            smallest_singular_value(&h).unwrap()
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / trials as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    (mean, (var / trials as f64).sqrt())
}

#[test]
fn test_projection_law_ignores_relabeling() {
    let (m1, s1) = relabeled_projection_mean(&[0, 1, 2, 3, 4], 10_000, 71);
    let (m2, s2) = relabeled_projection_mean(&[3, 0, 4, 1, 2], 10_000, 72);
    let sigma = (s1 * s1 + s2 * s2).sqrt();
    assert!((m1 - m2).abs() <= 3.0 * sigma, "{m1} vs {m2} (sigma {sigma})");
}
