use brownlab::brown::stieltjes_exponent;
use brownlab::stats::log_ladder;
use brownlab::*;

fn anticommutator() -> NcPoly {
    parse("x1*x2 + x2*x1").unwrap()
}

#[test]
fn log_potential_is_stable_across_seeds() {
    let p = anticommutator();
    let grid = GridSpec::new(-1.5, 1.5, -1.5, 1.5, 5, 5).unwrap();
    let fields: Vec<LogPotentialField> = (0..10)
        .map(|seed| log_potential::<c64>(&p, 400, &grid, 1, 400f64.powi(-6), 900 + seed).unwrap())
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let vals: Vec<f64> = fields.iter().map(|f| f.h[[i, j]]).collect();
            let mean = vals.iter().sum::<f64>() / 10.0;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 9.0;
            worst = worst.max(var.sqrt());
        }
    }
    assert!(worst <= 0.02, "largest std over seeds {worst}");
}

#[test]
fn schur_and_direct_engines_agree() {
    let p = parse("x1*x2 - 0.5*x2*x1 + 0.3").unwrap();
    let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 4, 3).unwrap();
    let floor = 1e-12;
    let a = log_potential_with::<c64>(&p, 60, &grid, 2, floor, 3, PotentialEngine::Direct).unwrap();
    let b = log_potential_with::<c64>(&p, 60, &grid, 2, floor, 3, PotentialEngine::Schur).unwrap();
    let err = (&a.h - &b.h).iter().map(|x| x.abs()).fold(0.0, f64::max);
    assert!(err <= 1e-9, "{err}");
}

#[test]
fn stieltjes_exponents_inside_and_outside() {
    let p = anticommutator();
    let etas = log_ladder(1e-3, 1e-2, 5);
    let g = stieltjes::<c64>(&p, 300, c64::new(0.2, 0.1), &etas, 4, 5).unwrap();
    let (_, c2) = stieltjes_exponent(&etas, &g).unwrap();
    assert!((0.35..=0.65).contains(&c2), "bulk exponent {c2}");

    let g = stieltjes::<c64>(&p, 300, c64::new(4.0, 0.0), &etas, 2, 5).unwrap();
    let (_, c2) = stieltjes_exponent(&etas, &g).unwrap();
    assert!((c2 + 1.0).abs() <= 0.02, "outside exponent {c2}");

    let big = log_ladder(1e2, 1e4, 3);
    let g = stieltjes::<c64>(&p, 300, c64::new(0.0, 0.0), &big, 1, 5).unwrap();
    let (c, c2) = stieltjes_exponent(&big, &g).unwrap();
    assert!((c2 - 1.0).abs() <= 1e-3 && (c - 1.0).abs() <= 0.05, "({c}, {c2})");
}

#[test]
fn brown_mass_on_a_window_is_nonnegative() {
    let p = anticommutator();
    let grid = GridSpec::new(-2.5, 2.5, -2.5, 2.5, 21, 21).unwrap();
    let field = log_potential::<c64>(&p, 200, &grid, 3, 200f64.powi(-6), 7).unwrap();
    let b = brown_estimate(&field).unwrap();
    assert!((b.total_mass - 1.0).abs() <= 0.05, "mass {}", b.total_mass);
    let summary = field.truncation_summary();
    let json = serde_json::to_value(&summary).unwrap();
    assert!(json.is_object());
}
