use brownlab::stats::log_ladder;
use brownlab::*;

#[test]
fn product_map_is_large_on_the_radius_two_circle() {
    let p = parse("x1*x2").unwrap();
    let grid = GridSpec::new(-2.0, 2.0, -2.0, 2.0, 21, 21).unwrap();
    let map = smin_map::<c64>(&p, 100, &grid, 3, 17).unwrap();
    assert_eq!(map.failures, 0);
    let mut outside = 0;
    let mut large = 0;
    for i in 0..21 {
        for j in 0..21 {
            if grid.node(i, j).norm() >= 2.0 - 1e-12 {
                outside += 1;
                if map.median.get(i, j) >= 0.1 {
                    large += 1;
                }
            }
        }
    }
    assert!(outside > 0);
    assert!(large as f64 >= 0.95 * outside as f64, "{large} of {outside}");
    let centre = map.median.get(10, 10);
    assert!(centre < 0.1, "smin at the origin {centre}");
}

#[test]
fn tiny_pseudospectrum_has_tiny_area() {
    let p = parse("x1*x2 + x2*x1").unwrap();
    let omega = GridSpec::new(-2.0, 2.0, -2.0, 2.0, 15, 15).unwrap();
    let area = pseudospectrum_area::<c64>(&p, 100, 1e-8, &omega, 3, 23).unwrap();
    assert!(area <= 1e-2 * omega.area(), "{area}");
    let big = pseudospectrum_area::<c64>(&p, 100, 10.0, &omega, 1, 23).unwrap();
    assert!((big - omega.area()).abs() <= 1e-12);
}

#[test]
fn anticommutator_tail_is_quadratic_in_the_bulk() {
    let p = parse("x1*x2 + x2*x1").unwrap();
    let ladder = log_ladder(3e-4, 3e-3, 6);
    let t = tail_estimate::<c64>(&p, 100, c64::new(0.5, 0.0), &ladder, 2000, 29).unwrap();
    let slope = t.slope.expect("enough hits");
    assert!((1.5..=2.5).contains(&slope), "slope {slope}");
    assert_eq!(t.failures, 0);
    for (k, (lo, hi)) in t.ci.iter().enumerate() {
        let rate = t.rates()[k];
        assert!(*lo <= rate && rate <= *hi);
    }
    let json = t.to_json();
    assert_eq!(json["ladder"].as_array().unwrap().len(), 6);
}

#[test]
fn tail_rejects_bad_ladders() {
    let p = parse("x1*x2").unwrap();
    assert!(tail_estimate::<c64>(&p, 10, c64::new(0.0, 0.0), &[1e-2, 1e-3], 100, 1).is_err());
    assert!(tail_estimate::<c64>(&p, 10, c64::new(0.0, 0.0), &[1e-3], 10, 1).is_err());
}

#[test]
fn single_precision_map_tracks_double() {
    let p = parse("x1*x2 - x2").unwrap();
    let grid = GridSpec::new(-1.0, 1.0, 0.0, 1.0, 3, 2).unwrap();
    let a = smin_map::<c64>(&p, 40, &grid, 2, 31).unwrap();
    let b = smin_map::<c32>(&p, 40, &grid, 2, 31).unwrap();
    for i in 0..3 {
        for j in 0..2 {
            assert!((a.median.get(i, j) - b.median.get(i, j)).abs() <= 1e-3);
        }
    }
}
