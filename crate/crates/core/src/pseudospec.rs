//! Smallest singular values of `P - z` over grids and their small-ball
//! tails.
//!
//! Every trial draws one set of Ginibre inputs from its own random stream
//! and sweeps all grid nodes with it, so fields computed from the same
//! seed share their samples.

use ndarray::Array2;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;
use crate::rmt::{sample_ginibre, sample_polynomial, shifted, smallest_singular_value};
use crate::rng::{stream, Purpose};
use crate::scalar::{c64, real_to_f64, Field};
use crate::stats::{ladder_hits, median, tail_slope, wilson_interval, Z95};

/// Rectangular grid of spectral parameters. Node `(i, j)` is
/// `re_min + i dx + (im_min + j dy) i`; an axis with a single node sits at
/// the midpoint of its range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if ![re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) {
            return Err(Error::Grid("bounds must be finite".into()));
        }
        if re_min >= re_max || im_min >= im_max {
            return Err(Error::Grid(format!(
                "empty rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]: need re_min < re_max and im_min < im_max"
            )));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::Grid("nx and ny must be positive".into()));
        }
        Ok(GridSpec {
            re_min,
            re_max,
            im_min,
            im_max,
            nx,
            ny,
        })
    }

    /// A single node at `z` (cell of unit side).
    pub fn point(z: c64) -> Self {
        GridSpec::new(z.re - 0.5, z.re + 0.5, z.im - 0.5, z.im + 0.5, 1, 1).expect("finite point")
    }

    /// Parses `"re_min,re_max,im_min,im_max,nx,ny"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::Grid(format!(
                "expected re_min,re_max,im_min,im_max,nx,ny; got {} fields",
                parts.len()
            )));
        }
        let f = |k: usize| -> Result<f64> {
            parts[k]
                .parse::<f64>()
                .map_err(|_| Error::Grid(format!("field {} ('{}') is not a number", k + 1, parts[k])))
        };
        let u = |k: usize| -> Result<usize> {
            parts[k]
                .parse::<usize>()
                .map_err(|_| Error::Grid(format!("field {} ('{}') is not a positive integer", k + 1, parts[k])))
        };
        GridSpec::new(f(0)?, f(1)?, f(2)?, f(3)?, u(4)?, u(5)?)
    }

    pub fn dx(&self) -> f64 {
        if self.nx > 1 {
            (self.re_max - self.re_min) / (self.nx - 1) as f64
        } else {
            self.re_max - self.re_min
        }
    }

    pub fn dy(&self) -> f64 {
        if self.ny > 1 {
            (self.im_max - self.im_min) / (self.ny - 1) as f64
        } else {
            self.im_max - self.im_min
        }
    }

    pub fn re(&self, i: usize) -> f64 {
        if self.nx > 1 {
            self.re_min + i as f64 * self.dx()
        } else {
            0.5 * (self.re_min + self.re_max)
        }
    }

    pub fn im(&self, j: usize) -> f64 {
        if self.ny > 1 {
            self.im_min + j as f64 * self.dy()
        } else {
            0.5 * (self.im_min + self.im_max)
        }
    }

    pub fn node(&self, i: usize, j: usize) -> c64 {
        c64::new(self.re(i), self.im(j))
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes in row-major order (`i` outer).
    pub fn nodes(&self) -> Vec<c64> {
        (0..self.nx)
            .flat_map(|i| (0..self.ny).map(move |j| self.node(i, j)))
            .collect()
    }

    pub fn area(&self) -> f64 {
        (self.re_max - self.re_min) * (self.im_max - self.im_min)
    }

    pub fn translated(&self, c: c64) -> Self {
        GridSpec {
            re_min: self.re_min + c.re,
            re_max: self.re_max + c.re,
            im_min: self.im_min + c.im,
            im_max: self.im_max + c.im,
            ..*self
        }
    }
}

/// Real values on the nodes of a grid, indexed `[i, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub spec: GridSpec,
    pub values: Array2<f64>,
}

impl GridField {
    pub fn new(spec: GridSpec, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (spec.nx, spec.ny) {
            return Err(Error::Dimension(format!(
                "field is {:?}, grid is {}x{}",
                values.dim(),
                spec.nx,
                spec.ny
            )));
        }
        Ok(GridField { spec, values })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    /// CSV with header `re,im,value`, one row per node, `i` outer.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "re,im,value")?;
        for i in 0..self.spec.nx {
            for j in 0..self.spec.ny {
                let z = self.spec.node(i, j);
                writeln!(w, "{},{},{}", z.re, z.im, self.values[[i, j]])?;
            }
        }
        Ok(())
    }
}

/// Per-node statistics of `smin(P - z)` over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SminMap {
    pub median: GridField,
    pub mean: GridField,
    pub min: GridField,
    /// Node evaluations whose decomposition failed.
    pub failures: usize,
}

impl SminMap {
    /// CSV with the median as `value` plus `mean` and `min` columns.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let spec = &self.median.spec;
        writeln!(w, "re,im,value,mean,min")?;
        for i in 0..spec.nx {
            for j in 0..spec.ny {
                let z = spec.node(i, j);
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    z.re,
                    z.im,
                    self.median.get(i, j),
                    self.mean.get(i, j),
                    self.min.get(i, j)
                )?;
            }
        }
        Ok(())
    }
}

/// `smin(P - z)` for every node of `grid` (row-major) and every trial;
/// `None` marks a failed decomposition.
pub fn smin_samples<K: Field>(
    p: &NcPoly,
    n: usize,
    grid: &GridSpec,
    trials: usize,
    seed: u64,
) -> Result<Vec<Vec<Option<f64>>>> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    check_size(n)?;
    let nodes = grid.nodes();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Matrices, t as u64);
            let pm: Array2<K> = sample_polynomial(p, n, &mut rng)?;
            Ok(nodes
                .iter()
                .map(|&z| smallest_singular_value(&shifted(&pm, K::from_c64(z))).ok().map(real_to_f64))
                .collect())
        })
        .collect()
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("matrix size N must be positive".into()));
    }
    Ok(())
}

/// Per-node summary over trials of `smin(P - z)`: median plus mean and minimum.
pub fn smin_map<K: Field>(p: &NcPoly, n: usize, grid: &GridSpec, trials: usize, seed: u64) -> Result<SminMap> {
    let samples = smin_samples::<K>(p, n, grid, trials, seed)?;
    let mut med = Array2::<f64>::zeros((grid.nx, grid.ny));
    let mut mean = med.clone();
    let mut min = med.clone();
    let mut failures = 0;
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let k = i * grid.ny + j;
            let mut vals: Vec<f64> = samples.iter().filter_map(|t| t[k]).collect();
            failures += trials - vals.len();
            if vals.is_empty() {
                med[[i, j]] = f64::NAN;
                mean[[i, j]] = f64::NAN;
                min[[i, j]] = f64::NAN;
                continue;
            }
            mean[[i, j]] = vals.iter().sum::<f64>() / vals.len() as f64;
            min[[i, j]] = vals.iter().copied().fold(f64::INFINITY, f64::min);
            med[[i, j]] = median(&mut vals).expect("nonempty");
        }
    }
    Ok(SminMap {
        median: GridField::new(*grid, med)?,
        mean: GridField::new(*grid, mean)?,
        min: GridField::new(*grid, min)?,
        failures,
    })
}

/// Empirical small-ball probabilities `P{X <= eps}` along a ladder of
/// thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    pub z: c64,
    pub n: usize,
    pub eps_ladder: Vec<f64>,
    pub hits: Vec<u64>,
    /// Successful trials (the denominator of every rate).
    pub trials: u64,
    pub failures: u64,
    /// Fitted exponent of `rate ~ eps^slope`; `None` when fewer than two
    /// rungs carry enough hits.
    pub slope: Option<f64>,
    /// Wilson 95% interval per rung.
    pub ci: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
struct RungJson {
    eps: f64,
    hits: u64,
    rate: f64,
    ci_lo: f64,
    ci_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
struct TailJson {
    z: [f64; 2],
    #[serde(rename = "N")]
    n: usize,
    trials: u64,
    failures: u64,
    ladder: Vec<RungJson>,
    slope: Option<f64>,
}

impl TailEstimate {
    pub fn from_samples(z: c64, n: usize, eps_ladder: &[f64], samples: &[f64], failures: u64) -> Result<Self> {
        check_ladder(eps_ladder)?;
        if samples.is_empty() {
            return Err(Error::EmptyTail);
        }
        let trials = samples.len() as u64;
        let hits = ladder_hits(samples, eps_ladder);
        let ci = hits.iter().map(|&h| wilson_interval(h, trials, Z95)).collect();
        let slope = tail_slope(eps_ladder, &hits, trials);
        Ok(TailEstimate {
            z,
            n,
            eps_ladder: eps_ladder.to_vec(),
            hits,
            trials,
            failures,
            slope,
            ci,
        })
    }

    pub fn rates(&self) -> Vec<f64> {
        self.hits.iter().map(|&h| h as f64 / self.trials as f64).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rates = self.rates();
        let ladder = (0..self.eps_ladder.len())
            .map(|k| RungJson {
                eps: self.eps_ladder[k],
                hits: self.hits[k],
                rate: rates[k],
                ci_lo: self.ci[k].0,
                ci_hi: self.ci[k].1,
            })
            .collect();
        serde_json::to_value(TailJson {
            z: [self.z.re, self.z.im],
            n: self.n,
            trials: self.trials,
            failures: self.failures,
            ladder,
            slope: self.slope,
        })
        .expect("plain data serializes")
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.to_json())?;
        Ok(())
    }
}

pub fn check_ladder(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::Precondition("epsilon ladder is empty".into()));
    }
    if eps.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::Precondition("epsilon ladder entries must be positive and finite".into()));
    }
    if eps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("epsilon ladder must be strictly increasing".into()));
    }
    Ok(())
}

/// Minimum number of trials accepted by the tail estimators.
pub const MIN_TAIL_TRIALS: usize = 100;

fn check_trials(trials: usize) -> Result<()> {
    if trials < MIN_TAIL_TRIALS {
        return Err(Error::Precondition(format!(
            "tail estimates need at least {MIN_TAIL_TRIALS} trials, got {trials}"
        )));
    }
    Ok(())
}

fn collect_tail(z: c64, n: usize, eps: &[f64], results: Vec<Result<f64>>) -> Result<TailEstimate> {
    let mut samples = Vec::with_capacity(results.len());
    let mut failures = 0u64;
    for r in results {
        match r {
            Ok(v) => samples.push(v),
            Err(e) if e.is_numerical() => failures += 1,
            Err(e) => return Err(e),
        }
    }
    TailEstimate::from_samples(z, n, eps, &samples, failures)
}

/// Tail of `smin(P - z)` over `trials` independent draws.
pub fn tail_estimate<K: Field>(
    p: &NcPoly,
    n: usize,
    z: K,
    eps_ladder: &[f64],
    trials: usize,
    seed: u64,
) -> Result<TailEstimate> {
    check_ladder(eps_ladder)?;
    check_trials(trials)?;
    check_size(n)?;
    let results: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Matrices, t as u64);
            let pm: Array2<K> = sample_polynomial(p, n, &mut rng)?;
            Ok(real_to_f64(smallest_singular_value(&shifted(&pm, z))?))
        })
        .collect();
    collect_tail(z.to_c64(), n, eps_ladder, results)
}

/// Tail of `smin(X + M)` for a Ginibre `X` and a fixed shift `M`.
pub fn smin_shifted_tail<K: Field>(
    n: usize,
    shift: &Array2<K>,
    eps_ladder: &[f64],
    trials: usize,
    seed: u64,
) -> Result<TailEstimate> {
    check_ladder(eps_ladder)?;
    check_trials(trials)?;
    check_size(n)?;
    if shift.dim() != (n, n) {
        return Err(Error::Dimension(format!("shift must be {n}x{n}, got {:?}", shift.dim())));
    }
    let results: Vec<Result<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Matrices, t as u64);
            let x = sample_ginibre::<K, _>(n, &mut rng).into_inner() + shift;
            Ok(real_to_f64(smallest_singular_value(&x)?))
        })
        .collect();
    collect_tail(c64::new(0.0, 0.0), n, eps_ladder, results)
}

/// Monte Carlo estimate of the expected area of `{z in omega : smin(P - z)
/// <= eps}`, one value per entry of `eps` (all from the same samples).
pub fn pseudospectrum_areas<K: Field>(
    p: &NcPoly,
    n: usize,
    eps: &[f64],
    omega: &GridSpec,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let samples = smin_samples::<K>(p, n, omega, trials, seed)?;
    let nodes = omega.len() as f64;
    Ok(eps
        .iter()
        .map(|&e| {
            let frac: f64 = samples
                .iter()
                .map(|t| t.iter().filter(|v| matches!(v, Some(s) if *s <= e)).count() as f64 / nodes)
                .sum::<f64>()
                / trials as f64;
            frac * omega.area()
        })
        .collect())
}

pub fn pseudospectrum_area<K: Field>(
    p: &NcPoly,
    n: usize,
    eps: f64,
    omega: &GridSpec,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    Ok(pseudospectrum_areas::<K>(p, n, &[eps], omega, trials, seed)?[0])
}

/// `min(1, N^{13/3} eps^{1/(r+1)} + e^{-N})`.
pub fn pseudospectrum_bound(n: usize, eps: f64, rank: usize) -> f64 {
    let nf = n as f64;
    (nf.powf(13.0 / 3.0) * eps.powf(1.0 / (rank as f64 + 1.0)) + (-nf).exp()).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;
    use crate::stats::log_ladder;

    #[test]
    fn grid_nodes_and_parse() {
        let g = GridSpec::parse("-2,2,-1,1,5,3").unwrap();
        assert_eq!(g.node(0, 0), c64::new(-2.0, -1.0));
        assert_eq!(g.node(4, 2), c64::new(2.0, 1.0));
        assert_eq!(g.node(1, 1), c64::new(-1.0, 0.0));
        assert_eq!(g.area(), 8.0);
        assert_eq!(g.nodes()[1], c64::new(-2.0, 0.0));
        assert!(GridSpec::parse("0,0,-1,1,3,3").is_err());
        assert!(GridSpec::parse("0,1,-1,1,0,3").is_err());
        assert!(GridSpec::parse("0,1,-1,1,3").is_err());
        let p = GridSpec::point(c64::new(3.0, -1.0));
        assert_eq!(p.node(0, 0), c64::new(3.0, -1.0));
    }

    #[test]
    fn csv_is_row_major() {
        let g = GridSpec::new(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        let f = GridField::new(g, ndarray::array![[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let mut out = Vec::new();
        f.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "re,im,value\n0,0,1\n0,1,2\n1,0,3\n1,1,4\n");
    }

    #[test]
    fn far_shift_dominates() {
        let p = parse("x1*x2").unwrap();
        let g = GridSpec::point(c64::new(1e3, 0.0));
        let m = smin_map::<c64>(&p, 30, &g, 1, 5).unwrap();
        assert!((m.median.get(0, 0) / 1e3 - 1.0).abs() < 0.05);
    }

    #[test]
    fn map_is_deterministic() {
        let p = parse("x1*x2 + x2*x1").unwrap();
        let g = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 3, 3).unwrap();
        let a = smin_map::<c64>(&p, 20, &g, 3, 9).unwrap();
        let b = smin_map::<c64>(&p, 20, &g, 3, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.failures, 0);
    }

    #[test]
    fn saturated_ladder() {
        let p = parse("x1*x2 + x2*x1").unwrap();
        let t = tail_estimate::<c64>(&p, 10, c64::new(0.0, 0.0), &[100.0, 1000.0], 100, 1).unwrap();
        assert_eq!(t.hits, vec![100, 100]);
        assert_eq!(t.rates(), vec![1.0, 1.0]);
        let shifted = smin_shifted_tail::<c64>(10, &Array2::eye(10), &[10.0, 20.0, 40.0], 100, 1).unwrap();
        assert!(shifted.rates().iter().all(|&r| r == 1.0));
    }

    #[test]
    fn tail_preconditions() {
        let p = parse("x1*x2").unwrap();
        let z = c64::new(0.0, 0.0);
        assert!(tail_estimate::<c64>(&p, 10, z, &[0.1], 99, 1).is_err());
        assert!(tail_estimate::<c64>(&p, 10, z, &[0.2, 0.1], 100, 1).is_err());
        assert!(tail_estimate::<c64>(&p, 10, z, &[], 100, 1).is_err());
    }

    #[test]
    fn tail_hits_monotone_and_json() {
        let p = parse("x1*x2 + x2*x1").unwrap();
        let eps = log_ladder(1e-4, 1.0, 7);
        let t = tail_estimate::<c64>(&p, 12, c64::new(0.0, 0.0), &eps, 200, 3).unwrap();
        assert!(t.hits.windows(2).all(|w| w[0] <= w[1]));
        let v = t.to_json();
        assert_eq!(v["N"], 12);
        assert_eq!(v["trials"], 200);
        assert_eq!(v["ladder"].as_array().unwrap().len(), 7);
        assert!(v["ladder"][0].get("ci_lo").is_some());
    }

    #[test]
    fn undefined_slope_is_null() {
        let t = TailEstimate::from_samples(c64::new(0.0, 0.0), 5, &[1e-9, 1e-8], &[1.0; 100], 0).unwrap();
        assert_eq!(t.slope, None);
        assert!(t.to_json()["slope"].is_null());
    }

    #[test]
    fn area_edge_cases() {
        let p = parse("x1*x2 + x2*x1").unwrap();
        let g = GridSpec::new(-2.0, 2.0, -2.0, 2.0, 5, 5).unwrap();
        assert_eq!(pseudospectrum_area::<c64>(&p, 10, 1e-301, &g, 2, 1).unwrap(), 0.0);
        let a = pseudospectrum_areas::<c64>(&p, 10, &[0.01, 0.1, 1.0, 100.0], &g, 2, 1).unwrap();
        assert!(a.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(a[3], 16.0);
    }

    #[test]
    fn bound_shape() {
        assert_eq!(pseudospectrum_bound(50, 1e-2, 2), 1.0);
        let b = pseudospectrum_bound(2, 1e-30, 2);
        assert!(b < 0.2 && b > (-2.0f64).exp());
    }
}
