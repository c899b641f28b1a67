//! Hermitization: the regularized log-potential
//! `h(z) = (1/N) sum_i log max(sigma_i(P - z), floor)`, its discrete
//! Laplacian (the Brown-measure estimate), and the Stieltjes transform of
//! the squared singular values of `P - z`.
//!
//! Two engines compute `h`. [`PotentialEngine::Direct`] takes a full SVD
//! at every node. [`PotentialEngine::Schur`] reduces `P` once per trial to
//! triangular form `T` and uses `|det(P - z)| = prod_j |t_jj - z|`, which
//! equals `h` whenever no singular value is at or below the floor; a short
//! inverse iteration on `T - z` estimates `sigma_min`, and nodes where the
//! estimate comes within [`SCHUR_GUARD`]`* N * floor` fall back to the SVD.

use ndarray::{s, Array2};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;
use crate::pseudospec::{GridField, GridSpec};
use crate::rmt::{sample_polynomial, shifted, singular_values, SpectrumSample};
use crate::rng::{stream, Purpose};
use crate::scalar::{c64, real_to_f64, Field};
use crate::stats::{ls_slope, tv_distance};

/// Safety factor (per unit of `N`) between the inverse-iteration estimate
/// of `sigma_min` and the floor below which the Schur engine defers to a
/// full SVD.
pub const SCHUR_GUARD: f64 = 1e3;

const INVERSE_ITERATIONS: usize = 3;

/// Default floor `N^{-6}`.
pub fn default_floor(n: usize) -> f64 {
    (n as f64).powi(-6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialEngine {
    Direct,
    #[default]
    Schur,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogPotentialField {
    pub grid: GridSpec,
    pub h: Array2<f64>,
    /// Share of singular values at or below the floor, averaged over trials.
    pub truncated_fraction: Array2<f64>,
    pub floor: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub engine: PotentialEngine,
    /// Node evaluations that needed a full SVD under the Schur engine.
    pub svd_fallbacks: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationSummary {
    pub mean: f64,
    pub max: f64,
    pub nodes_truncated: usize,
}

#[derive(Debug, Clone, Serialize)]
struct PotentialSidecar {
    #[serde(rename = "N")]
    n: usize,
    trials: usize,
    floor: f64,
    seed: u64,
    engine: PotentialEngine,
    svd_fallbacks: usize,
    truncated_fraction_summary: TruncationSummary,
}

impl LogPotentialField {
    pub fn as_grid_field(&self) -> GridField {
        GridField {
            spec: self.grid,
            values: self.h.clone(),
        }
    }

    pub fn truncation_field(&self) -> GridField {
        GridField {
            spec: self.grid,
            values: self.truncated_fraction.clone(),
        }
    }

    pub fn truncation_summary(&self) -> TruncationSummary {
        let t = &self.truncated_fraction;
        TruncationSummary {
            mean: t.mean().unwrap_or(0.0),
            max: t.iter().copied().fold(0.0, f64::max),
            nodes_truncated: t.iter().filter(|&&v| v > 0.0).count(),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        self.as_grid_field().write_csv(w)
    }

    /// `{N, trials, floor, seed, engine, svd_fallbacks,
    /// truncated_fraction_summary}`.
    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::to_value(PotentialSidecar {
            n: self.n,
            trials: self.trials,
            floor: self.floor,
            seed: self.seed,
            engine: self.engine,
            svd_fallbacks: self.svd_fallbacks,
            truncated_fraction_summary: self.truncation_summary(),
        })
        .expect("plain data serializes")
    }
}

/// Per-trial node values: `(h, truncated share, used SVD)`.
type NodeValue = (f64, f64, bool);

fn direct_node<K: Field>(pm: &Array2<K>, z: K, floor: f64) -> Result<NodeValue> {
    let sv = singular_values(&shifted(pm, z))?;
    let n = sv.values.len() as f64;
    let mut acc = 0.0;
    let mut cut = 0usize;
    for &s in &sv.values {
        let s = real_to_f64(s);
        if s <= floor {
            cut += 1;
        }
        acc += s.max(floor).ln();
    }
    Ok((acc / n, cut as f64 / n, true))
}

/// Solves `(T - z) y = x` in place for upper-triangular `T`.
fn solve_upper<K: Field>(t: &Array2<K>, z: K, x: &mut [K]) -> bool {
    let n = x.len();
    for i in (0..n).rev() {
        let row = t.row(i);
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= row[j] * x[j];
        }
        let d = row[i] - z;
        if d == K::zero() {
            return false;
        }
        x[i] = acc / d;
    }
    true
}

/// Solves `(T - z)^* w = y` in place for upper-triangular `T`.
fn solve_upper_adjoint<K: Field>(t: &Array2<K>, z: K, y: &mut [K]) -> bool {
    let n = y.len();
    for j in 0..n {
        let row = t.row(j);
        let d = (row[j] - z).conj();
        if d == K::zero() {
            return false;
        }
        y[j] /= d;
        let wj = y[j];
        for i in j + 1..n {
            y[i] -= row[i].conj() * wj;
        }
    }
    true
}

fn norm<K: Field>(v: &[K]) -> f64 {
    v.iter().map(|z| real_to_f64(z.square())).sum::<f64>().sqrt()
}

/// Upper estimate of `sigma_min(T - z)` from inverse iteration on
/// `((T - z)^*(T - z))^{-1}`; `0` when `T - z` has an exactly zero pivot.
fn smin_estimate<K: Field>(t: &Array2<K>, z: K) -> f64 {
    let n = t.nrows();
    // Deterministic start with spread phases avoids correlating with the
    // random input.
    let mut x: Vec<K> = (0..n)
        .map(|k| {
            let a = 0.618_033_988_749_895 * (k as f64 + 1.0) * 2.0 * PI;
            K::from_c64(c64::from_polar(1.0, a))
        })
        .collect();
    let mut est = f64::INFINITY;
    for _ in 0..INVERSE_ITERATIONS {
        let before = norm(&x);
        if !solve_upper(t, z, &mut x) || !solve_upper_adjoint(t, z, &mut x) {
            return 0.0;
        }
        let after = norm(&x);
        if !after.is_finite() || after == 0.0 {
            return 0.0;
        }
        est = est.min((before / after).sqrt());
        let scale = K::real(1.0 / after);
        for v in x.iter_mut() {
            *v = v.mul_real(scale);
        }
    }
    est
}

fn schur_node<K: Field>(pm: &Array2<K>, t: &Array2<K>, z: K, floor: f64) -> Result<NodeValue> {
    let n = t.nrows();
    if smin_estimate(t, z) <= SCHUR_GUARD * n as f64 * floor {
        return direct_node(pm, z, floor);
    }
    let h = t.diag().iter().map(|&l| real_to_f64((l - z).abs()).ln()).sum::<f64>() / n as f64;
    Ok((h, 0.0, false))
}

/// `h` on every node of `grid`, averaged over `trials` draws of `P`.
pub fn log_potential_with<K: Field>(
    p: &NcPoly,
    n: usize,
    grid: &GridSpec,
    trials: usize,
    floor: f64,
    seed: u64,
    engine: PotentialEngine,
) -> Result<LogPotentialField> {
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(Error::Precondition("floor must be positive".into()));
    }
    if trials == 0 || n == 0 {
        return Err(Error::Precondition("trials and N must be at least 1".into()));
    }
    let nodes = grid.nodes();
    let per_trial: Vec<Result<Vec<NodeValue>>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, Purpose::Matrices, trial as u64);
            let pm: Array2<K> = sample_polynomial(p, n, &mut rng)?;
            match engine {
                PotentialEngine::Direct => nodes
                    .iter()
                    .map(|&z| direct_node(&pm, K::from_c64(z), floor))
                    .collect(),
                PotentialEngine::Schur => {
                    let t = K::schur_triangular(&pm)?;
                    nodes
                        .iter()
                        .map(|&z| schur_node(&pm, &t, K::from_c64(z), floor))
                        .collect()
                }
            }
        })
        .collect();
    let mut h = Array2::<f64>::zeros((grid.nx, grid.ny));
    let mut trunc = h.clone();
    let mut fallbacks = 0;
    for values in per_trial {
        let values = values?;
        for (k, (hv, tv, svd)) in values.into_iter().enumerate() {
            let (i, j) = (k / grid.ny, k % grid.ny);
            h[[i, j]] += hv / trials as f64;
            trunc[[i, j]] += tv / trials as f64;
            if svd && engine == PotentialEngine::Schur {
                fallbacks += 1;
            }
        }
    }
    Ok(LogPotentialField {
        grid: *grid,
        h,
        truncated_fraction: trunc,
        floor,
        n,
        trials,
        seed,
        engine,
        svd_fallbacks: fallbacks,
    })
}

/// [`log_potential_with`] using the Schur engine.
pub fn log_potential<K: Field>(
    p: &NcPoly,
    n: usize,
    grid: &GridSpec,
    trials: usize,
    floor: f64,
    seed: u64,
) -> Result<LogPotentialField> {
    log_potential_with::<K>(p, n, grid, trials, floor, seed, PotentialEngine::Schur)
}

/// Signed density on the interior nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownEstimate {
    pub grid: GridSpec,
    /// `(nx - 2) x (ny - 2)`; entry `[i, j]` belongs to node `(i + 1, j + 1)`.
    pub density: Array2<f64>,
    pub total_mass: f64,
}

impl BrownEstimate {
    /// CSV `re,im,value` over the interior nodes.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "re,im,value")?;
        let (mx, my) = self.density.dim();
        for i in 0..mx {
            for j in 0..my {
                let z = self.grid.node(i + 1, j + 1);
                writeln!(w, "{},{},{}", z.re, z.im, self.density[[i, j]])?;
            }
        }
        Ok(())
    }

    pub fn sidecar_json(&self, field: &LogPotentialField) -> serde_json::Value {
        let mut v = field.sidecar_json();
        v["total_mass"] = self.total_mass.into();
        v["negative_mass"] = self
            .density
            .iter()
            .filter(|&&d| d < 0.0)
            .map(|d| -d * self.grid.dx() * self.grid.dy())
            .sum::<f64>()
            .into();
        v["clipping"] = "none (signed density; clipped only when compared with an ESD)".into();
        v
    }
}

/// `(1/2 pi)` times the five-point Laplacian of `h` at interior nodes.
pub fn laplacian_density(grid: &GridSpec, h: &Array2<f64>) -> Result<BrownEstimate> {
    if grid.nx < 3 || grid.ny < 3 {
        return Err(Error::Grid("the Laplacian needs nx, ny >= 3".into()));
    }
    if h.dim() != (grid.nx, grid.ny) {
        return Err(Error::Dimension(format!("potential is {:?}, grid {}x{}", h.dim(), grid.nx, grid.ny)));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::Precondition("potential has non-finite values".into()));
    }
    let (dx2, dy2) = (grid.dx() * grid.dx(), grid.dy() * grid.dy());
    let density = Array2::from_shape_fn((grid.nx - 2, grid.ny - 2), |(a, b)| {
        let (i, j) = (a + 1, b + 1);
        let c = 2.0 * h[[i, j]];
        let lap = (h[[i + 1, j]] + h[[i - 1, j]] - c) / dx2 + (h[[i, j + 1]] + h[[i, j - 1]] - c) / dy2;
        lap / (2.0 * PI)
    });
    let total_mass = density.sum() * grid.dx() * grid.dy();
    Ok(BrownEstimate {
        grid: *grid,
        density,
        total_mass,
    })
}

pub fn brown_estimate(field: &LogPotentialField) -> Result<BrownEstimate> {
    laplacian_density(&field.grid, &field.h)
}

/// `g(i eta) = E (1/N) sum_i 1/(i eta - sigma_i^2(P - z))` for each `eta`.
pub fn stieltjes<K: Field>(
    p: &NcPoly,
    n: usize,
    z: K,
    eta_ladder: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<c64>> {
    if eta_ladder.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Precondition("eta values must be positive".into()));
    }
    if trials == 0 || n == 0 {
        return Err(Error::Precondition("trials and N must be at least 1".into()));
    }
    let per_trial: Vec<Result<Vec<f64>>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Matrices, t as u64);
            let pm: Array2<K> = sample_polynomial(p, n, &mut rng)?;
            Ok(singular_values(&shifted(&pm, z))?
                .values
                .into_iter()
                .map(|s| real_to_f64(s).powi(2))
                .collect())
        })
        .collect();
    let mut g = vec![c64::new(0.0, 0.0); eta_ladder.len()];
    for sq in per_trial {
        let sq = sq?;
        let w = 1.0 / (sq.len() * trials) as f64;
        for (k, &eta) in eta_ladder.iter().enumerate() {
            for &s2 in &sq {
                g[k] += (c64::new(-s2, eta)).inv() * w;
            }
        }
    }
    Ok(g)
}

/// Fit of `|Im g(i eta)| = C eta^{-c2}`: returns `(C, c2)`.
pub fn stieltjes_exponent(eta: &[f64], g: &[c64]) -> Option<(f64, f64)> {
    let (x, y): (Vec<f64>, Vec<f64>) = eta
        .iter()
        .zip(g)
        .filter(|(_, v)| v.im != 0.0)
        .map(|(e, v)| (e.ln(), v.im.abs().ln()))
        .unzip();
    let slope = ls_slope(&x, &y)?;
    let n = x.len() as f64;
    let intercept = (y.iter().sum::<f64>() - slope * x.iter().sum::<f64>()) / n;
    Some((intercept.exp(), -slope))
}

/// Overlap length of `[a0, a1]` and `[b0, b1]`.
fn overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

/// Probability vector over the cells of `bins` (centred on the nodes,
/// `dx x dy` each) plus a final entry for everything outside.
pub fn esd_histogram<K: Field>(esd: &SpectrumSample<K>, bins: &GridSpec) -> Result<Vec<f64>> {
    if esd.is_empty() {
        return Err(Error::Precondition("empty spectrum".into()));
    }
    let (dx, dy) = (bins.dx(), bins.dy());
    let (x0, y0) = (bins.re(0) - dx / 2.0, bins.im(0) - dy / 2.0);
    let mut hist = vec![0.0; bins.len() + 1];
    let w = 1.0 / esd.len() as f64;
    for &l in &esd.eigenvalues {
        let l = l.to_c64();
        let fi = ((l.re - x0) / dx).floor();
        let fj = ((l.im - y0) / dy).floor();
        let slot = if fi >= 0.0 && fj >= 0.0 && (fi as usize) < bins.nx && (fj as usize) < bins.ny {
            fi as usize * bins.ny + fj as usize
        } else {
            bins.len()
        };
        hist[slot] += w;
    }
    Ok(hist)
}

/// Brown mass per bin (same layout as [`esd_histogram`]) after clipping
/// negative cells to zero and renormalizing. Each interior node carries
/// the mass of its `dx x dy` cell, split among bins by overlap area.
pub fn brown_histogram(brown: &BrownEstimate, bins: &GridSpec) -> Result<Vec<f64>> {
    let g = &brown.grid;
    let (gdx, gdy) = (g.dx(), g.dy());
    let (bdx, bdy) = (bins.dx(), bins.dy());
    let interior = (g.re(1) - gdx / 2.0, g.re(g.nx - 2) + gdx / 2.0, g.im(1) - gdy / 2.0, g.im(g.ny - 2) + gdy / 2.0);
    let bin_box = (bins.re(0) - bdx / 2.0, bins.re(bins.nx - 1) + bdx / 2.0, bins.im(0) - bdy / 2.0, bins.im(bins.ny - 1) + bdy / 2.0);
    if overlap(interior.0, interior.1, bin_box.0, bin_box.1) * overlap(interior.2, interior.3, bin_box.2, bin_box.3) == 0.0 {
        return Err(Error::Grid("bins do not overlap the Brown grid".into()));
    }
    let mut hist = vec![0.0; bins.len() + 1];
    let (mx, my) = brown.density.dim();
    for a in 0..mx {
        for b in 0..my {
            let mass = brown.density[[a, b]].max(0.0) * gdx * gdy;
            if mass == 0.0 {
                continue;
            }
            let z = g.node(a + 1, b + 1);
            let (cx0, cx1, cy0, cy1) = (z.re - gdx / 2.0, z.re + gdx / 2.0, z.im - gdy / 2.0, z.im + gdy / 2.0);
            let mut placed = 0.0;
            for i in 0..bins.nx {
                let ox = overlap(cx0, cx1, bins.re(i) - bdx / 2.0, bins.re(i) + bdx / 2.0);
                if ox == 0.0 {
                    continue;
                }
                for j in 0..bins.ny {
                    let oy = overlap(cy0, cy1, bins.im(j) - bdy / 2.0, bins.im(j) + bdy / 2.0);
                    if oy > 0.0 {
                        let share = mass * ox * oy / (gdx * gdy);
                        hist[i * bins.ny + j] += share;
                        placed += share;
                    }
                }
            }
            hist[bins.len()] += (mass - placed).max(0.0);
        }
    }
    let total: f64 = hist.iter().sum();
    if total <= 0.0 {
        return Err(Error::Precondition("Brown estimate has no positive mass".into()));
    }
    hist.iter_mut().for_each(|v| *v /= total);
    Ok(hist)
}

/// Total-variation distance between the binned ESD and the binned,
/// clipped and renormalized Brown density.
pub fn compare_esd_brown<K: Field>(esd: &SpectrumSample<K>, brown: &BrownEstimate, bins: &GridSpec) -> Result<f64> {
    let a = esd_histogram(esd, bins)?;
    let b = brown_histogram(brown, bins)?;
    Ok(tv_distance(&a, &b))
}

/// `h` sampled from a closed form on every node of `grid`.
pub fn analytic_potential<F: Fn(c64) -> f64>(grid: &GridSpec, f: F) -> Array2<f64> {
    Array2::from_shape_fn((grid.nx, grid.ny), |(i, j)| f(grid.node(i, j)))
}

/// Restricts a field to the sub-grid of nodes `i0..i1`, `j0..j1`.
pub fn crop(field: &LogPotentialField, i0: usize, i1: usize, j0: usize, j1: usize) -> Result<LogPotentialField> {
    let g = &field.grid;
    let grid = GridSpec::new(g.re(i0), g.re(i1 - 1), g.im(j0), g.im(j1 - 1), i1 - i0, j1 - j0)?;
    Ok(LogPotentialField {
        grid,
        h: field.h.slice(s![i0..i1, j0..j1]).to_owned(),
        truncated_fraction: field.truncated_fraction.slice(s![i0..i1, j0..j1]).to_owned(),
        ..field.clone()
    })
}
