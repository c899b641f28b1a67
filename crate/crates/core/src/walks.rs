//! Test projections and random walks of small matrices.
//!
//! For a block column `j` of `L^z`, [`orthocomplement_basis`] draws an
//! orthonormal `U` (of size `(r+1)N x (r+1)`) orthogonal to all other block
//! columns. Its `N` square blocks `U_i` (the block-row view, `U_i(k, c) =
//! U[k N + i, c]`) turn the column into the small matrix
//! `sum_i U_i^* L_{i,j}`, whose random part is a Gaussian walk driven by the
//! walk matrix `Phi = (Q R)`.
//!
//! Throughout, `v_i^k` denotes the conjugate of row `i` of the block `U^k`
//! and the `s` vectors are those of the linearization in rotated
//! coordinates ([`Linearization::rotated_s`]).

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{JobSvd, SVDDC};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::linearize::{assemble_lz, Linearization, LzMatrix};
use crate::rmt::{conj_transpose, haar_unitary, sample_ginibre, singular_values, smallest_singular_value};
use crate::rng::{complex_gaussian, stream, Purpose};
use crate::scalar::{c64, real_to_f64, Field};
use crate::pseudospec::{check_ladder, TailEstimate, MIN_TAIL_TRIALS};

/// Relative singular-value cutoff for the retained columns.
pub const NULLSPACE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkBasis<K> {
    n: usize,
    r: usize,
    u: Array2<K>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkBasisHeader {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: usize,
}

impl<K: Field> WalkBasis<K> {
    /// Wraps a `(r+1)N x (r+1)` matrix.
    pub fn new(n: usize, u: Array2<K>) -> Result<Self> {
        let d = u.ncols();
        if d == 0 || u.nrows() != d * n {
            return Err(Error::Dimension(format!(
                "basis must be (r+1)N x (r+1) with N = {n}, got {:?}",
                u.dim()
            )));
        }
        Ok(WalkBasis { n, r: d - 1, u })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.r + 1
    }

    pub fn matrix(&self) -> &Array2<K> {
        &self.u
    }

    /// The `N x (r+1)` block `U^k`.
    pub fn upper(&self, k: usize) -> Array2<K> {
        self.u.slice(s![k * self.n..(k + 1) * self.n, ..]).to_owned()
    }

    /// The `(r+1) x (r+1)` block `U_i`.
    pub fn block(&self, i: usize) -> Array2<K> {
        let n = self.n;
        Array2::from_shape_fn((self.dim(), self.dim()), |(k, c)| self.u[[k * n + i, c]])
    }

    pub fn blocks(&self) -> Vec<Array2<K>> {
        (0..self.n).map(|i| self.block(i)).collect()
    }

    /// `v_i^k`: the conjugate of row `i` of `U^k` (column `k` of `U_i^*`).
    pub fn v(&self, i: usize, k: usize) -> Array1<K> {
        self.u.row(k * self.n + i).mapv(|z| z.conj())
    }

    /// `||U^* U - Id||_HS`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = conj_transpose(&self.u).dot(&self.u) - Array2::<K>::eye(self.dim());
        g.iter().map(|z| real_to_f64(z.square())).sum::<f64>().sqrt()
    }

    pub fn header(&self) -> WalkBasisHeader {
        WalkBasisHeader { n: self.n, r: self.r }
    }

    /// Column-major `(re, im)` pairs of little-endian `f64`.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        for c in 0..self.u.ncols() {
            for x in self.u.column(c) {
                let z = x.to_c64();
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Inverse of [`WalkBasis::write_binary`].
    pub fn read_binary(header: &WalkBasisHeader, bytes: &[u8]) -> Result<Self> {
        let d = header.r + 1;
        let rows = d * header.n;
        if bytes.len() != rows * d * 16 {
            return Err(Error::Dimension(format!(
                "expected {} bytes for N = {}, r = {}, got {}",
                rows * d * 16,
                header.n,
                header.r,
                bytes.len()
            )));
        }
        let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
        let u = Array2::from_shape_fn((rows, d), |(a, c)| {
            let k = 2 * (c * rows + a);
            K::from_c64(c64::new(f(k), f(k + 1)))
        });
        WalkBasis::new(header.n, u)
    }
}

/// Orthonormal basis of the orthogonal complement of the columns of `L^z`
/// outside block column `j`, twisted by a Haar unitary drawn from `rng`.
pub fn orthocomplement_basis_with<K: Field, G: Rng + ?Sized>(
    lz: &LzMatrix<K>,
    j: usize,
    rng: &mut G,
) -> Result<WalkBasis<K>> {
    if j >= lz.size {
        return Err(Error::Dimension(format!("block column {j} out of range 0..{}", lz.size)));
    }
    let d = lz.dim;
    let haar: Array2<K> = haar_unitary(d, rng);
    if lz.size == 1 {
        return WalkBasis::new(1, haar);
    }
    let kept = lz.retained_columns(j);
    let (u, sv, _) = kept.svddc(JobSvd::All)?;
    let u = u.expect("requested U");
    let smax = real_to_f64(sv[0]);
    let smin = real_to_f64(sv[sv.len() - 1]);
    if !(smin > NULLSPACE_TOLERANCE * smax) {
        return Err(Error::RankDeficient { smin });
    }
    let null = u.slice(s![.., kept.ncols()..]).to_owned();
    WalkBasis::new(lz.size, null.dot(&haar))
}

/// [`orthocomplement_basis_with`] on the stream `(seed, Haar, j)`.
pub fn orthocomplement_basis<K: Field>(lz: &LzMatrix<K>, j: usize, seed: u64) -> Result<WalkBasis<K>> {
    let mut rng = stream(seed, Purpose::Haar, j as u64);
    orthocomplement_basis_with(lz, j, &mut rng)
}

/// `sum_i U_i^* L_{i,j}` for the small blocks `col = (L_{1,j}, ..., L_{N,j})`.
pub fn test_projection<K: Field>(u: &WalkBasis<K>, col: &[Array2<K>]) -> Result<Array2<K>> {
    let d = u.dim();
    if col.len() != u.size() || col.iter().any(|b| b.dim() != (d, d)) {
        return Err(Error::Dimension(format!(
            "expected {} blocks of size {d}x{d}",
            u.size()
        )));
    }
    let mut acc = Array2::<K>::zeros((d, d));
    for (i, b) in col.iter().enumerate() {
        acc = acc + conj_transpose(&u.block(i)).dot(b);
    }
    Ok(acc)
}

/// Smallest singular values of all test projections of `L^z` next to
/// `smin(L^z)`.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionScan {
    pub smin_lz: f64,
    pub smin_projection: Vec<f64>,
    pub argmin: usize,
}

impl ReductionScan {
    /// `min_j smin(hat L_j) <= sqrt(N) smin(L^z)` up to relative `tol`.
    pub fn chain_holds(&self, tol: f64) -> bool {
        let n = self.smin_projection.len() as f64;
        self.smin_projection[self.argmin] <= n.sqrt() * self.smin_lz * (1.0 + tol)
    }
}

pub fn reduction_scan<K: Field>(lz: &LzMatrix<K>, seed: u64) -> Result<ReductionScan> {
    let smin_lz = real_to_f64(smallest_singular_value(&lz.matrix)?);
    let smin_projection = (0..lz.size)
        .map(|j| {
            let u = orthocomplement_basis(lz, j, seed)?;
            let h = test_projection(&u, &lz.block_column(j))?;
            Ok(real_to_f64(smallest_singular_value(&h)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let argmin = smin_projection
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, _)| j)
        .expect("N >= 1");
    Ok(ReductionScan {
        smin_lz,
        smin_projection,
        argmin,
    })
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det<K: Field>(m: &Array2<K>) -> K {
    let n = m.nrows();
    let mut a = m.clone();
    let mut det = K::one();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| real_to_f64(a[[x, c]].abs()).total_cmp(&real_to_f64(a[[y, c]].abs())))
            .expect("nonempty range");
        if a[[p, c]] == K::zero() {
            return K::zero();
        }
        if p != c {
            for k in 0..n {
                a.swap([p, k], [c, k]);
            }
            det = -det;
        }
        let pivot = a[[c, c]];
        det *= pivot;
        for r in c + 1..n {
            let f = a[[r, c]] / pivot;
            if f != K::zero() {
                for k in c..n {
                    let v = a[[c, k]];
                    a[[r, k]] -= f * v;
                }
            }
        }
    }
    det
}

/// `Q^l = sum_k s_{k,l} U^k` for `l = 1..=n` (index `l - 1`).
pub fn q_blocks<K: Field>(u: &WalkBasis<K>, s: &[Array1<K>]) -> Result<Vec<Array2<K>>> {
    check_s(u, s)?;
    let nv = s[0].len();
    let uppers: Vec<Array2<K>> = (0..u.dim()).map(|k| u.upper(k)).collect();
    Ok((0..nv)
        .map(|l| {
            let mut q = Array2::<K>::zeros((u.size(), u.dim()));
            for (k, up) in uppers.iter().enumerate() {
                q.scaled_add(s[k][l], up);
            }
            q
        })
        .collect())
}

fn check_s<K: Field>(u: &WalkBasis<K>, s: &[Array1<K>]) -> Result<()> {
    if s.len() != u.dim() {
        return Err(Error::Dimension(format!("need r+1 = {} vectors s_k, got {}", u.dim(), s.len())));
    }
    let nv = s[0].len();
    if nv < u.rank() || s.iter().any(|v| v.len() != nv) {
        return Err(Error::Dimension("s vectors must share a length n >= r".into()));
    }
    Ok(())
}

/// `w_i^l = sum_k conj(s_{k,l}) v_i^k`, i.e. the conjugate of row `i` of
/// `Q^l`.
pub fn w_vector<K: Field>(q: &[Array2<K>], l: usize, i: usize) -> Array1<K> {
    q[l - 1].row(i).mapv(|z| z.conj())
}

/// `Delta^l_{i_0..i_r} = det(w_{i_0}^l, v_{i_1}^0, ..., v_{i_r}^0)` by
/// direct evaluation; `l` is 1-based.
pub fn delta_value<K: Field>(u: &WalkBasis<K>, s: &[Array1<K>], l: usize, idx: &[usize]) -> Result<K> {
    let q = q_blocks(u, s)?;
    if idx.len() != u.dim() || l == 0 || l > q.len() {
        return Err(Error::Dimension("need r+1 indices and 1 <= l <= n".into()));
    }
    let d = u.dim();
    let mut m = Array2::<K>::zeros((d, d));
    m.column_mut(0).assign(&w_vector(&q, l, idx[0]));
    for c in 1..d {
        m.column_mut(c).assign(&u.v(idx[c], 0));
    }
    Ok(det(&m))
}

/// Largest `|Delta|` within one index family, with the index tuple that
/// attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaMax {
    pub value: f64,
    /// Variable index `l` (1-based, as in `x_l`); `0` for an empty family.
    pub ell: usize,
    /// Row indices `i_0, ..., i_r` (0-based); empty for an empty family.
    pub indices: Vec<usize>,
}

impl DeltaMax {
    fn empty() -> Self {
        DeltaMax {
            value: 0.0,
            ell: 0,
            indices: vec![],
        }
    }

    fn better(self, other: DeltaMax) -> DeltaMax {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaMode {
    /// Exact maxima over both families.
    #[default]
    Full,
    /// Stop as soon as both families exceed the threshold.
    Classify,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub delta_threshold: f64,
    /// Family `l in [r+1, n]`, all tuples.
    pub max_abs_delta1: DeltaMax,
    /// Family `l in [1, r]`, tuples with `i_0 = i_l`.
    pub max_abs_delta2: DeltaMax,
    pub structured: bool,
    /// `false` when a classify-mode scan stopped early, in which case the
    /// maxima are lower bounds.
    pub exhaustive: bool,
}

impl DeltaReport {
    pub fn max_abs_delta(&self) -> f64 {
        self.max_abs_delta1.value.max(self.max_abs_delta2.value)
    }
}

/// Cofactor vector `c` with `det(x, v_1, ..., v_r) = sum_a x_a c_a`.
fn cofactors<K: Field>(cols: &[Array1<K>]) -> Vec<K> {
    let d = cols.len() + 1;
    let mut m = Array2::<K>::zeros((d, d));
    for (c, v) in cols.iter().enumerate() {
        m.column_mut(c + 1).assign(v);
    }
    (0..d)
        .map(|a| {
            m.column_mut(0).fill(K::zero());
            m[[a, 0]] = K::one();
            det(&m)
        })
        .collect()
}

/// Decodes `t` into `r` base-`N` digits.
fn tuple(t: usize, r: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; r];
    let mut t = t;
    for k in (0..r).rev() {
        out[k] = t % n;
        t /= n;
    }
    out
}

/// Scans one family. `ells` are 1-based variable indices; `tied` restricts
/// the tuples to `i_0 = i_l`.
fn scan_family<K: Field>(
    u: &WalkBasis<K>,
    q: &[Array2<K>],
    ells: &[usize],
    tied: bool,
    stop_above: Option<f64>,
) -> DeltaMax {
    let (n, r) = (u.size(), u.rank());
    if ells.is_empty() {
        return DeltaMax::empty();
    }
    let v0: Vec<Array1<K>> = (0..n).map(|i| u.v(i, 0)).collect();
    let total = n.pow(r as u32);
    // Process tuples in chunks so a classify scan can stop between them.
    let chunk = 4096.max(total / 64);
    let mut best = DeltaMax::empty();
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        let part = (start..end)
            .into_par_iter()
            .map(|t| {
                let rest = tuple(t, r, n);
                let cols: Vec<Array1<K>> = rest.iter().map(|&i| v0[i].clone()).collect();
                let cof = cofactors(&cols);
                let mut local = DeltaMax::empty();
                for &l in ells {
                    let ql = &q[l - 1];
                    let rows: Vec<usize> = if tied { vec![rest[l - 1]] } else { (0..n).collect() };
                    for i0 in rows {
                        // w_{i0}^l = conj(row i0 of Q^l)
                        let val: K = (0..u.dim()).map(|a| ql[[i0, a]].conj() * cof[a]).sum();
                        let abs = real_to_f64(val.abs());
                        if abs > local.value {
                            let mut indices = vec![i0];
                            indices.extend_from_slice(&rest);
                            local = DeltaMax {
                                value: abs,
                                ell: l,
                                indices,
                            };
                        }
                    }
                }
                local
            })
            .reduce(DeltaMax::empty, DeltaMax::better);
        best = best.better(part);
        if let Some(th) = stop_above {
            if best.value >= th {
                break;
            }
        }
        start = end;
    }
    best
}

/// Maxima of `|Delta|` over both structured-set families.
pub fn delta_report<K: Field>(
    u: &WalkBasis<K>,
    s: &[Array1<K>],
    threshold: f64,
    mode: DeltaMode,
) -> Result<DeltaReport> {
    if !(threshold > 0.0) {
        return Err(Error::Precondition("threshold must be positive".into()));
    }
    let q = q_blocks(u, s)?;
    let nv = q.len();
    let r = u.rank();
    let stop = match mode {
        DeltaMode::Full => None,
        DeltaMode::Classify => Some(threshold),
    };
    let fam2: Vec<usize> = (1..=r).collect();
    let fam1: Vec<usize> = (r + 1..=nv).collect();
    // Family 2 is the smaller one; in classify mode each scan stops once it
    // exceeds the threshold.
    let d2 = scan_family(u, &q, &fam2, true, stop);
    let d1 = scan_family(u, &q, &fam1, false, stop);
    let exhaustive = stop.is_none() || (d1.value < threshold && d2.value < threshold);
    let structured = d1.value < threshold && d2.value < threshold;
    Ok(DeltaReport {
        delta_threshold: threshold,
        max_abs_delta1: d1,
        max_abs_delta2: d2,
        structured,
        exhaustive,
    })
}

/// `Phi = (Q R)`: rows `(l, i)` at `l N + i` (`l = 0` for `x_1`), columns
/// `b (r+1) + a`, the first `r + 1` holding `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkMatrix<K> {
    pub flat: Array2<K>,
    pub q_block: Array2<K>,
    pub r_block: Array2<K>,
}

pub fn walk_matrix<K: Field>(u: &WalkBasis<K>, s: &[Array1<K>]) -> Result<WalkMatrix<K>> {
    let q = q_blocks(u, s)?;
    let (n, d, nv) = (u.size(), u.dim(), q.len());
    let mut q_block = Array2::<K>::zeros((nv * n, d));
    for (l, ql) in q.iter().enumerate() {
        q_block.slice_mut(s![l * n..(l + 1) * n, ..]).assign(ql);
    }
    let u0 = u.upper(0);
    let mut r_block = Array2::<K>::zeros((nv * n, u.rank() * d));
    for b in 0..u.rank() {
        r_block
            .slice_mut(s![b * n..(b + 1) * n, b * d..(b + 1) * d])
            .assign(&u0);
    }
    let mut flat = Array2::<K>::zeros((nv * n, d * d));
    flat.slice_mut(s![.., 0..d]).assign(&q_block);
    flat.slice_mut(s![.., d..]).assign(&r_block);
    Ok(WalkMatrix { flat, q_block, r_block })
}

/// Column-major vectorization, matching the column order of
/// [`WalkMatrix::flat`].
pub fn vec_col_major<K: Field>(m: &Array2<K>) -> Array1<K> {
    m.t().iter().copied().collect()
}

/// Greedy rows of `U^0` with their wedge norms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowSelection {
    pub indices: Vec<usize>,
    /// `||v_{i_0} ^ ... ^ v_{i_k}||` for `k = 0..=r`.
    pub wedge_norms: Vec<f64>,
    pub alpha: f64,
}

/// Picks `r + 1` rows of the `N x (r+1)` matrix `u0`: first the longest,
/// then repeatedly the row farthest from the span of those chosen. Fails
/// when `smin(u0) < alpha` or if a wedge norm falls below
/// `(alpha / sqrt N)^{k+1}`.
pub fn select_rows<K: Field>(u0: &Array2<K>, alpha: f64) -> Result<RowSelection> {
    let (n, d) = u0.dim();
    if d == 0 || n < d {
        return Err(Error::Dimension(format!("need an N x (r+1) matrix with N >= r+1, got {n}x{d}")));
    }
    let smin = real_to_f64(smallest_singular_value(u0)?);
    if smin < alpha * (1.0 - 1e-12) {
        return Err(Error::Precondition(format!("smin(U0) = {smin:e} is below alpha = {alpha:e}")));
    }
    let rows: Vec<Array1<K>> = (0..n).map(|i| u0.row(i).mapv(|z| z.conj())).collect();
    let mut residual = rows.clone();
    let mut chosen = Vec::with_capacity(d);
    let mut wedge = Vec::with_capacity(d);
    let mut acc = 1.0;
    for _ in 0..d {
        let (best, dist) = residual
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(i))
            .map(|(i, v)| (i, v.iter().map(|z| real_to_f64(z.square())).sum::<f64>().sqrt()))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("rows remain");
        chosen.push(best);
        acc *= dist;
        wedge.push(acc);
        if dist == 0.0 {
            break;
        }
        let e = residual[best].mapv(|z| z.div_real(K::real(dist)));
        for v in residual.iter_mut() {
            let c: K = e.iter().zip(v.iter()).map(|(a, b)| a.conj() * *b).sum();
            v.scaled_add(-c, &e);
        }
    }
    let scale = alpha / (n as f64).sqrt();
    for (k, &w) in wedge.iter().enumerate() {
        if w < scale.powi(k as i32 + 1) * (1.0 - 1e-9) {
            return Err(Error::Precondition(format!(
                "wedge norm {w:e} of {} rows is below the guaranteed {:e}",
                k + 1,
                scale.powi(k as i32 + 1)
            )));
        }
    }
    Ok(RowSelection {
        indices: chosen,
        wedge_norms: wedge,
        alpha,
    })
}

/// `||v_{i_0} ^ ... ^ v_{i_k}||` for rows of `u0`, as the square root of
/// the Gram determinant.
pub fn wedge_norm<K: Field>(u0: &Array2<K>, idx: &[usize]) -> f64 {
    let m = idx.len();
    let g = Array2::from_shape_fn((m, m), |(a, b)| {
        u0.row(idx[a])
            .iter()
            .zip(u0.row(idx[b]).iter())
            .map(|(x, y)| *x * y.conj())
            .sum::<K>()
    });
    real_to_f64(det(&g).abs()).sqrt()
}

/// `M = U_1^* K^z` where `U_1` is the block of row index `0`.
pub fn walk_shift<K: Field>(u: &WalkBasis<K>, lin: &Linearization<K>, z: K) -> Array2<K> {
    conj_transpose(&u.block(0)).dot(&lin.shift(z).matrix())
}

/// Tail of `|det W|` for `W = M + sum_i U_i^* Lin(xi_i)`, where `Lin` is the
/// rotated pencil and `xi_i` has i.i.d. complex Gaussian entries of
/// variance `1/N`.
pub fn det_tail_experiment<K: Field>(
    u: &WalkBasis<K>,
    lin: &Linearization<K>,
    shift: &Array2<K>,
    eps_ladder: &[f64],
    trials: usize,
    seed: u64,
) -> Result<TailEstimate> {
    check_ladder(eps_ladder)?;
    if trials < MIN_TAIL_TRIALS {
        return Err(Error::Precondition(format!(
            "tail estimates need at least {MIN_TAIL_TRIALS} trials, got {trials}"
        )));
    }
    let d = u.dim();
    if lin.dim() != d || shift.dim() != (d, d) {
        return Err(Error::Dimension(format!("basis, pencil and shift need block size {d}")));
    }
    let rs = lin.rotated_s();
    let nv = lin.num_vars();
    let n = u.size();
    let adj: Vec<Array2<K>> = u.blocks().iter().map(conj_transpose).collect();
    let var = 1.0 / n as f64;
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Walk, t as u64);
            let mut w = shift.clone();
            for a in &adj {
                let xi: Vec<K> = (0..nv).map(|_| complex_gaussian::<K, _>(&mut rng, var)).collect();
                w = w + a.dot(&lin.pencil_rotated(&xi, &rs));
            }
            real_to_f64(det(&w).abs())
        })
        .collect();
    TailEstimate::from_samples(c64::new(0.0, 0.0), n, eps_ladder, &samples, 0)
}

/// A fresh draw of `L^z` from Ginibre inputs on stream `(seed, Matrices,
/// index)`.
pub fn sample_lz<K: Field>(lin: &Linearization<K>, n: usize, z: K, seed: u64, index: u64) -> Result<LzMatrix<K>> {
    let mut rng = stream(seed, Purpose::Matrices, index);
    let xs: Vec<Array2<K>> = (0..lin.num_vars())
        .map(|_| sample_ginibre::<K, _>(n, &mut rng).into_inner())
        .collect();
    assemble_lz(lin, &xs, z)
}

/// `smin(U^0)`.
pub fn smin_zeroth_block<K: Field>(u: &WalkBasis<K>) -> Result<f64> {
    Ok(real_to_f64(singular_values(&u.upper(0))?.smin()))
}
