//! Linearization of degree-two polynomials.
//!
//! For `p(x) = sum a_lm x_l x_m + sum b_l x_l + gamma` with coefficient
//! matrix `A = U S V*` of rank `r`, set `r_k = conj(u_k)`, `s_k = s_k v_k`
//! (`k = 1..r`) and `s_0 = conj(b)`. With `<v, x> = sum conj(v_l) x_l`, the
//! `(r+1) x (r+1)` pencil
//!
//! ```text
//! L^z(x) = [ <s_0,x> + gamma - z   <r_1,x>  ...  <r_r,x> ]
//!          [ <s_1,x>                 -1              0    ]
//!          [   ...                          ...           ]
//!          [ <s_r,x>                  0             -1    ]
//! ```
//!
//! has `(p(x) - z)^{-1}` as the top-left entry of its inverse (Schur
//! complement). Plugging in `N x N` matrices gives the block matrix `L^z`.
//! The rotation `R` (rows `r_1..r_n`) maps raw inputs to coordinates in
//! which the top row reads `X_1 .. X_r`.

use ndarray::{s, Array1, Array2, ArrayView2};
use ndarray_linalg::{Inverse, SVD};
use num_traits::Float;
use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ncpoly::{NcPoly, QuadraticData};
use crate::rmt::{conj_transpose, hs_norm, shifted, smallest_singular_value};
use crate::scalar::{c64, real_to_f64, Field};

/// Smallest singular value below which `P - z` or `L^z` counts as singular
/// in [`verify_schur`].
pub const SINGULAR_CUTOFF: f64 = 1e-10;

/// Tolerance used to validate hand-built linearizations.
pub fn structural_tolerance<K: Field>() -> f64 {
    (100.0 * real_to_f64(K::Real::epsilon())).max(1e-10)
}

/// `K^z = diag(gamma - z, -Id_r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockShift<K> {
    pub z: K,
    pub gamma: K,
    pub dim: usize,
}

impl<K: Field> BlockShift<K> {
    pub fn matrix(&self) -> Array2<K> {
        let mut m = Array2::<K>::zeros((self.dim, self.dim));
        m[[0, 0]] = self.gamma - self.z;
        for k in 1..self.dim {
            m[[k, k]] = -K::one();
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct Linearization<K> {
    rank: usize,
    s: Vec<Array1<K>>,
    rotation: Array2<K>,
    gamma: K,
    source: NcPoly,
}

fn inner<K: Field>(v: &Array1<K>, x: &[K]) -> K {
    v.iter().zip(x).map(|(a, b)| a.conj() * *b).sum()
}

impl<K: Field> Linearization<K> {
    /// SVD-based linearization of a degree-two polynomial.
    pub fn build(p: &NcPoly) -> Result<Self> {
        if p.degree() != 2 {
            return Err(Error::Degree {
                found: p.degree(),
                context: "linearization needs a polynomial of degree exactly 2",
            });
        }
        let q = QuadraticData::from_poly(p)?;
        if q.rank == 0 {
            return Err(Error::Precondition("quadratic part has numerical rank 0".into()));
        }
        let n = q.num_vars();
        let (u, sigma, vt) = q.a.svd(true, true)?;
        let u = u.expect("requested U");
        let vt = vt.expect("requested V*");
        let mut s = Vec::with_capacity(q.rank + 1);
        s.push(q.b.mapv(|b| K::from_c64(b.conj())));
        for k in 0..q.rank {
            // v_k = conj(row k of V*)
            s.push(Array1::from_shape_fn(n, |l| K::from_c64(vt[[k, l]].conj() * sigma[k])));
        }
        // Rows of R are conj(u_k); the remaining columns of the full U
        // complete u_1..u_r to an orthonormal basis.
        let rotation = conj_transpose(&u).mapv(K::from_c64);
        Ok(Linearization {
            rank: q.rank,
            s,
            rotation,
            gamma: K::from_c64(q.gamma),
            source: p.clone(),
        })
    }

    /// A linearization with explicitly chosen vectors, validated against
    /// `source` (rotation unitary, `s_1..s_r` orthogonal and nonzero, and
    /// the coefficients of `source` reproduced).
    pub fn from_parts(source: &NcPoly, s: Vec<Array1<K>>, rotation: Array2<K>, gamma: K) -> Result<Self> {
        let n = source.num_vars();
        if s.len() < 2 {
            return Err(Error::Precondition("need s_0 and at least one s_k".into()));
        }
        if s.iter().any(|v| v.len() != n) || rotation.dim() != (n, n) {
            return Err(Error::Dimension(format!("vectors must have length {n} and R be {n}x{n}")));
        }
        let lin = Linearization {
            rank: s.len() - 1,
            s,
            rotation,
            gamma,
            source: source.clone(),
        };
        let tol = structural_tolerance::<K>();
        let unit = hs_norm(&(lin.rotation.dot(&conj_transpose(&lin.rotation)) - Array2::<K>::eye(n)));
        if real_to_f64(unit) > tol {
            return Err(Error::Precondition("rotation is not unitary".into()));
        }
        let g = lin.gram();
        for i in 0..lin.rank {
            if real_to_f64(g[[i, i]].abs()) <= tol {
                return Err(Error::Precondition(format!("s_{} vanishes", i + 1)));
            }
            for j in 0..lin.rank {
                if i != j && real_to_f64(g[[i, j]].abs()) > tol * (1.0 + real_to_f64(g[[i, i]].abs())) {
                    return Err(Error::Precondition("s_1..s_r are not orthogonal".into()));
                }
            }
        }
        let q = QuadraticData::from_poly(source)?;
        let a = lin.reconstructed_quadratic();
        let err_a = a
            .iter()
            .zip(q.a.iter())
            .map(|(x, y)| (x.to_c64() - y).norm())
            .fold(0.0, f64::max);
        let err_b = lin.s[0]
            .iter()
            .zip(q.b.iter())
            .map(|(x, y)| (x.to_c64().conj() - y).norm())
            .fold(0.0, f64::max);
        let err_g = (gamma.to_c64() - q.gamma).norm();
        let scale = 1.0 + q.a.iter().chain(q.b.iter()).map(|z| z.norm()).fold(0.0, f64::max);
        if err_a.max(err_b).max(err_g) > tol * scale {
            return Err(Error::Precondition("vectors do not reproduce the polynomial".into()));
        }
        Ok(lin)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Block dimension `r + 1`.
    pub fn dim(&self) -> usize {
        self.rank + 1
    }

    pub fn num_vars(&self) -> usize {
        self.rotation.nrows()
    }

    pub fn s(&self) -> &[Array1<K>] {
        &self.s
    }

    pub fn rotation(&self) -> &Array2<K> {
        &self.rotation
    }

    pub fn gamma(&self) -> K {
        self.gamma
    }

    pub fn source(&self) -> &NcPoly {
        &self.source
    }

    /// `r_k` (row `k - 1` of the rotation), for `k` in `1..=n`.
    pub fn r(&self, k: usize) -> Array1<K> {
        self.rotation.row(k - 1).to_owned()
    }

    /// Gram matrix of `s_1..s_r`.
    pub fn gram(&self) -> Array2<K> {
        let r = self.rank;
        Array2::from_shape_fn((r, r), |(i, j)| {
            self.s[i + 1]
                .iter()
                .zip(self.s[j + 1].iter())
                .map(|(a, b)| a.conj() * *b)
                .sum()
        })
    }

    /// Coefficients `a_lm = sum_k conj(r_kl) conj(s_km)` of
    /// `sum_k <r_k,x><s_k,x>`.
    pub fn reconstructed_quadratic(&self) -> Array2<K> {
        let n = self.num_vars();
        Array2::from_shape_fn((n, n), |(l, m)| {
            (1..=self.rank)
                .map(|k| self.rotation[[k - 1, l]].conj() * self.s[k][m].conj())
                .sum()
        })
    }

    /// `s_k` expressed in rotated coordinates `y = conj(R) x`, where the top
    /// row of the pencil reads `y_1 .. y_r`.
    pub fn rotated_s(&self) -> Vec<Array1<K>> {
        let rbar = self.rotation.mapv(|z| z.conj());
        self.s.iter().map(|v| rbar.dot(v)).collect()
    }

    pub fn shift(&self, z: K) -> BlockShift<K> {
        BlockShift {
            z,
            gamma: self.gamma,
            dim: self.dim(),
        }
    }

    /// The pencil without shift, `L(x)`, at a scalar point `x` in raw
    /// coordinates.
    pub fn pencil(&self, x: &[K]) -> Array2<K> {
        let d = self.dim();
        let mut m = Array2::<K>::zeros((d, d));
        m[[0, 0]] = inner(&self.s[0], x);
        for k in 1..d {
            m[[0, k]] = inner(&self.r(k), x);
            m[[k, 0]] = inner(&self.s[k], x);
        }
        m
    }

    /// The pencil at a point `y` given in rotated coordinates.
    pub fn pencil_rotated(&self, y: &[K], rotated_s: &[Array1<K>]) -> Array2<K> {
        let d = self.dim();
        let mut m = Array2::<K>::zeros((d, d));
        m[[0, 0]] = inner(&rotated_s[0], y);
        for k in 1..d {
            m[[0, k]] = y[k - 1];
            m[[k, 0]] = inner(&rotated_s[k], y);
        }
        m
    }

    /// JSON form: `{rank, s, rotation, gamma}` with complex numbers as
    /// `[re, im]` pairs and the rotation row-major.
    pub fn to_json(&self) -> LinearizationJson {
        let pair = |z: K| {
            let z = z.to_c64();
            [z.re, z.im]
        };
        LinearizationJson {
            rank: self.rank,
            s: self.s.iter().map(|v| v.iter().map(|&z| pair(z)).collect()).collect(),
            rotation: self.rotation.iter().map(|&z| pair(z)).collect(),
            gamma: pair(self.gamma),
        }
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, &self.to_json())?;
        Ok(())
    }
}

/// Shorthand for [`Linearization::build`].
pub fn build_linearization<K: Field>(p: &NcPoly) -> Result<Linearization<K>> {
    Linearization::build(p)
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearizationJson {
    pub rank: usize,
    pub s: Vec<Vec<[f64; 2]>>,
    pub rotation: Vec<[f64; 2]>,
    pub gamma: [f64; 2],
}

/// A `(r+1)N x (r+1)N` block matrix with `(r+1) x (r+1)` blocks of size
/// `N`. Entry `((k, i), (l, j))` sits at row `k N + i`, column `l N + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LzMatrix<K> {
    pub dim: usize,
    pub size: usize,
    pub matrix: Array2<K>,
}

impl<K: Field> LzMatrix<K> {
    /// The `N x N` block `L^{k,l}`.
    pub fn block(&self, k: usize, l: usize) -> ArrayView2<'_, K> {
        let n = self.size;
        self.matrix.slice(s![k * n..(k + 1) * n, l * n..(l + 1) * n])
    }

    /// The small block `L_{i,j}` (block-row view): entry `(k, l)` is
    /// `L^{k,l}(i, j)`.
    pub fn entry_block(&self, i: usize, j: usize) -> Array2<K> {
        let n = self.size;
        Array2::from_shape_fn((self.dim, self.dim), |(k, l)| self.matrix[[k * n + i, l * n + j]])
    }

    /// Block column `j`: the `N` small blocks `L_{1,j}, ..., L_{N,j}`.
    pub fn block_column(&self, j: usize) -> Vec<Array2<K>> {
        (0..self.size).map(|i| self.entry_block(i, j)).collect()
    }

    /// The `(r+1)(N-1)` columns of the matrix that do not belong to block
    /// column `j`.
    pub fn retained_columns(&self, j: usize) -> Array2<K> {
        let n = self.size;
        let keep: Vec<usize> = (0..self.dim)
            .flat_map(|l| (0..n).filter(move |&jj| jj != j).map(move |jj| l * n + jj))
            .collect();
        let rows = self.matrix.nrows();
        Array2::from_shape_fn((rows, keep.len()), |(a, b)| self.matrix[[a, keep[b]]])
    }
}

/// Assembles `L^z = L + K^z (x) Id_N` from raw (unrotated) inputs.
pub fn assemble_lz<K: Field>(lin: &Linearization<K>, xs: &[Array2<K>], z: K) -> Result<LzMatrix<K>> {
    let nv = lin.num_vars();
    if xs.len() < nv {
        return Err(Error::Dimension(format!("need {nv} matrices, got {}", xs.len())));
    }
    let n = xs[0].nrows();
    if xs[..nv].iter().any(|x| x.dim() != (n, n)) {
        return Err(Error::Dimension("input matrices must be square of equal size".into()));
    }
    let d = lin.dim();
    let combo = |coeffs: &dyn Fn(usize) -> K| {
        let mut acc = Array2::<K>::zeros((n, n));
        for (l, x) in xs[..nv].iter().enumerate() {
            let c = coeffs(l);
            if !c.is_zero() {
                acc.scaled_add(c, x);
            }
        }
        acc
    };
    let mut m = Array2::<K>::zeros((d * n, d * n));
    for k in 0..d {
        let y = combo(&|l| lin.s[k][l].conj());
        m.slice_mut(s![k * n..(k + 1) * n, 0..n]).assign(&y);
    }
    for k in 1..d {
        let xk = combo(&|l| lin.rotation[[k - 1, l]].conj());
        m.slice_mut(s![0..n, k * n..(k + 1) * n]).assign(&xk);
    }
    let shift = lin.shift(z).matrix();
    for k in 0..d {
        for i in 0..n {
            m[[k * n + i, k * n + i]] += shift[[k, k]];
        }
    }
    Ok(LzMatrix {
        dim: d,
        size: n,
        matrix: m,
    })
}

/// Outcome of a numerical check of the Schur-complement identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurCheck {
    /// `||((L^z)^{-1})_{11} - (P - z)^{-1}||_HS / ||(P - z)^{-1}||_HS`.
    pub residual: f64,
    pub smin_poly: f64,
    pub smin_lz: f64,
}

impl SchurCheck {
    /// `||(P - z)^{-1}||_op <= ||(L^z)^{-1}||_op`, i.e.
    /// `smin(L^z) <= smin(P - z)` up to relative rounding `tol`.
    pub fn norm_bound_holds(&self, tol: f64) -> bool {
        self.smin_lz <= self.smin_poly * (1.0 + tol)
    }
}

/// Compares the top-left `N x N` block of `(L^z)^{-1}` with `(P - z)^{-1}`,
/// both obtained by dense inversion.
pub fn verify_schur<K: Field>(lin: &Linearization<K>, xs: &[Array2<K>], z: K) -> Result<SchurCheck> {
    let p = lin.source.evaluate(xs)?;
    let n = p.nrows();
    let pz = shifted(&p, z);
    let smin_poly = real_to_f64(smallest_singular_value(&pz)?);
    if smin_poly <= SINGULAR_CUTOFF {
        return Err(Error::Singular {
            which: "P - z",
            smin: smin_poly,
        });
    }
    let lz = assemble_lz(lin, xs, z)?;
    let smin_lz = real_to_f64(smallest_singular_value(&lz.matrix)?);
    if smin_lz <= SINGULAR_CUTOFF {
        return Err(Error::Singular {
            which: "L^z",
            smin: smin_lz,
        });
    }
    let inv_p = pz.inv()?;
    let inv_l = lz.matrix.inv()?;
    let corner = inv_l.slice(s![0..n, 0..n]).to_owned();
    let residual = real_to_f64(hs_norm(&(corner - &inv_p))) / real_to_f64(hs_norm(&inv_p));
    Ok(SchurCheck {
        residual,
        smin_poly,
        smin_lz,
    })
}

/// Rebuilds the `(r+1)N` pencil for a hand-built gauge: multiplies `u_k`
/// and `v_k` by the same phase `e^{i theta_k}`, which leaves `A` unchanged.
pub fn regauge<K: Field>(lin: &Linearization<K>, phases: &[f64]) -> Result<Linearization<K>> {
    let mut s = lin.s.clone();
    let mut rot = lin.rotation.clone();
    for (k, &theta) in phases.iter().enumerate().take(lin.rank) {
        let ph = K::from_c64(c64::from_polar(1.0, theta));
        // r_k = conj(u_k) picks up conj(phase); s_k = sigma v_k picks up phase.
        rot.row_mut(k).mapv_inplace(|x| x * ph.conj());
        s[k + 1].mapv_inplace(|x| x * ph);
    }
    Linearization::from_parts(&lin.source, s, rot, lin.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;
    use ndarray::array;

    fn c(re: f64, im: f64) -> c64 {
        c64::new(re, im)
    }

    #[test]
    fn anticommutator_rank_two() {
        let p = parse("x1*x2 + x2*x1").unwrap();
        let lin: Linearization<c64> = Linearization::build(&p).unwrap();
        assert_eq!(lin.rank(), 2);
        assert_eq!(lin.dim(), 3);
        let a = lin.reconstructed_quadratic();
        let expect = array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]];
        assert!(hs_norm(&(a - expect)) < 1e-12);
    }

    #[test]
    fn square_of_single_variable() {
        let lin: Linearization<c64> = Linearization::build(&parse("x1*x1").unwrap()).unwrap();
        assert_eq!(lin.rank(), 1);
        assert!(lin.s()[0].iter().all(|z| z.norm() == 0.0));
        assert!((lin.s()[1][0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_rank_one() {
        let lin: Linearization<c64> = Linearization::build(&parse("x1*x2").unwrap()).unwrap();
        assert_eq!(lin.rank(), 1);
        let s1 = &lin.s()[1];
        assert!(s1[0].norm() < 1e-12);
        assert!((s1[1].norm() - 1.0).abs() < 1e-12, "sigma_1 = 1, s_1 = e_2 up to phase");
    }

    #[test]
    fn rejects_wrong_degree() {
        assert!(matches!(
            Linearization::<c64>::build(&parse("x1 + 1").unwrap()),
            Err(Error::Degree { found: 1, .. })
        ));
        assert!(matches!(
            Linearization::<c64>::build(&parse("x1*x1*x2").unwrap()),
            Err(Error::Degree { found: 3, .. })
        ));
    }

    #[test]
    fn scalar_anticommutator_pencil() {
        // Outline gauge: s_1 = e_2, s_2 = e_1, R = Id.
        let p = parse("x1*x2 + x2*x1").unwrap();
        let e1 = array![c(1., 0.), c(0., 0.)];
        let e2 = array![c(0., 0.), c(1., 0.)];
        let lin = Linearization::from_parts(&p, vec![Array1::zeros(2), e2, e1], Array2::eye(2), c(0., 0.)).unwrap();
        let (x1, x2) = (c(0.3, -0.2), c(-1.1, 0.4));
        let lz = assemble_lz(&lin, &[array![[x1]], array![[x2]]], c(0., 0.)).unwrap();
        let expect = array![
            [c(0., 0.), x1, x2],
            [x2, c(-1., 0.), c(0., 0.)],
            [x1, c(0., 0.), c(-1., 0.)]
        ];
        assert_eq!(lz.matrix, expect);
    }

    #[test]
    fn zero_inputs_give_pure_shift() {
        let lin: Linearization<c64> = Linearization::build(&parse("x1*x2 + x2*x1").unwrap()).unwrap();
        let zeros = vec![Array2::<c64>::zeros((4, 4)); 2];
        let lz = assemble_lz(&lin, &zeros, c(1., 0.)).unwrap();
        assert_eq!(lz.matrix, Array2::from_diag_elem(12, c(-1., 0.)));
    }

    #[test]
    fn identity_input_scalar_case() {
        let lin: Linearization<c64> = Linearization::build(&parse("x1*x1").unwrap()).unwrap();
        let chk = verify_schur(&lin, &[Array2::eye(3)], c(2., 0.)).unwrap();
        assert!(chk.residual <= 1e-12, "{}", chk.residual);
        assert!(chk.norm_bound_holds(1e-9));
    }

    #[test]
    fn singular_inputs_are_reported() {
        let lin: Linearization<c64> = Linearization::build(&parse("x1*x1").unwrap()).unwrap();
        // P - z = Id - 1 = 0
        let err = verify_schur(&lin, &[Array2::eye(2)], c(1., 0.)).unwrap_err();
        assert!(matches!(err, Error::Singular { which: "P - z", .. }));
    }

    #[test]
    fn from_parts_rejects_invalid() {
        let p = parse("x1*x2 + x2*x1").unwrap();
        let e1 = array![c(1., 0.), c(0., 0.)];
        let e2 = array![c(0., 0.), c(1., 0.)];
        // wrong pairing reproduces x1*x1 + x2*x2 instead
        assert!(Linearization::from_parts(&p, vec![Array1::zeros(2), e1.clone(), e2.clone()], Array2::eye(2), c(0., 0.)).is_err());
        let bad_rot = array![[c(1., 0.), c(1., 0.)], [c(0., 0.), c(1., 0.)]];
        assert!(Linearization::from_parts(&p, vec![Array1::zeros(2), e2, e1], bad_rot, c(0., 0.)).is_err());
    }

    #[test]
    fn json_layout() {
        let lin: Linearization<c64> = Linearization::build(&parse("x1*x2 + 0.5*x1 + 2").unwrap()).unwrap();
        let v = serde_json::to_value(lin.to_json()).unwrap();
        assert_eq!(v["rank"], 1);
        assert_eq!(v["s"].as_array().unwrap().len(), 2);
        assert_eq!(v["rotation"].as_array().unwrap().len(), 4);
        assert_eq!(v["gamma"][0], 2.0);
        assert_eq!(v["s"][0][0][0], 0.5);
    }

    fn random_inputs(n: usize, size: usize, seed: u64) -> Vec<Array2<c64>> {
        let mut rng = crate::rng::stream(seed, crate::rng::Purpose::Matrices, 0);
        (0..n).map(|_| crate::rmt::sample_ginibre(size, &mut rng).into_inner()).collect()
    }

    #[test]
    fn random_schur_residuals() {
        let polys = [
            "x1*x2 + x2*x1",
            "x1*x2 - 0.3*x2*x3 + 0.1*x3*x1",
            "x1*x1 + (0.5+1i)*x2 - 2",
            "x1*x2 + x2*x3 + x3*x4 + x4*x1 + x1",
        ];
        for (t, text) in polys.iter().enumerate() {
            let p = parse(text).unwrap();
            let lin: Linearization<c64> = Linearization::build(&p).unwrap();
            let xs = random_inputs(p.num_vars(), 40, 7 + t as u64);
            let chk = verify_schur(&lin, &xs, c(0.4, 0.9)).unwrap();
            assert!(chk.residual <= 1e-9, "{text}: {}", chk.residual);
            assert!(chk.norm_bound_holds(1e-9), "{text}: {chk:?}");
        }
    }

    #[test]
    fn single_precision_pencil() {
        use crate::scalar::c32;
        let p = parse("x1*x2 + x2*x1").unwrap();
        let lin: Linearization<c32> = Linearization::build(&p).unwrap();
        let xs: Vec<Array2<c32>> = random_inputs(2, 16, 3).iter().map(|x| x.mapv(c32::from_c64)).collect();
        let chk = verify_schur(&lin, &xs, c32::new(1.5, 0.5)).unwrap();
        assert!(chk.residual <= 1e-4, "{}", chk.residual);
    }

    #[test]
    fn gauge_change_keeps_identity() {
        let p = parse("x1*x2 - 0.3*x2*x3 + 0.1*x3*x1").unwrap();
        let lin: Linearization<c64> = Linearization::build(&p).unwrap();
        let other = regauge(&lin, &[0.7, -2.1, 3.0]).unwrap();
        assert_ne!(lin.s()[1], other.s()[1]);
        let xs = random_inputs(3, 30, 11);
        let z = c(-0.2, 0.3);
        let a = verify_schur(&lin, &xs, z).unwrap();
        let b = verify_schur(&other, &xs, z).unwrap();
        assert!(a.residual <= 1e-9 && b.residual <= 1e-9);
        assert!((a.smin_poly - b.smin_poly).abs() < 1e-12);
    }

    #[test]
    fn rotated_pencil_matches_raw() {
        let p = parse("x1*x2 - 0.3*x2*x3 + 0.1*x3*x1 + 2*x2").unwrap();
        let lin: Linearization<c64> = Linearization::build(&p).unwrap();
        let x = [c(0.3, 0.1), c(-0.5, 0.8), c(1.2, -0.4)];
        let y: Vec<c64> = lin.rotation().mapv(|z| z.conj()).dot(&Array1::from(x.to_vec())).to_vec();
        let raw = lin.pencil(&x);
        let rot = lin.pencil_rotated(&y, &lin.rotated_s());
        assert!(hs_norm(&(raw - rot)) < 1e-12);
    }
}
