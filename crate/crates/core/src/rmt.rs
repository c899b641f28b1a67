//! Ginibre sampling and dense spectral decompositions.

use ndarray::{Array2, ArrayView2};
use ndarray_linalg::{EigVals, JobSvd, QR, SVDDC};
use num_traits::{Float, Zero};
use rand::Rng;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;
use crate::rng::complex_gaussian;
use crate::scalar::{real_to_f64, Field};

/// An `N x N` complex Ginibre matrix: i.i.d. entries with `E|X_ij|^2 = 1/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GinibreSample<K> {
    entries: Array2<K>,
}

impl<K: Field> GinibreSample<K> {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<K> {
        &self.entries
    }

    pub fn into_inner(self) -> Array2<K> {
        self.entries
    }
}

/// Draws an `n x n` Ginibre matrix. Real and imaginary parts of each entry
/// are independent `N(0, 1/(2n))`.
pub fn sample_ginibre<K: Field, G: Rng + ?Sized>(n: usize, rng: &mut G) -> GinibreSample<K> {
    assert!(n >= 1, "Ginibre size must be positive");
    let var = 1.0 / n as f64;
    let entries = Array2::from_shape_simple_fn((n, n), || complex_gaussian::<K, G>(rng, var));
    GinibreSample { entries }
}

/// Draws `p.num_vars()` independent Ginibre matrices and evaluates `p` on
/// them.
pub fn sample_polynomial<K: Field, G: Rng + ?Sized>(
    p: &NcPoly,
    n: usize,
    rng: &mut G,
) -> Result<Array2<K>> {
    let xs: Vec<Array2<K>> = (0..p.num_vars())
        .map(|_| sample_ginibre::<K, G>(n, rng).into_inner())
        .collect();
    p.evaluate(&xs)
}

/// Eigenvalues of a square matrix, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample<K> {
    pub eigenvalues: Vec<K>,
}

impl<K: Field> SpectrumSample<K> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> K {
        self.eigenvalues.iter().copied().sum()
    }

    pub fn extend(&mut self, other: SpectrumSample<K>) {
        self.eigenvalues.extend(other.eigenvalues);
    }

    /// CSV with header `re,im`, one eigenvalue per row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "re,im")?;
        for z in &self.eigenvalues {
            let z = z.to_c64();
            writeln!(w, "{},{}", z.re, z.im)?;
        }
        Ok(())
    }
}

/// Singular values in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum<R> {
    pub values: Vec<R>,
}

impl<R: Float> SingularSpectrum<R> {
    pub fn smin(&self) -> R {
        self.values.last().copied().unwrap_or_else(R::zero)
    }

    pub fn smax(&self) -> R {
        self.values.first().copied().unwrap_or_else(R::zero)
    }

    /// One value per line.
    pub fn write_lines<W: Write>(&self, mut w: W) -> Result<()> {
        for v in &self.values {
            writeln!(w, "{}", real_to_f64(*v))?;
        }
        Ok(())
    }
}

fn check_finite<K: Field>(m: &ArrayView2<K>) -> Result<()> {
    if m.iter().all(|z| z.re().is_finite() && z.im().is_finite()) {
        Ok(())
    } else {
        Err(Error::Precondition("matrix has non-finite entries".into()))
    }
}

/// All eigenvalues of a square matrix (Hessenberg QR through LAPACK).
pub fn esd<K: Field>(m: &Array2<K>) -> Result<SpectrumSample<K>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    check_finite(&m.view())?;
    if m.is_empty() {
        return Ok(SpectrumSample { eigenvalues: vec![] });
    }
    let ev = m.eigvals()?;
    Ok(SpectrumSample {
        eigenvalues: ev.to_vec(),
    })
}

/// Full singular spectrum of a rectangular matrix.
pub fn singular_values<K: Field>(m: &Array2<K>) -> Result<SingularSpectrum<K::Real>> {
    check_finite(&m.view())?;
    if m.is_empty() {
        return Ok(SingularSpectrum { values: vec![] });
    }
    let (_, s, _) = m.svddc(JobSvd::None)?;
    let mut values = s.to_vec();
    // LAPACK returns them sorted already; make the contract explicit.
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(SingularSpectrum { values })
}

pub fn smallest_singular_value<K: Field>(m: &Array2<K>) -> Result<K::Real> {
    Ok(singular_values(m)?.smin())
}

/// `sigma_1(m) <= bound`.
pub fn operator_norm_check<K: Field>(m: &Array2<K>, bound: K::Real) -> Result<bool> {
    Ok(singular_values(m)?.smax() <= bound)
}

pub fn conj_transpose<K: Field>(m: &Array2<K>) -> Array2<K> {
    m.t().mapv(|z| z.conj())
}

/// `m - z Id`.
pub fn shifted<K: Field>(m: &Array2<K>, z: K) -> Array2<K> {
    let mut out = m.clone();
    for i in 0..out.nrows().min(out.ncols()) {
        out[[i, i]] -= z;
    }
    out
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm<K: Field>(m: &Array2<K>) -> K::Real {
    m.iter()
        .map(|z| z.square())
        .fold(K::Real::zero(), |a, b| a + b)
        .sqrt()
}

/// Haar-distributed unitary of size `n`: QR of a Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<K: Field, G: Rng + ?Sized>(n: usize, rng: &mut G) -> Array2<K> {
    loop {
        let g = Array2::from_shape_simple_fn((n, n), || complex_gaussian::<K, G>(rng, 1.0));
        let Ok((mut q, r)) = g.qr() else { continue };
        let mut ok = true;
        for j in 0..n {
            let d = r[[j, j]];
            let a = d.abs();
            if a == K::Real::zero() {
                ok = false;
                break;
            }
            let phase = d.div_real(a);
            for i in 0..n {
                q[[i, j]] *= phase;
            }
        }
        if ok {
            return q;
        }
    }
}
