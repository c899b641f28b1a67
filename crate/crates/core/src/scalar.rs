//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All matrices are complex. The library is generic over the complex
//! scalar `K` (either [`c32`] or [`c64`]) and uses `K::Real` for norms,
//! singular values and tolerances.

use lapack_sys::{cgees_, zgees_};
use ndarray::Array2;
use ndarray_linalg::{Lapack, Scalar};
pub use num_complex::{Complex32 as c32, Complex64 as c64};
use num_traits::Float;
use std::os::raw::c_char;

use crate::error::{Error, Result};

/// Complex scalar usable by the dense backend.
pub trait Field:
    Lapack + Scalar<Complex = Self, Real: Send + Sync + Default> + Send + Sync + Default
{
    /// Complex Schur form `T` (upper triangular, unitarily similar to `a`).
    /// Schur vectors are not computed.
    fn schur_triangular(a: &Array2<Self>) -> Result<Array2<Self>>;

    /// Lossy conversion from a double-precision complex number.
    fn from_c64(z: c64) -> Self {
        Self::complex(z.re, z.im)
    }

    /// Conversion to a double-precision complex number.
    fn to_c64(self) -> c64 {
        c64::new(real_to_f64(self.re()), real_to_f64(self.im()))
    }
}

/// `x` as the real type of `K`.
#[inline]
pub fn real<K: Field>(x: f64) -> K::Real {
    K::real(x)
}

#[inline]
pub fn real_to_f64<R: Float>(x: R) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

macro_rules! impl_field {
    ($t:ty, $re:ty, $gees:ident) => {
        impl Field for $t {
            fn schur_triangular(a: &Array2<Self>) -> Result<Array2<Self>> {
                let n = a.nrows();
                if n != a.ncols() {
                    return Err(Error::Dimension(format!(
                        "Schur form needs a square matrix, got {}x{}",
                        n,
                        a.ncols()
                    )));
                }
                if n == 0 {
                    return Ok(a.clone());
                }
                // LAPACK is column-major: store the transpose's row-major buffer.
                let mut buf: Vec<$t> = a.t().iter().cloned().collect();
                let ni = n as i32;
                let mut sdim = 0i32;
                let mut w = vec![<$t>::default(); n];
                let mut vs = vec![<$t>::default(); 1];
                let ldvs = 1i32;
                let mut rwork = vec![0 as $re; n];
                let mut bwork = vec![0i32; 1];
                let mut info = 0i32;
                let jobvs = b'N' as c_char;
                let sort = b'N' as c_char;
                // workspace query
                let mut query = <$t>::default();
                let lwork_query = -1i32;
                unsafe {
                    $gees(
                        &jobvs,
                        &sort,
                        None,
                        &ni,
                        buf.as_mut_ptr() as *mut _,
                        &ni,
                        &mut sdim,
                        w.as_mut_ptr() as *mut _,
                        vs.as_mut_ptr() as *mut _,
                        &ldvs,
                        (&mut query as *mut $t) as *mut _,
                        &lwork_query,
                        rwork.as_mut_ptr(),
                        bwork.as_mut_ptr(),
                        &mut info,
                    );
                }
                if info != 0 {
                    return Err(Error::Backend(format!("gees workspace query failed (info={info})")));
                }
                let lwork = (query.re as i32).max(2 * ni).max(1);
                let mut work = vec![<$t>::default(); lwork as usize];
                unsafe {
                    $gees(
                        &jobvs,
                        &sort,
                        None,
                        &ni,
                        buf.as_mut_ptr() as *mut _,
                        &ni,
                        &mut sdim,
                        w.as_mut_ptr() as *mut _,
                        vs.as_mut_ptr() as *mut _,
                        &ldvs,
                        work.as_mut_ptr() as *mut _,
                        &lwork,
                        rwork.as_mut_ptr(),
                        bwork.as_mut_ptr(),
                        &mut info,
                    );
                }
                if info != 0 {
                    return Err(Error::Backend(format!("Schur decomposition did not converge (info={info})")));
                }
                let t = Array2::from_shape_vec((n, n), buf)
                    .expect("buffer length matches n*n")
                    .reversed_axes();
                Ok(t.as_standard_layout().into_owned())
            }
        }
    };
}

impl_field!(c64, f64, zgees_);
impl_field!(c32, f32, cgees_);

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn schur_of_triangular_is_itself() {
        let a = array![
            [c64::new(1.0, 0.0), c64::new(2.0, 1.0)],
            [c64::new(0.0, 0.0), c64::new(0.0, 3.0)]
        ];
        let t = c64::schur_triangular(&a).unwrap();
        assert!(t[[1, 0]].norm() < 1e-14);
        let mut d = vec![t[[0, 0]], t[[1, 1]]];
        d.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((d[0] - c64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((d[1] - c64::new(0.0, 3.0)).norm() < 1e-12);
        // Frobenius norm is a unitary invariant.
        let fa: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let ft: f64 = t.iter().map(|z| z.norm_sqr()).sum();
        assert!((fa - ft).abs() < 1e-12);
    }

    #[test]
    fn schur_single_precision() {
        let a = array![[c32::new(0.0, 0.0), c32::new(1.0, 0.0)], [c32::new(-1.0, 0.0), c32::new(0.0, 0.0)]];
        let t = c32::schur_triangular(&a).unwrap();
        assert!(t[[1, 0]].norm() < 1e-6);
        assert!((t[[0, 0]].norm() - 1.0).abs() < 1e-5);
    }
}
