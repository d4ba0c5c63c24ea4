use crate::error::{Error, Result};
use crate::linalg::{DenseSymMatrix, Vector};

const PIVOT_TOL: f64 = 1e-14;

/// Solves `(A - tau I) x = b` by LU factorization with partial pivoting.
///
/// A pivot with magnitude at most `1e-14 * |A|_F` means `tau` sits on an
/// eigenvalue to working precision; that is reported as
/// [`Error::NearSingularShift`] rather than regularized.
pub fn shifted_lu_solve(a: &DenseSymMatrix, tau: f64, b: &Vector) -> Result<Vector> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let threshold = PIVOT_TOL * a.frobenius_norm();
    let mut m = a.shifted_entries(tau);
    let mut x = b.as_slice().to_vec();

    // forward elimination, applying row swaps and multipliers to x directly
    for k in 0..n {
        let mut p = k;
        for i in (k + 1)..n {
            if m[i * n + k].abs() > m[p * n + k].abs() {
                p = i;
            }
        }
        let pivot = m[p * n + k];
        if !(pivot.abs() > threshold) {
            return Err(Error::NearSingularShift { tau });
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        for i in (k + 1)..n {
            let l = m[i * n + k] / pivot;
            if l == 0.0 {
                continue;
            }
            m[i * n + k] = 0.0;
            for j in (k + 1)..n {
                m[i * n + j] -= l * m[k * n + j];
            }
            x[i] -= l * x[k];
        }
    }

    // back substitution
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in (k + 1)..n {
            s -= m[k * n + j] * x[j];
        }
        x[k] = s / m[k * n + k];
    }

    Vector::new(x).map_err(|_| Error::NearSingularShift { tau })
}
