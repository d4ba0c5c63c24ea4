use crate::error::{Error, Result};
use crate::linalg::DenseSymMatrix;

/// Diagonal matrix with `spectrum` on the diagonal, in the given order.
pub fn gen_diag(spectrum: &[f64]) -> Result<DenseSymMatrix> {
    if spectrum.is_empty() {
        return Err(Error::Empty("diagonal spectrum"));
    }
    DenseSymMatrix::from_diagonal(spectrum)
}

/// Tridiagonal `(-1, 2, -1)` matrix of order `n`, whose eigenvalues are
/// `2 - 2 cos(j pi / (n + 1))` for `j = 1..=n`.
pub fn gen_laplacian_1d(n: usize) -> Result<DenseSymMatrix> {
    if n == 0 {
        return Err(Error::Empty("laplacian dimension"));
    }
    Ok(DenseSymMatrix::from_lower_fn(n, |i, j| match i - j {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    }))
}
