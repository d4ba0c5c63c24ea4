use crate::error::{Error, Result};
use crate::linalg::Vector;

const RANK_TOL: f64 = 1e-12;

/// Orthonormalizes `columns` by modified Gram-Schmidt with one
/// re-orthogonalization pass.
///
/// Output column `k` spans the same space as input columns `0..=k`. A column
/// whose norm after projection falls below `1e-12` of its original norm is
/// reported as rank-deficient.
pub fn gram_schmidt(columns: &[Vector]) -> Result<Vec<Vector>> {
    let Some(first) = columns.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    let mut basis: Vec<Vector> = Vec::with_capacity(columns.len());
    for (k, col) in columns.iter().enumerate() {
        if col.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: col.len(),
            });
        }
        let original = col.norm();
        let mut v = col.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = q.dot(&v);
                for (vi, qi) in v.as_mut_slice().iter_mut().zip(q.as_slice()) {
                    *vi -= c * qi;
                }
            }
        }
        let norm = v.norm();
        if original == 0.0 || norm < RANK_TOL * original {
            return Err(Error::RankDeficient { column: k });
        }
        basis.push(v.scaled(1.0 / norm));
    }
    Ok(basis)
}
