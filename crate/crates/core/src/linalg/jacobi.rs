use crate::error::{Error, Result};
use crate::linalg::{DenseSymMatrix, Vector};

const OFF_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: Vec<Vector>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Phi Lambda Phi^T` as a dense matrix; used to check the factorization.
    pub fn reconstruct(&self) -> DenseSymMatrix {
        let n = self.dim();
        DenseSymMatrix::from_lower_fn(n, |i, j| {
            (0..n)
                .map(|k| self.eigenvalues[k] * self.eigenvectors[k][i] * self.eigenvectors[k][j])
                .sum()
        })
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver for a dense symmetric matrix.
///
/// Sweeps over all `(p, q)` pairs in row order until the off-diagonal
/// Frobenius norm drops to `1e-14 |A|_F`. Eigenvalues come back ascending,
/// ties kept in diagonal order.
pub fn jacobi_eigensolve(a: &DenseSymMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m: Vec<f64> = (0..n).flat_map(|i| a.row(i).to_vec()).collect();
    // v is row-major; column j holds the j-th eigenvector
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = OFF_TOL * a.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m, n);
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let eigenvalues = order.iter().map(|&k| m[k * n + k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| Vector::from_raw((0..n).map(|i| v[i * n + k]).collect()))
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

// Annihilates m[p][q] with a plane rotation and accumulates it into v.
fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    if t == 0.0 {
        m[p * n + q] = 0.0;
        m[q * n + p] = 0.0;
        return;
    }
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[k * n + p];
        let akq = m[k * n + q];
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        m[k * n + p] = new_p;
        m[p * n + k] = new_p;
        m[k * n + q] = new_q;
        m[q * n + k] = new_q;
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_is_sorted() {
        let a = DenseSymMatrix::from_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let eig = jacobi_eigensolve(&a).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0, 3.0]);
        for (j, expected) in [1usize, 2, 0].iter().enumerate() {
            let col = eig.eigenvectors[j].as_slice();
            for (i, x) in col.iter().enumerate() {
                assert_eq!(x.abs(), if i == *expected { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn two_by_two() {
        let a = DenseSymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let eig = jacobi_eigensolve(&a).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn paper_matrix() {
        let a = DenseSymMatrix::from_diagonal(&[1.0, 2.0, 2.01, 4.0]).unwrap();
        let eig = jacobi_eigensolve(&a).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0, 2.01, 4.0]);
    }

    #[test]
    fn zero_matrix() {
        let a = DenseSymMatrix::from_diagonal(&[0.0, 0.0]).unwrap();
        let eig = jacobi_eigensolve(&a).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0, 0.0]);
    }
}
