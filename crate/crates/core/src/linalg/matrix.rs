use std::ops::Index;

use crate::error::{Error, Result};

/// A real vector with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Vector(values))
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Vector(v)
    }

    // Internal constructor for values produced by finite arithmetic.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Vector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|v| v * factor).collect())
    }

    /// Index of the largest-magnitude component; ties go to the lowest index.
    pub(crate) fn argmax_abs(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.0.iter().enumerate() {
            if v.abs() > self.0[best].abs() {
                best = i;
            }
        }
        best
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense symmetric matrix stored as a full row-major `n x n` array.
///
/// Symmetry is checked bitwise at construction, so `get(i, j) == get(j, i)`
/// holds for every instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty("matrix dimension must be at least 1"));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if data[i * n + j].to_bits() != data[j * n + i].to_bits() {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(DenseSymMatrix { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self::from_row_major(n, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        DenseSymMatrix { n, data }
    }

    /// Builds a matrix from a symmetric closure evaluated on the lower triangle.
    pub(crate) fn from_lower_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        DenseSymMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `A - tau I` as a plain row-major array.
    pub(crate) fn shifted_entries(&self, tau: f64) -> Vec<f64> {
        let mut out = self.data.clone();
        for i in 0..self.n {
            out[i * self.n + i] -= tau;
        }
        out
    }

    pub fn matvec(&self, x: &Vector) -> Result<Vector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(Vector::from_raw(
            (0..self.n).map(|i| dot(self.row(i), x.as_slice())).collect(),
        ))
    }

    /// Rayleigh quotient `x^T A x / x^T x`.
    pub fn rayleigh_quotient(&self, x: &Vector) -> Result<f64> {
        let ax = self.matvec(x)?;
        Ok(x.dot(&ax) / x.dot(x))
    }

    /// Energy norm `sqrt(x^T A x)`.
    ///
    /// Small negative energies (above `-1e-12 |x|^2`) are treated as rounding
    /// and clamp to zero; anything below reports indefiniteness.
    pub fn a_norm(&self, x: &Vector) -> Result<f64> {
        let ax = self.matvec(x)?;
        let energy = x.dot(&ax);
        if energy < -1e-12 * x.dot(x) {
            return Err(Error::Indefinite { value: energy });
        }
        Ok(energy.max(0.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(values: &[f64]) -> Vector {
        Vector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn matvec_identity() {
        let y = DenseSymMatrix::identity(3).matvec(&v(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(y.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn matvec_diagonal() {
        let a = DenseSymMatrix::from_diagonal(&[1.0, 2.0, 2.01, 4.0]).unwrap();
        let y = a.matvec(&v(&[1.0; 4])).unwrap();
        assert_eq!(y.as_slice(), &[1.0, 2.0, 2.01, 4.0]);
    }

    #[test]
    fn matvec_eigenvector_of_two_by_two() {
        let a = DenseSymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let y = a.matvec(&v(&[1.0, -1.0])).unwrap();
        assert_eq!(y.as_slice(), &[1.0, -1.0]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let err = DenseSymMatrix::identity(3).matvec(&v(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 3,
                found: 2
            }
        ));
    }

    #[test]
    fn construction_rejects_asymmetry() {
        let err = DenseSymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0 + 1e-15, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { i: 0, j: 1 }));
        assert!(DenseSymMatrix::from_rows(&[]).is_err());
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn a_norm_cases() {
        assert_eq!(DenseSymMatrix::identity(2).a_norm(&v(&[3.0, 4.0])).unwrap(), 5.0);
        let a = DenseSymMatrix::from_diagonal(&[1.0, 4.0]).unwrap();
        assert!((a.a_norm(&v(&[1.0, 1.0])).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(a.a_norm(&Vector::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn a_norm_detects_indefiniteness() {
        let a = DenseSymMatrix::from_diagonal(&[1.0, -4.0]).unwrap();
        assert!(matches!(a.a_norm(&v(&[0.0, 1.0])), Err(Error::Indefinite { .. })));
        // tiny negative energy is rounding, not indefiniteness
        let b = DenseSymMatrix::from_diagonal(&[1.0, -1e-14]).unwrap();
        assert_eq!(b.a_norm(&v(&[0.0, 1.0])).unwrap(), 0.0);
    }
}
