//! Symmetric 2-tensors on ℝ⁷ with the orthonormal metric.

use std::ops::{Add, Sub};

use crate::error::CurvatureError;
use crate::linalg::Mat;
use crate::scalar::Scalar;

const N: usize = 7;

#[derive(Clone, Debug, PartialEq)]
pub struct Sym2Tensor<S>(Mat<S>);

impl<S: Scalar> Sym2Tensor<S> {
    pub fn zero() -> Self {
        Sym2Tensor(Mat::zeros(N, N))
    }

    /// The metric `g`.
    pub fn metric() -> Self {
        Sym2Tensor(Mat::identity(N))
    }

    /// Rejects arrays that are not exactly (or, in floats, nearly) symmetric.
    pub fn new(m: Mat<S>) -> Result<Self, CurvatureError> {
        if m.rows() != N || m.cols() != N {
            return Err(CurvatureError::NotSymmetric(f64::INFINITY));
        }
        let dev = m.sub(&m.transpose()).max_abs();
        let ok = if S::EXACT { dev == 0.0 } else { dev <= 1e-12 * m.max_abs().max(1.0) };
        if !ok {
            return Err(CurvatureError::NotSymmetric(dev));
        }
        Ok(Self::symmetrize(&m))
    }

    /// Symmetric part of an arbitrary 7×7 array.
    pub fn symmetrize(m: &Mat<S>) -> Self {
        let half = S::ratio(1, 2);
        Sym2Tensor(Mat::from_fn(N, N, |i, j| (m[(i, j)].clone() + m[(j, i)].clone()) * half.clone()))
    }

    /// `Σ_i d_i e^i ⊗ e^i`.
    pub fn diagonal(d: &[S]) -> Self {
        Sym2Tensor(Mat::from_fn(N, N, |i, j| if i == j { d[i].clone() } else { S::zero() }))
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.0[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<S> {
        &self.0
    }

    pub fn trace(&self) -> S {
        self.0.trace()
    }

    pub fn traceless(&self) -> Self {
        let t = self.trace() * S::ratio(1, N as i64);
        self - &Self::metric().scale(&t)
    }

    pub fn scale(&self, c: &S) -> Self {
        Sym2Tensor(self.0.scale(c))
    }

    /// `Σ_ij a_ij b_ij`.
    pub fn inner(&self, other: &Self) -> S {
        self.0.dot(&other.0)
    }

    /// Tensor norm `Σ_ij h_ij²`.
    pub fn norm2(&self) -> S {
        self.inner(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn to_f64(&self) -> Sym2Tensor<f64> {
        Sym2Tensor(self.0.to_f64())
    }
}

impl<S: Scalar> Add for &Sym2Tensor<S> {
    type Output = Sym2Tensor<S>;
    fn add(self, rhs: &Sym2Tensor<S>) -> Sym2Tensor<S> {
        Sym2Tensor(self.0.add(&rhs.0))
    }
}

impl<S: Scalar> Sub for &Sym2Tensor<S> {
    type Output = Sym2Tensor<S>;
    fn sub(self, rhs: &Sym2Tensor<S>) -> Sym2Tensor<S> {
        Sym2Tensor(self.0.sub(&rhs.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn rejects_asymmetric() {
        let m = Mat::from_fn(7, 7, |i, j| (i * 7 + j) as f64);
        assert!(Sym2Tensor::new(m).is_err());
    }

    #[test]
    fn traceless_part() {
        let h = Sym2Tensor::<Exact>::diagonal(&(1..=7).map(Exact::from_i64).collect::<Vec<_>>());
        assert_eq!(h.traceless().trace(), Exact::zero());
        assert_eq!(Sym2Tensor::<Exact>::metric().norm2(), Exact::from_i64(7));
    }
}
