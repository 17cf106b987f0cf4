//! Small dense matrices over any [`Scalar`].
//!
//! Sizes never exceed a few hundred, so everything is row-major `Vec`
//! storage with Gauss–Jordan elimination. The same code runs exactly over
//! rationals, which is the reason this is not delegated to a float-only
//! linear algebra crate.

use std::ops::{Index, IndexMut};

use crate::error::LinalgError;
use crate::scalar::{max_magnitude, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<S>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape { expected: (rows, cols), found: data.len() });
        }
        Ok(Mat { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Mat<S>) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a.clone() * b.clone();
                        let cell = &mut out[(i, j)];
                        *cell = cell.clone() + prod;
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Mat<S>) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Mat<S>) -> Self {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    fn zip_with(&self, other: &Mat<S>, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &Mat<S>) -> S {
        self.data.iter().zip(&other.data).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn max_abs(&self) -> f64 {
        max_magnitude(&self.data)
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn to_f64(&self) -> Mat<f64> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::to_f64).collect() }
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form and the pivot columns.
pub fn rref<S: Scalar>(m: &Mat<S>) -> (Mat<S>, Vec<usize>) {
    let mut a = m.clone();
    let scale = m.max_abs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let (best, mag) =
            (r..a.rows).map(|i| (i, a[(i, c)].magnitude())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if a[(best, c)].negligible(scale) || mag <= 0.0 {
            continue;
        }
        if best != r {
            for j in 0..a.cols {
                a.data.swap(best * a.cols + j, r * a.cols + j);
            }
        }
        let inv = S::one() / a[(r, c)].clone();
        for j in c..a.cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                if !a[(r, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<S: Scalar>(m: &Mat<S>) -> usize {
    rref(m).1.len()
}

/// Basis of the right null space.
pub fn nullspace<S: Scalar>(m: &Mat<S>) -> Vec<Vec<S>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); m.cols];
            v[f] = S::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b` for a consistent system; free variables are set to zero.
pub fn solve<S: Scalar>(a: &Mat<S>, b: &[S]) -> Result<Vec<S>, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::Shape { expected: (a.rows, 1), found: b.len() });
    }
    let aug = Mat::from_fn(a.rows, a.cols + 1, |i, j| if j < a.cols { a[(i, j)].clone() } else { b[i].clone() });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        let row = pivots.len() - 1;
        return Err(LinalgError::Inconsistent { residual: r[(row, a.cols)].magnitude() });
    }
    let mut x = vec![S::zero(); a.cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, a.cols)].clone();
    }
    Ok(x)
}

pub fn inverse<S: Scalar>(a: &Mat<S>) -> Result<Mat<S>, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::Shape { expected: (a.rows, a.rows), found: a.cols });
    }
    let n = a.rows;
    let aug = Mat::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else if j - n == i {
            S::one()
        } else {
            S::zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(LinalgError::Singular);
    }
    Ok(Mat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Orthogonal projector onto the column span of `basis`.
pub fn span_projector<S: Scalar>(basis: &Mat<S>) -> Result<Mat<S>, LinalgError> {
    let bt = basis.transpose();
    let gram = bt.matmul(basis);
    Ok(basis.matmul(&inverse(&gram)?).matmul(&bt))
}

/// Left inverse of `a` restricted to the column span of `domain`:
/// returns `P` with `P a x = x` for every `x` in that span, and `P y = 0`
/// for `y` orthogonal to the image.
pub fn restricted_pseudo_inverse<S: Scalar>(a: &Mat<S>, domain: &Mat<S>) -> Result<Mat<S>, LinalgError> {
    let image = a.matmul(domain);
    let it = image.transpose();
    Ok(domain.matmul(&inverse(&it.matmul(&image))?).matmul(&it))
}

/// Columns spanning the image of a projector, one per pivot.
pub fn column_basis<S: Scalar>(m: &Mat<S>) -> Mat<S> {
    let (_, pivots) = rref(m);
    let cols: Vec<Vec<S>> = pivots.iter().map(|&p| m.column(p)).collect();
    Mat::from_columns(m.rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn sample() -> Mat<Exact> {
        let v = [2, 1, 0, 1, 3, 1, 0, 1, 4];
        Mat::from_fn(3, 3, |i, j| Exact::from_i64(v[3 * i + j]))
    }

    #[test]
    fn inverse_round_trip_exact() {
        let a = sample();
        let inv = inverse(&a).unwrap();
        assert_eq!(a.matmul(&inv), Mat::identity(3));
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let a = Mat::from_fn(2, 3, |i, j| (i + 1) as f64 * (j + 1) as f64);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.matvec(v).iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn inconsistent_system_is_rejected() {
        let a = Mat::from_fn(2, 1, |_, _| 1.0);
        assert!(matches!(solve(&a, &[1.0, 2.0]), Err(LinalgError::Inconsistent { .. })));
        assert_eq!(solve(&a, &[2.0, 2.0]).unwrap(), vec![2.0]);
    }

    #[test]
    fn projector_is_idempotent() {
        let b = Mat::from_fn(4, 2, |i, j| Exact::from_i64((i * 3 + j * j + 1) as i64));
        let p = span_projector(&b).unwrap();
        assert_eq!(p.matmul(&p), p);
        assert_eq!(p.trace(), Exact::from_i64(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = Mat::from_fn(2, 2, |_, _| 1.0);
        assert_eq!(inverse(&a), Err(LinalgError::Singular));
    }
}
