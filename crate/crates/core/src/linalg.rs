//! Small dense matrices over a [`Scalar`] field.
//!
//! Dimensions in this crate are tiny (spacetime is 4-dimensional), so a
//! row-major `Vec` with Gaussian elimination is all that is needed, and it
//! works unchanged for exact rationals.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Scalar;

pub type Vector<S> = Vec<S>;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[S]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows. Returns `None` for ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// `u vᵀ`
    pub fn outer(u: &[S], v: &[S]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i].clone() * v[j].clone())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<S>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vector<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector<S>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * k.clone()).collect() }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vector<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, x| if x.abs() > m { x.abs() } else { m })
    }

    /// `max |a_ij - b_ij|`
    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(S::zero(), |m, (a, b)| {
            let d = (a.clone() - b.clone()).abs();
            if d > m {
                d
            } else {
                m
            }
        })
    }

    pub fn approx_eq(&self, other: &Self, tol: &S) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other).is_negligible(tol)
    }

    pub fn is_identity(&self, tol: &S) -> bool {
        self.is_square() && self.approx_eq(&Self::identity(self.rows), tol)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Row echelon reduction with largest-magnitude pivoting. Returns the
    /// reduced matrix, the pivot columns and the sign of the row permutation.
    fn echelon(&self) -> (Self, Vec<usize>, bool) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut flipped = false;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .max_by(|&a, &b| m[(a, c)].abs().partial_cmp(&m[(b, c)].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .expect("non-empty range");
            if m[(best, c)].is_zero() {
                continue;
            }
            if best != r {
                m.swap_rows(best, r);
                flipped = !flipped;
            }
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() / m[(r, c)].clone();
                for j in c..m.cols {
                    let v = m[(r, j)].clone() * f.clone();
                    m[(i, j)] = m[(i, j)].clone() - v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, flipped)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn determinant(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let (m, pivots, flipped) = self.echelon();
        if pivots.len() < self.rows {
            return S::zero();
        }
        let det = (0..self.rows).fold(S::one(), |acc, i| acc * m[(i, i)].clone());
        if flipped {
            -det
        } else {
            det
        }
    }

    /// Solves `self · X = rhs` for square, non-singular `self`. Singularity is
    /// decided by comparing pivots against `tol` scaled by the matrix magnitude.
    pub fn solve(&self, rhs: &Self, tol: &S) -> Option<Self> {
        assert!(self.is_square() && rhs.rows == self.rows);
        let n = self.rows;
        let scale = if S::EXACT { S::one() } else { self.max_abs().max_with_one() };
        let mut aug =
            Self::from_fn(n, n + rhs.cols, |i, j| if j < n { self[(i, j)].clone() } else { rhs[(i, j - n)].clone() });
        for c in 0..n {
            let best = (c..n)
                .max_by(|&a, &b| aug[(a, c)].abs().partial_cmp(&aug[(b, c)].abs()).unwrap_or(std::cmp::Ordering::Equal))
                .expect("non-empty range");
            let pivot = aug[(best, c)].clone();
            if pivot.is_zero() || (!S::EXACT && pivot.abs() <= tol.clone() * scale.clone()) {
                return None;
            }
            aug.swap_rows(best, c);
            for i in 0..n {
                if i == c || aug[(i, c)].is_zero() {
                    continue;
                }
                let f = aug[(i, c)].clone() / aug[(c, c)].clone();
                for j in c..aug.cols {
                    let v = aug[(c, j)].clone() * f.clone();
                    aug[(i, j)] = aug[(i, j)].clone() - v;
                }
            }
        }
        Some(Self::from_fn(n, rhs.cols, |i, j| aug[(i, n + j)].clone() / aug[(i, i)].clone()))
    }

    pub fn inverse(&self, tol: &S) -> Option<Self> {
        self.solve(&Self::identity(self.rows), tol)
    }

    /// Indices of a maximal linearly independent subset of the columns,
    /// chosen greedily left to right.
    pub fn independent_columns(&self, tol: &S) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for j in 0..self.cols {
            let mut cols: Vec<Vector<S>> = chosen.iter().map(|&c| self.column(c)).collect();
            cols.push(self.column(j));
            let m = Matrix::from_columns(&cols);
            if m.rank(tol) == cols.len() {
                chosen.push(j);
            }
        }
        chosen
    }

    pub fn rank(&self, tol: &S) -> usize {
        if S::EXACT {
            return self.echelon().1.len();
        }
        let scale = self.max_abs().max_with_one();
        let (m, pivots, _) = self.echelon();
        pivots.iter().enumerate().filter(|(r, &c)| m[(*r, c)].abs() > tol.clone() * scale.clone()).count()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

trait MaxWithOne {
    fn max_with_one(self) -> Self;
}

impl<S: Scalar> MaxWithOne for S {
    fn max_with_one(self) -> Self {
        if self > S::one() {
            self
        } else {
            S::one()
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * rhs[(k, j)].clone())
        })
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.scale(&-S::one())
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<S: Scalar>(a: &[S], k: &S) -> Vector<S> {
    a.iter().map(|x| x.clone() * k.clone()).collect()
}

pub fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn max_abs_diff<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |m, (x, y)| {
        let d = (x.clone() - y.clone()).abs();
        if d > m {
            d
        } else {
            m
        }
    })
}

pub fn approx_eq_vec<S: Scalar>(a: &[S], b: &[S], tol: &S) -> bool {
    a.len() == b.len() && max_abs_diff(a, b).is_negligible(tol)
}

pub fn basis_vector<S: Scalar>(n: usize, i: usize) -> Vector<S> {
    let mut e = vec![S::zero(); n];
    e[i] = S::one();
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn determinant_with_row_swaps() {
        assert_eq!(m(&[&[0.0, 1.0], &[1.0, 0.0]]).determinant(), -1.0);
        assert_eq!(m(&[&[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, -1.0]]).determinant(), -6.0);
        assert_eq!(m(&[&[1.0, 2.0], &[2.0, 4.0]]).determinant(), 0.0);
    }

    #[test]
    fn exact_inverse() {
        let a: Matrix<BigRational> = m(&[&[2.0, 1.0], &[1.0, 1.0]]).map(|x| BigRational::from_float(*x).unwrap());
        let inv = a.inverse(&BigRational::from_integer(0.into())).unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2));
    }

    #[test]
    fn singular_solve_is_none() {
        assert!(m(&[&[1.0, 2.0], &[2.0, 4.0]]).inverse(&1e-12).is_none());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::<f64>::from_rows(vec![vec![1.0], vec![1.0, 2.0]]).is_none());
    }

    #[test]
    fn independent_columns_skip_dependent() {
        let a = m(&[&[1.0, 2.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert_eq!(a.independent_columns(&1e-12), vec![0, 2]);
    }
}
