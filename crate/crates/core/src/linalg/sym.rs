use std::ops::Index;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::scalar::Real;

const PAR_THRESHOLD: usize = 1 << 18;

/// Dense symmetric matrix.
///
/// Both triangles are stored; every write goes through [`SymMatrix::set`],
/// which updates the mirrored entry as well, so the storage is symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix<T> {
    order: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            data: vec![T::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_diag(&vec![T::one(); order])
    }

    pub fn from_diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// All-ones matrix `J`.
    pub fn ones(order: usize) -> Self {
        Self {
            order,
            data: vec![T::one(); order * order],
        }
    }

    /// Fills from the upper triangle of `f`; `f(i, j)` is only queried for `i <= j`.
    pub fn from_upper(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in i..order {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Symmetrises a square matrix as `(A + Aᵀ)/2`.
    pub fn from_square(a: &Matrix<T>) -> Self {
        assert_eq!(a.rows(), a.cols(), "matrix is not square");
        Self::from_upper(a.rows(), |i, j| (a[(i, j)] + a[(j, i)]) * T::half())
    }

    /// Builds from row-major nested vectors, symmetrising on the way in.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        Self::from_square(&Matrix::from_rows(rows))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let n = self.order;
        self.data[i * n + j] = v;
        self.data[j * n + i] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_fn(self.order, self.order, |i, j| self.get(i, j))
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    /// Trace inner product `⟨A, B⟩ = tr(AB)`.
    pub fn inner(&self, other: &Self) -> T {
        assert_eq!(self.order, other.order);
        self.data.iter().zip(&other.data).map(|(&a, &b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner(self).sqrt()
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.order, other.order);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn min_entry(&self) -> T {
        self.data.iter().fold(T::infinity(), |m, &x| m.min(x))
    }

    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.order {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn scaled(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            order: self.order,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, s: T, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + s * b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.order, other.order);
        Self {
            order: self.order,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Re-imposes exact symmetry, `(M + Mᵀ)/2`.
    pub fn symmetrize(&mut self) {
        let n = self.order;
        for i in 0..n {
            for j in 0..i {
                let v = (self.data[i * n + j] + self.data[j * n + i]) * T::half();
                self.data[i * n + j] = v;
                self.data[j * n + i] = v;
            }
        }
    }

    /// `Vᵀ · self · V` for a `order × r` matrix `V`.
    pub fn congruence_t(&self, v: &Matrix<T>) -> Self {
        assert_eq!(v.rows(), self.order, "basis row count must equal matrix order");
        let mv = self.to_matrix().matmul(v);
        Self::from_square(&v.tr_matmul(&mv))
    }

    /// `V · R · Vᵀ` for an `q × order` matrix `V`; the result has order `q`.
    pub fn congruence(&self, v: &Matrix<T>) -> Self {
        assert_eq!(v.cols(), self.order, "basis column count must equal matrix order");
        let vr = v.matmul(&self.to_matrix());
        let q = v.rows();
        let mut out = Self::zeros(q);
        let upper_row = |i: usize| -> Vec<T> {
            let a = vr.row(i);
            (i..q)
                .map(|j| a.iter().zip(v.row(j)).map(|(&x, &y)| x * y).sum())
                .collect()
        };
        let rows: Vec<Vec<T>> = if q * q * self.order >= PAR_THRESHOLD {
            (0..q).into_par_iter().map(upper_row).collect()
        } else {
            (0..q).map(upper_row).collect()
        };
        for (i, row) in rows.into_iter().enumerate() {
            for (off, x) in row.into_iter().enumerate() {
                out.set(i, i + off, x);
            }
        }
        out
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.order);
        (0..self.order)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }
}

impl<T> Index<(usize, usize)> for SymMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.order + j]
    }
}
