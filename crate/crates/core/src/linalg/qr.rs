//! Householder QR, used to orthonormalise the facial-reduction bases, and a
//! rank-revealing variant with column pivoting.

use num_traits::{Num, Signed};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// Thin Householder factorisation. Reflectors are stored as unit vectors.
struct Householder<T> {
    reflectors: Vec<Vec<T>>,
    r_diag: Vec<T>,
}

fn factor<T: Real>(w: &Matrix<T>, pivot: bool) -> Householder<T> {
    let (m, n) = (w.rows(), w.cols());
    // Column-major working copy: column operations dominate.
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| w.column(j)).collect();
    let steps = m.min(n);
    let mut reflectors = Vec::with_capacity(steps);
    let mut r_diag = Vec::with_capacity(steps);
    for k in 0..steps {
        if pivot {
            let norm_tail = |c: &Vec<T>| c[k..].iter().fold(T::zero(), |s, &x| s + x * x);
            let best = (k..n)
                .max_by(|&a, &b| {
                    norm_tail(&cols[a])
                        .partial_cmp(&norm_tail(&cols[b]))
                        .expect("finite entries")
                        .then(b.cmp(&a))
                })
                .expect("non-empty range");
            cols.swap(k, best);
        }
        let x = &cols[k][k..];
        let alpha = x.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
        let mut v: Vec<T> = x.to_vec();
        let sign = if v[0] >= T::zero() { T::one() } else { -T::one() };
        let diag = -sign * alpha;
        v[0] += sign * alpha;
        let vn = v.iter().fold(T::zero(), |s, &t| s + t * t).sqrt();
        if vn > T::zero() {
            for t in &mut v {
                *t /= vn;
            }
            for col in cols.iter_mut().skip(k) {
                let tail = &mut col[k..];
                let d = tail.iter().zip(&v).fold(T::zero(), |s, (&a, &b)| s + a * b);
                for (a, &b) in tail.iter_mut().zip(&v) {
                    *a -= T::two() * d * b;
                }
            }
        }
        reflectors.push(v);
        r_diag.push(diag);
    }
    Householder { reflectors, r_diag }
}

/// Orthonormal basis of the column space of a full-column-rank `W`.
pub fn orthonormal_basis<T: Real>(w: &Matrix<T>) -> Result<Matrix<T>> {
    let (m, n) = (w.rows(), w.cols());
    if n > m {
        return Err(Error::RankDeficient { column: m });
    }
    let h = factor(w, false);
    let scale = w.frobenius_norm().max(T::min_positive_value());
    let tol = T::lit(Tolerances::DEFAULT.rank_rel) * scale;
    if let Some(col) = h.r_diag.iter().position(|d| d.abs() <= tol) {
        return Err(Error::RankDeficient { column: col });
    }
    // Q = H_0 H_1 … H_{n-1} applied to the first n unit vectors.
    let mut q = Matrix::from_fn(m, n, |i, j| if i == j { T::one() } else { T::zero() });
    for (k, v) in h.reflectors.iter().enumerate().rev() {
        if v.iter().all(|&t| t == T::zero()) {
            continue;
        }
        for j in 0..n {
            let d = (k..m).fold(T::zero(), |s, i| s + q[(i, j)] * v[i - k]);
            for i in k..m {
                let upd = T::two() * d * v[i - k];
                q[(i, j)] -= upd;
            }
        }
    }
    Ok(q)
}

/// Numerical rank from a column-pivoted QR, with the relative cutoff
/// `rel_tol · |R₀₀|`.
pub fn numerical_rank<T: Real>(w: &Matrix<T>, rel_tol: f64) -> usize {
    if w.rows() == 0 || w.cols() == 0 {
        return 0;
    }
    let h = factor(w, true);
    let lead = h.r_diag[0].abs();
    if lead == T::zero() {
        return 0;
    }
    h.r_diag.iter().take_while(|d| d.abs() > T::lit(rel_tol) * lead).count()
}

/// Exact rank by Gaussian elimination over an exact field
/// such as `num_rational::Ratio<i64>`.
pub fn exact_rank<T>(rows: &[Vec<T>]) -> usize
where
    T: Clone + Num + Signed,
{
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in (rank + 1)..a.len() {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / pivot.clone();
            for cc in c..ncols {
                let sub = f.clone() * a[rank][cc].clone();
                a[r][cc] = a[r][cc].clone() - sub;
            }
        }
        rank += 1;
    }
    rank
}
