//! Symmetric eigendecomposition by Householder tridiagonalisation followed
//! by the implicit QL iteration, plus the spectral helpers built on it.

use super::matrix::Matrix;
use super::sym::SymMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> SymEigen<T> {
    /// Rebuilds `Q · f(Λ) · Qᵀ`, skipping eigenpairs mapped to zero.
    pub fn reconstruct(&self, f: impl Fn(T) -> T) -> SymMatrix<T> {
        let n = self.values.len();
        let kept: Vec<(usize, T)> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &l)| (i, f(l)))
            .filter(|&(_, w)| w != T::zero())
            .collect();
        // Scaled columns: out = Σ w_i q_i q_iᵀ.
        let mut out = SymMatrix::zeros(n);
        let cols: Vec<Vec<T>> = kept.iter().map(|&(i, _)| self.vectors.column(i)).collect();
        for a in 0..n {
            for b in a..n {
                let mut s = T::zero();
                for (c, &(_, w)) in cols.iter().zip(&kept) {
                    s += w * c[a] * c[b];
                }
                out.set(a, b, s);
            }
        }
        out
    }
}

/// Full eigendecomposition of a symmetric matrix.
pub fn eig_sym<T: Real>(m: &SymMatrix<T>) -> Result<SymEigen<T>> {
    eig_sym_with(m, Tolerances::DEFAULT.eig_max_sweeps)
}

pub fn eig_sym_with<T: Real>(m: &SymMatrix<T>, max_sweeps: usize) -> Result<SymEigen<T>> {
    let n = m.order();
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }
    let mut v: Vec<Vec<T>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut v, &mut d, &mut e);
    // Columns of `v` hold the accumulated transformation; iterate on rows.
    let mut q: Vec<Vec<T>> = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    ql_implicit(&mut d, &mut e, &mut q, max_sweeps)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| q[order[j]][i]);
    Ok(SymEigen { values, vectors })
}

/// Householder reduction to tridiagonal form (EISPACK `tred2` layout).
/// On return `v` holds the orthogonal transformation, `d` the diagonal and
/// `e[1..]` the subdiagonal.
fn tridiagonalize<T: Real>(v: &mut [Vec<T>], d: &mut [T], e: &mut [T]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = T::zero();
                v[j][i] = T::zero();
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let upd = f * e[k] + g * d[k];
                    v[k][j] -= upd;
                }
                d[j] = v[i - 1][j];
                v[i][j] = T::zero();
            }
        }
        d[i] = h;
    }
    for i in 0..n.saturating_sub(1) {
        v[n - 1][i] = v[i][i];
        v[i][i] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    let upd = g * d[k];
                    v[k][j] -= upd;
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = T::zero();
    }
    v[n - 1][n - 1] = T::one();
    e[0] = T::zero();
}

/// Implicit-shift QL on the tridiagonal `(d, e)`; `q[i]` is the i-th
/// eigenvector, stored as a row so the plane rotations stay contiguous.
fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], q: &mut [Vec<T>], max_sweeps: usize) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let eps = T::epsilon();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > max_sweeps {
                    return Err(Error::NonConvergence {
                        routine: "symmetric QL iteration",
                        iterations: max_sweeps,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (T::two() * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = q.split_at_mut(i + 1);
                    let (qi, qi1) = (&mut lo[i], &mut hi[0]);
                    for (a, b) in qi.iter_mut().zip(qi1.iter_mut()) {
                        let hb = *b;
                        *b = s * *a + c * hb;
                        *a = c * *a - s * hb;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

/// Euclidean projection onto the PSD cone: negative eigenvalues are clipped.
pub fn project_psd<T: Real>(m: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    let eig = eig_sym(m)?;
    Ok(eig.reconstruct(|l| l.max(T::zero())))
}

/// PSD projection that also returns the spectrum of the input.
pub fn project_psd_with_spectrum<T: Real>(m: &SymMatrix<T>) -> Result<(SymMatrix<T>, Vec<T>)> {
    let eig = eig_sym(m)?;
    let p = eig.reconstruct(|l| l.max(T::zero()));
    Ok((p, eig.values))
}

/// Largest eigenvalue.
pub fn lambda_max<T: Real>(m: &SymMatrix<T>) -> Result<T> {
    if m.order() == 0 {
        return Ok(T::zero());
    }
    let eig = eig_sym(m)?;
    Ok(*eig.values.last().expect("non-empty spectrum"))
}

/// Largest eigenvalue inflated by its accuracy bound, so the returned value
/// is an upper bound on the exact `λ_max` up to the stated tolerance.
pub fn lambda_max_upper<T: Real>(m: &SymMatrix<T>, rel_tol: f64) -> Result<T> {
    let l = lambda_max(m)?;
    Ok(l + T::lit(rel_tol) * m.frobenius_norm() + T::epsilon() * T::from_count(m.order()))
}
