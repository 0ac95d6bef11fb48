//! Constraint and basis matrices that define the minimal faces.

use crate::linalg::Matrix;
use crate::scalar::Real;

/// `[I_{n−1}; −1ᵀ]`, whose columns span `1⊥`.
pub fn ep_basis_generator<T: Real>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n.saturating_sub(1), |i, j| {
        if i + 1 == n {
            -T::one()
        } else if i == j {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// `[[1, 0], [(m/n) ⊗ 1_n, V₂ ⊗ V_n]]` with `V_p = [I_{p−1}; −1ᵀ]`, an
/// `(2n+1) × n` matrix whose range is the null space of
/// [`bp_constraint_matrix`].
pub fn bp_basis_generator<T: Real>(m1: usize, m2: usize) -> Matrix<T> {
    let n = m1 + m2;
    let vn = ep_basis_generator::<T>(n);
    let nn = T::from_count(n);
    Matrix::from_fn(2 * n + 1, n, |i, j| match (i, j) {
        (0, 0) => T::one(),
        (0, _) => T::zero(),
        (_, 0) if i <= n => T::from_count(m1) / nn,
        (_, 0) => T::from_count(m2) / nn,
        _ if i <= n => vn[(i - 1, j - 1)],
        _ => -vn[(i - 1 - n, j - 1)],
    })
}

/// `T = [[−m, I₂ ⊗ 1ᵀ_n], [−1_n, 1ᵀ₂ ⊗ I_n]]`, of size `(n+2) × (2n+1)`:
/// `T (1; x) = 0` encodes the part sizes and the one-part-per-vertex rule.
pub fn bp_constraint_matrix<T: Real>(m1: usize, m2: usize) -> Matrix<T> {
    let n = m1 + m2;
    Matrix::from_fn(n + 2, 2 * n + 1, |r, c| {
        let one = T::one();
        let zero = T::zero();
        match r {
            0 => match c {
                0 => -T::from_count(m1),
                _ if c <= n => one,
                _ => zero,
            },
            1 => match c {
                0 => -T::from_count(m2),
                _ if c > n => one,
                _ => zero,
            },
            _ => {
                let v = r - 2;
                if c == 0 {
                    -one
                } else if c == 1 + v || c == 1 + n + v {
                    one
                } else {
                    zero
                }
            }
        }
    })
}

/// Upper-triangle positions `(1+q, 1+n+q)` (0-based) forced to zero in the
/// lifted bisection matrix: a vertex cannot lie in both parts.
pub fn gangster_indices(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|q| (1 + q, 1 + n + q)).collect()
}

/// Constraint matrix of the partition polytope in `vec(P)` coordinates
/// (column-major `P ∈ {0,1}^{n×k}`): `n` rows for `P 1_k = 1_n` followed by
/// `k` rows for `Pᵀ 1_n = m`.
pub fn partition_constraint_matrix(n: usize, k: usize) -> Vec<Vec<i64>> {
    let mut rows = Vec::with_capacity(n + k);
    for v in 0..n {
        rows.push((0..n * k).map(|c| i64::from(c % n == v)).collect());
    }
    for p in 0..k {
        rows.push((0..n * k).map(|c| i64::from(c / n == p)).collect());
    }
    rows
}
