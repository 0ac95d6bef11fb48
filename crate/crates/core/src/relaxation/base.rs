//! Exact projections onto the base sets 𝒳_EP and 𝒳_BP.

use super::BaseSetDescriptor;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::scalar::Real;

/// Diagonal fixed, off-diagonal entries clamped: the constraints are
/// separable, so this is the exact projection.
pub fn project_base_ep<T: Real>(m: &SymMatrix<T>, d: &BaseSetDescriptor<T>) -> SymMatrix<T> {
    let BaseSetDescriptor::Ep { diag, lo, hi, .. } = *d else {
        panic!("project_base_ep called with a bisection descriptor");
    };
    let q = m.order();
    SymMatrix::from_upper(q, |i, j| {
        if i == j {
            diag
        } else {
            // Average the two triangles so drift in the input cannot leak through.
            ((m.get(i, j) + m.get(j, i)) * T::half()).clamp_to(lo, hi)
        }
    })
}

/// Projection onto 𝒳_BP, split into the arrow part (first row, first column
/// and diagonal), which reduces to a capped-simplex projection, and the
/// inner part, which is zeroed on the gangster positions and boxed to `[0, 1]`.
pub fn project_base_bp<T: Real>(m: &SymMatrix<T>, d: &BaseSetDescriptor<T>) -> SymMatrix<T> {
    let BaseSetDescriptor::Bp { n, m1, .. } = *d else {
        panic!("project_base_bp called with an equipartition descriptor");
    };
    let q = 2 * n + 1;
    assert_eq!(m.order(), q, "matrix order must be 2n + 1");
    let sym = |i: usize, j: usize| (m.get(i, j) + m.get(j, i)) * T::half();
    let sixth = T::one() / T::lit(6.0);
    let third = T::one() / T::lit(3.0);
    let y: Vec<T> = (0..n)
        .map(|v| {
            let (a, b) = (1 + v, 1 + n + v);
            sixth * (m.get(a, a) - m.get(b, b)) + third * (sym(0, a) - sym(0, b)) + T::half()
        })
        .collect();
    let y = project_capped_simplex(&y, T::from_count(m1)).expect("m1 <= n by construction");
    let mut out = t_arrow(&y);
    for a in 1..q {
        for b in (a + 1)..q {
            let gangster = b == a + n && a <= n;
            if !gangster {
                out.set(a, b, sym(a, b).clamp_to(T::zero(), T::one()));
            }
        }
    }
    out
}

/// `[[1, yᵀ, (1−y)ᵀ], [y, Diag(y), 0], [1−y, 0, Diag(1−y)]]`.
pub fn t_arrow<T: Real>(y: &[T]) -> SymMatrix<T> {
    let n = y.len();
    let mut out = SymMatrix::zeros(2 * n + 1);
    out.set(0, 0, T::one());
    for (v, &yv) in y.iter().enumerate() {
        let (a, b) = (1 + v, 1 + n + v);
        out.set(0, a, yv);
        out.set(a, a, yv);
        out.set(0, b, T::one() - yv);
        out.set(b, b, T::one() - yv);
    }
    out
}

/// Largest deviation from `X₀ₐ = Xₐₐ` and `diag(X¹¹) + diag(X²²) = 1`,
/// together with the index where it occurs.
pub fn arrow_residual<T: Real>(x: &SymMatrix<T>) -> (usize, T) {
    let n = (x.order() - 1) / 2;
    let mut worst = (0, T::zero());
    for a in 1..x.order() {
        let r = (x.get(0, a) - x.get(a, a)).abs();
        if r > worst.1 {
            worst = (a, r);
        }
    }
    for v in 0..n {
        let r = (x.get(1 + v, 1 + v) + x.get(1 + n + v, 1 + n + v) - T::one()).abs();
        if r > worst.1 {
            worst = (1 + v, r);
        }
    }
    worst
}

/// Euclidean projection onto `{ŷ : 1ᵀŷ = m, 0 ≤ ŷ ≤ 1}`.
///
/// The solution is `ŷᵢ = clamp(yᵢ − τ, 0, 1)`. The map `τ ↦ Σ clamp(yᵢ − τ)`
/// is piecewise linear and non-increasing with breakpoints `yᵢ` and
/// `yᵢ − 1`, so after sorting them `τ` is found by one linear interpolation.
pub fn project_capped_simplex<T: Real>(y: &[T], m: T) -> Result<Vec<T>> {
    let len = y.len();
    if !(m >= T::zero() && m <= T::from_count(len)) {
        return Err(Error::InfeasibleCap {
            capacity: m.to_f64_lossy(),
            len,
        });
    }
    let total = |tau: T| -> T { y.iter().map(|&v| (v - tau).clamp_to(T::zero(), T::one())).sum() };
    let mut bps: Vec<T> = y.iter().flat_map(|&v| [v, v - T::one()]).collect();
    bps.sort_by(|a, b| a.partial_cmp(b).expect("finite input"));
    if len == 0 {
        return Ok(Vec::new());
    }
    // total(bps[0]) = len ≥ m ≥ 0 = total(bps.last()).
    let (mut lo, mut hi) = (0, bps.len() - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if total(bps[mid]) >= m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (t0, t1) = (bps[lo], bps[hi]);
    let (f0, f1) = (total(t0), total(t1));
    let tau = if f0 == f1 { t0 } else { t0 + (f0 - m) * (t1 - t0) / (f0 - f1) };
    Ok(y.iter().map(|&v| (v - tau).clamp_to(T::zero(), T::one())).collect())
}
