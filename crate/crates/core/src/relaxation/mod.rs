//! Facially reduced DNN relaxations of the equipartition and bisection
//! problems and the projectors onto their polyhedral base sets.

mod base;
mod structure;

pub use base::{arrow_residual, project_base_bp, project_base_ep, project_capped_simplex, t_arrow};
pub use structure::{bp_basis_generator, bp_constraint_matrix, ep_basis_generator, gangster_indices, partition_constraint_matrix};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{GraphInstance, PartitionKind, PartitionSpec};
use crate::linalg::{orthonormal_basis, Matrix, SymMatrix};
use crate::scalar::Real;

/// Which relaxation is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Problem {
    Ep,
    Bp,
}

/// Constants defining the polyhedral base set 𝒳.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseSetDescriptor<T> {
    /// Diagonal fixed to `diag`, off-diagonal entries boxed to `[lo, hi]`.
    Ep { k: usize, diag: T, lo: T, hi: T },
    /// Lifted bisection matrices of order `2n + 1` with part sizes `m1 + m2 = n`.
    Bp { n: usize, m1: usize, m2: usize },
}

impl<T: Real> BaseSetDescriptor<T> {
    pub fn ep(k: usize) -> Self {
        let kk = T::from_count(k);
        BaseSetDescriptor::Ep {
            k,
            diag: (kk - T::one()) / kk,
            lo: -T::one() / kk,
            hi: (kk - T::one()) / kk,
        }
    }

    pub fn bp(m1: usize, m2: usize) -> Self {
        BaseSetDescriptor::Bp { n: m1 + m2, m1, m2 }
    }

    /// Euclidean projection onto the base set.
    pub fn project(&self, m: &SymMatrix<T>) -> SymMatrix<T> {
        match self {
            BaseSetDescriptor::Ep { .. } => project_base_ep(m, self),
            BaseSetDescriptor::Bp { .. } => project_base_bp(m, self),
        }
    }

    /// Largest violation of the set's constraints by `x`.
    pub fn infeasibility(&self, x: &SymMatrix<T>) -> T {
        let q = x.order();
        let mut worst = x.max_asymmetry();
        let mut note = |v: T| {
            if v > worst {
                worst = v;
            }
        };
        match *self {
            BaseSetDescriptor::Ep { diag, lo, hi, .. } => {
                for i in 0..q {
                    note((x.get(i, i) - diag).abs());
                    for j in (i + 1)..q {
                        note(lo - x.get(i, j));
                        note(x.get(i, j) - hi);
                    }
                }
            }
            BaseSetDescriptor::Bp { n, m1, m2 } => {
                note((x.get(0, 0) - T::one()).abs());
                for (g1, g2) in gangster_indices(n) {
                    note(x.get(g1, g2).abs());
                }
                let t1: T = (1..=n).map(|a| x.get(a, a)).sum();
                let t2: T = (n + 1..=2 * n).map(|a| x.get(a, a)).sum();
                note((t1 - T::from_count(m1)).abs());
                note((t2 - T::from_count(m2)).abs());
                for q in 0..n {
                    note((x.get(1 + q, 1 + q) + x.get(1 + n + q, 1 + n + q) - T::one()).abs());
                }
                for a in 1..=2 * n {
                    note((x.get(0, a) - x.get(a, a)).abs());
                }
                for a in 0..x.order() {
                    for b in a..x.order() {
                        note(-x.get(a, b));
                        note(x.get(a, b) - T::one());
                    }
                }
            }
        }
        worst
    }
}

/// Everything the solver needs to know about one relaxation.
#[derive(Debug, Clone)]
pub struct Relaxation<T> {
    pub problem: Problem,
    pub n: usize,
    pub spec: PartitionSpec,
    /// Unscaled objective matrix, so that `⟨L̄, X⟩` is the cut weight of a lifted partition.
    pub lbar: SymMatrix<T>,
    /// Orthonormal basis of the minimal face: `X = V R Vᵀ`.
    pub v: Matrix<T>,
    /// Zero pattern of the lifted bisection matrix (upper-triangle pairs, bisection only).
    pub gangster: Vec<(usize, usize)>,
    /// Conditioning factor applied to `L̄` inside the ADMM.
    pub scale: T,
    pub base: BaseSetDescriptor<T>,
}

/// Builds the relaxation for graph `g` and partition `spec`.
pub fn build_relaxation<T: Real>(g: &GraphInstance, spec: &PartitionSpec) -> Result<Relaxation<T>> {
    let n = g.n();
    spec.validate_for(n)?;
    let l: SymMatrix<T> = g.laplacian();
    let lnorm = l.frobenius_norm();
    match spec.kind {
        PartitionKind::Equipartition => {
            let k = spec.k;
            let v = orthonormal_basis(&ep_basis_generator::<T>(n))?;
            let kk = T::from_count(k);
            let nn = T::from_count(n);
            let scale = if lnorm == T::zero() {
                T::one()
            } else if n <= 400 {
                T::one() / lnorm
            } else if n <= 800 {
                kk / lnorm
            } else {
                nn / (kk * lnorm)
            };
            Ok(Relaxation {
                problem: Problem::Ep,
                n,
                spec: spec.clone(),
                lbar: l.scaled(T::half()),
                v,
                gangster: Vec::new(),
                scale,
                base: BaseSetDescriptor::ep(k),
            })
        }
        PartitionKind::Bisection => {
            let (m1, m2) = (spec.m[0], spec.m[1]);
            let v = orthonormal_basis(&bp_basis_generator::<T>(m1, m2))?;
            let q = 2 * n + 1;
            let mut lbar = SymMatrix::zeros(q);
            for i in 0..n {
                for j in i..n {
                    let h = l.get(i, j) * T::half();
                    lbar.set(1 + i, 1 + j, h);
                    lbar.set(1 + n + i, 1 + n + j, h);
                }
            }
            Ok(Relaxation {
                problem: Problem::Bp,
                n,
                spec: spec.clone(),
                lbar,
                v,
                gangster: gangster_indices(n),
                scale: T::one(),
                base: BaseSetDescriptor::bp(m1, m2),
            })
        }
    }
}

impl<T: Real> Relaxation<T> {
    /// Order of the lifted matrix `X`.
    pub fn order(&self) -> usize {
        self.v.rows()
    }

    /// Order of the reduced matrix `R`.
    pub fn reduced_order(&self) -> usize {
        self.v.cols()
    }

    /// `tr(X)`, which is the same for every `X` in the base set and hence
    /// equals `tr(R)` for every feasible `X = V R Vᵀ`.
    pub fn feasible_trace(&self) -> T {
        match self.base {
            BaseSetDescriptor::Ep { diag, .. } => diag * T::from_count(self.n),
            BaseSetDescriptor::Bp { n, .. } => T::from_count(n + 1),
        }
    }

    pub fn project_base(&self, m: &SymMatrix<T>) -> SymMatrix<T> {
        self.base.project(m)
    }

    /// Unscaled objective `⟨L̄, X⟩`.
    pub fn objective(&self, x: &SymMatrix<T>) -> T {
        self.lbar.inner(x)
    }

    /// Lift of a partition (`part_of[v]` = 0-based part index) into the
    /// relaxation's matrix space.
    pub fn lift(&self, part_of: &[usize]) -> SymMatrix<T> {
        let n = self.n;
        match self.problem {
            Problem::Ep => {
                let k = T::from_count(self.spec.k);
                SymMatrix::from_upper(n, |i, j| {
                    let same = if part_of[i] == part_of[j] { T::one() } else { T::zero() };
                    same - T::one() / k
                })
            }
            Problem::Bp => {
                let mut u = vec![T::zero(); 2 * n + 1];
                u[0] = T::one();
                for (v, &p) in part_of.iter().enumerate() {
                    u[1 + p * n + v] = T::one();
                }
                SymMatrix::from_upper(2 * n + 1, |i, j| u[i] * u[j])
            }
        }
    }
}
