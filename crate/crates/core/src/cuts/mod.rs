//! Cutting planes: cut records, their closed-form projectors, separation
//! routines and conflict clustering.

mod cluster;
mod separate;

pub use cluster::{cluster_cuts, CutClustering};
pub use separate::{
    separate_bqp, separate_bqp_excluding, separate_ep_pooled, separate_indepset_exact,
    separate_indepset_exact_excluding, separate_indepset_greedy, separate_indepset_greedy_excluding,
    sample_independent_set, separate_indepset_prob, separate_indepset_prob_excluding, separate_triangles, separate_triangles_excluding,
    EpSeparationParams, Separation,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// Identity of a cut; all indices are 0-based matrix indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CutKind {
    /// `X_ij + X_il ≤ (k−1)/k + X_jl` with apex `i` and `j < l`.
    Triangle { i: usize, j: usize, l: usize },
    /// `Σ_{p<q∈I} X_pq ≥ (1−k)/2` for a sorted set `I` of `k + 1` vertices.
    IndepSet(Vec<usize>),
    /// `X_il + X_jl ≤ X_ll + X_ij` on the lifted bisection matrix, `i < j`,
    /// all indices in `1..=2n`.
    Bqp { i: usize, j: usize, l: usize },
}

/// Which cut family a cut belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CutFamily {
    Triangle,
    IndepSet,
    Bqp,
}

/// A cut together with the matrix positions its projector may modify.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub kind: CutKind,
    /// Upper-triangle positions `(p, q)`, `p ≤ q`, in projector order.
    support: Vec<(usize, usize)>,
    pub violation_at_add: f64,
}

#[inline]
fn pos(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Mirror index of `l` in the other diagonal block of a bisection matrix
/// of order `2n + 1`.
#[inline]
pub fn bqp_partner(l: usize, n: usize) -> usize {
    1 + (l + n - 1) % (2 * n)
}

impl Cut {
    pub fn triangle(i: usize, j: usize, l: usize) -> Self {
        assert!(i != j && i != l && j != l, "triangle indices must be distinct");
        let (j, l) = (j.min(l), j.max(l));
        Self {
            kind: CutKind::Triangle { i, j, l },
            support: vec![pos(i, j), pos(i, l), pos(j, l)],
            violation_at_add: 0.0,
        }
    }

    pub fn indep_set(mut set: Vec<usize>) -> Self {
        set.sort_unstable();
        assert!(set.windows(2).all(|w| w[0] < w[1]), "independent set vertices must be distinct");
        assert!(set.len() >= 2, "independent set needs at least two vertices");
        let mut support = Vec::with_capacity(set.len() * (set.len() - 1) / 2);
        for (a, &p) in set.iter().enumerate() {
            for &q in &set[a + 1..] {
                support.push((p, q));
            }
        }
        Self {
            kind: CutKind::IndepSet(set),
            support,
            violation_at_add: 0.0,
        }
    }

    /// BQP cut on a matrix of order `2n + 1`.
    pub fn bqp(i: usize, j: usize, l: usize, n: usize) -> Self {
        let top = 2 * n;
        assert!(
            (1..=top).contains(&i) && (1..=top).contains(&j) && (1..=top).contains(&l),
            "BQP indices must lie in 1..=2n"
        );
        assert!(i != j && i != l && j != l, "BQP indices must be distinct");
        let (i, j) = (i.min(j), i.max(j));
        let ls = bqp_partner(l, n);
        Self {
            kind: CutKind::Bqp { i, j, l },
            support: vec![pos(i, l), pos(j, l), pos(i, j), (l, l), (0, l), (ls, ls), (0, ls)],
            violation_at_add: 0.0,
        }
    }

    pub fn from_kind(kind: CutKind, n: usize) -> Self {
        match kind {
            CutKind::Triangle { i, j, l } => Self::triangle(i, j, l),
            CutKind::IndepSet(set) => Self::indep_set(set),
            CutKind::Bqp { i, j, l } => Self::bqp(i, j, l, n),
        }
    }

    pub fn with_violation(mut self, v: f64) -> Self {
        self.violation_at_add = v;
        self
    }

    pub fn family(&self) -> CutFamily {
        match self.kind {
            CutKind::Triangle { .. } => CutFamily::Triangle,
            CutKind::IndepSet(_) => CutFamily::IndepSet,
            CutKind::Bqp { .. } => CutFamily::Bqp,
        }
    }

    pub fn support(&self) -> &[(usize, usize)] {
        &self.support
    }

    /// The cut as `Σ cₚ X_p ≤ rhs` over upper-triangle positions.
    pub fn linear_form<T: Real>(&self, k: usize) -> (Vec<((usize, usize), T)>, T) {
        let one = T::one();
        match &self.kind {
            CutKind::Triangle { i, j, l } => {
                let kk = T::from_count(k);
                (
                    vec![(pos(*i, *j), one), (pos(*i, *l), one), (pos(*j, *l), -one)],
                    (kk - one) / kk,
                )
            }
            CutKind::IndepSet(_) => {
                let kk = T::from_count(k);
                (self.support.iter().map(|&p| (p, -one)).collect(), (kk - one) * T::half())
            }
            CutKind::Bqp { i, j, l } => (
                vec![(pos(*i, *l), one), (pos(*j, *l), one), ((*l, *l), -one), (pos(*i, *j), -one)],
                T::zero(),
            ),
        }
    }

    /// `lhs − rhs` of the `≤` form; positive means violated.
    pub fn violation<T: Real>(&self, x: &SymMatrix<T>, k: usize) -> T {
        let (terms, rhs) = self.linear_form::<T>(k);
        terms.iter().map(|&((p, q), c)| c * x.get(p, q)).sum::<T>() - rhs
    }

    pub fn gather<T: Real>(&self, x: &SymMatrix<T>) -> Vec<T> {
        self.support.iter().map(|&(p, q)| x.get(p, q)).collect()
    }

    pub fn scatter<T: Real>(&self, x: &mut SymMatrix<T>, vals: &[T]) {
        for (&(p, q), &v) in self.support.iter().zip(vals) {
            x.set(p, q, v);
        }
    }

    /// Projects the support values (in [`Cut::support`] order) in place.
    /// `k` is ignored by BQP cuts.
    pub fn project_values<T: Real>(&self, vals: &mut [T], k: usize) {
        match self.kind {
            CutKind::Triangle { .. } => project_triangle_values(vals, k),
            CutKind::IndepSet(_) => project_indepset_values(vals, k),
            CutKind::Bqp { .. } => {
                debug_assert!(
                    bqp_local_residual(vals) <= T::lit(1e-6),
                    "BQP projector input is not arrow consistent"
                );
                project_bqp_values(vals)
            }
        }
    }

    /// Projection of a full matrix onto the cut's polyhedron.
    pub fn project<T: Real>(&self, m: &SymMatrix<T>, k: usize) -> SymMatrix<T> {
        let mut vals = self.gather(m);
        self.project_values(&mut vals, k);
        let mut out = m.clone();
        self.scatter(&mut out, &vals);
        out
    }
}

fn project_triangle_values<T: Real>(v: &mut [T], k: usize) {
    let kk = T::from_count(k);
    let viol = v[0] + v[1] - v[2] - (kk - T::one()) / kk;
    if viol > T::zero() {
        let s = viol / T::lit(3.0);
        v[0] -= s;
        v[1] -= s;
        v[2] += s;
    }
}

fn project_indepset_values<T: Real>(v: &mut [T], k: usize) {
    let kk = T::from_count(k);
    let sum: T = v.iter().copied().sum();
    if sum < (T::one() - kk) * T::half() {
        let denom = kk * (kk + T::one());
        let shift = -(kk - T::one()) / denom - T::two() / denom * sum;
        for x in v.iter_mut() {
            *x += shift;
        }
    }
}

/// Support order: `[il, jl, ij, ll, 1l, l*l*, 1l*]`.
fn project_bqp_values<T: Real>(v: &mut [T]) {
    let (m_il, m_jl, m_ij, m_ll, m_1l, m_ss, m_1s) = (v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
    let sixth = T::one() / T::lit(6.0);
    let third = T::one() / T::lit(3.0);
    let mu0 = sixth * m_ll + third * m_1l - sixth * m_ss - third * m_1s + T::half();
    let excess = m_il + m_jl - m_ij - mu0;
    let mu = if excess <= T::zero() {
        mu0
    } else {
        // λ = (6/5)·excess; α, β shift by −λ/4, γ by +λ/4, μ by +λ/12.
        let tenth = excess / T::lit(10.0);
        v[0] = m_il - T::lit(3.0) * tenth;
        v[1] = m_jl - T::lit(3.0) * tenth;
        v[2] = m_ij + T::lit(3.0) * tenth;
        mu0 + tenth
    };
    v[3] = mu;
    v[4] = mu;
    v[5] = T::one() - mu;
    v[6] = T::one() - mu;
}

fn bqp_local_residual<T: Real>(v: &[T]) -> T {
    (v[3] - v[4]).abs().max((v[5] - v[6]).abs()).max((v[3] + v[5] - T::one()).abs())
}

/// Projection onto the triangle polyhedron; other cut kinds are rejected.
pub fn project_triangle<T: Real>(m: &SymMatrix<T>, c: &Cut, k: usize) -> SymMatrix<T> {
    assert!(matches!(c.kind, CutKind::Triangle { .. }), "expected a triangle cut");
    c.project(m, k)
}

pub fn project_indepset<T: Real>(m: &SymMatrix<T>, c: &Cut, k: usize) -> SymMatrix<T> {
    assert!(matches!(c.kind, CutKind::IndepSet(_)), "expected an independent set cut");
    c.project(m, k)
}

/// BQP projection; the input must satisfy `X₀ₐ = Xₐₐ` and
/// `diag(X¹¹) + diag(X²²) = 1`.
pub fn project_bqp<T: Real>(m: &SymMatrix<T>, c: &Cut) -> Result<SymMatrix<T>> {
    assert!(matches!(c.kind, CutKind::Bqp { .. }), "expected a BQP cut");
    let (index, residual) = crate::relaxation::arrow_residual(m);
    if residual > T::lit(Tolerances::DEFAULT.arrow_consistency) {
        return Err(Error::ArrowHypothesis {
            index,
            residual: residual.to_f64_lossy(),
        });
    }
    Ok(c.project(m, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_example() {
        let mut m = SymMatrix::<f64>::zeros(4);
        m.set(0, 1, 1.0);
        m.set(0, 2, 1.0);
        let c = Cut::triangle(0, 1, 2);
        let p = project_triangle(&m, &c, 2);
        assert!((p.get(0, 1) - 0.5).abs() < 1e-15);
        assert!((p.get(0, 2) - 0.5).abs() < 1e-15);
        assert!((p.get(1, 2) - 0.5).abs() < 1e-15);
        assert!(c.violation(&p, 2).abs() < 1e-15);
        assert_eq!(project_triangle(&p, &c, 2), p);
        assert_eq!(project_triangle(&SymMatrix::<f64>::zeros(3), &c, 3), SymMatrix::zeros(3));
    }

    #[test]
    fn indepset_examples() {
        let mut m = SymMatrix::<f64>::zeros(4);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            m.set(a, b, -1.0);
        }
        let c = Cut::indep_set(vec![2, 0, 1]);
        let p = project_indepset(&m, &c, 2);
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert!((p.get(a, b) + 1.0 / 6.0).abs() < 1e-15);
        }
        assert!(c.violation(&p, 2).abs() < 1e-15);
        let mut tight = SymMatrix::<f64>::zeros(3);
        tight.set(0, 1, -0.5);
        assert_eq!(project_indepset(&tight, &c, 2), tight);
    }

    #[test]
    fn bqp_partner_index() {
        // n = 3: blocks 1..=3 and 4..=6 (0-based).
        assert_eq!(bqp_partner(1, 3), 4);
        assert_eq!(bqp_partner(3, 3), 6);
        assert_eq!(bqp_partner(4, 3), 1);
        assert_eq!(bqp_partner(6, 3), 3);
    }

    #[test]
    fn bqp_branch_one_is_identity_on_balanced_input() {
        let d = crate::relaxation::BaseSetDescriptor::bp(1, 1);
        let m = crate::relaxation::project_base_bp(&SymMatrix::<f64>::zeros(5), &d);
        let c = Cut::bqp(1, 2, 3, 2);
        let p = project_bqp(&m, &c).unwrap();
        assert_eq!(p, m);
        assert!((p.get(3, 3) + p.get(bqp_partner(3, 2), bqp_partner(3, 2)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bqp_rejects_inconsistent_input() {
        let m = SymMatrix::<f64>::zeros(5);
        assert!(matches!(
            project_bqp(&m, &Cut::bqp(1, 2, 3, 2)),
            Err(Error::ArrowHypothesis { .. })
        ));
    }

    #[test]
    fn bqp_branch_two_is_tight() {
        // n = 2, order 5: i = 1, j = 3, l = 2, l* = 4.
        let mut m = crate::relaxation::t_arrow(&[0.5f64, 0.5]);
        m.set(1, 2, 1.0);
        m.set(3, 2, 1.0);
        let c = Cut::bqp(1, 3, 2, 2);
        assert!(c.violation(&m, 2) > 0.0);
        let p = project_bqp(&m, &c).unwrap();
        assert!(c.violation(&p, 2).abs() < 1e-14);
        assert!(crate::relaxation::arrow_residual(&p).1 < 1e-15);
    }

    #[test]
    fn linear_forms_match_inequalities() {
        let x = SymMatrix::from_upper(5, |i, j| ((i * 7 + j * 3) % 5) as f64 / 10.0 - 0.2);
        let t = Cut::triangle(2, 4, 0);
        let direct = x.get(2, 0) + x.get(2, 4) - x.get(0, 4) - 0.5;
        assert!((t.violation(&x, 2) - direct).abs() < 1e-15);
        let s = Cut::indep_set(vec![0, 3, 4]);
        let direct = -0.5 - (x.get(0, 3) + x.get(0, 4) + x.get(3, 4));
        assert!((s.violation(&x, 2) - direct).abs() < 1e-15);
        let b = Cut::bqp(3, 1, 2, 2);
        let direct = x.get(1, 2) + x.get(3, 2) - x.get(2, 2) - x.get(1, 3);
        assert!((b.violation(&x, 0) - direct).abs() < 1e-15);
    }
}
