//! Weighted Euclidean projection onto a polyhedron by a primal active-set
//! method with dense Gaussian elimination on the KKT system.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// `min Σ wᵢ (xᵢ − aᵢ)²` subject to `Aₑ x = bₑ` and `Aᵢ x ≤ bᵢ`.
#[derive(Debug, Clone)]
pub struct ProjectionQp {
    pub target: Vec<f64>,
    pub weights: Vec<f64>,
    pub eq: Vec<(Vec<f64>, f64)>,
    pub le: Vec<(Vec<f64>, f64)>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a square system by Gaussian elimination with partial pivoting.
/// Rows whose pivot vanishes are treated as redundant and their unknown set
/// to zero, which is valid for the consistent systems built below.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut pivot_col = vec![None; n];
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())) else {
            break;
        };
        if a[p][col].abs() <= 1e-13 * scale {
            continue;
        }
        a.swap(row, p);
        b.swap(row, p);
        for r in 0..n {
            if r != row && a[r][col] != 0.0 {
                let f = a[r][col] / a[row][col];
                for c in col..n {
                    a[r][c] -= f * a[row][c];
                }
                b[r] -= f * b[row];
            }
        }
        pivot_col[col] = Some(row);
        row += 1;
    }
    (0..n).map(|c| pivot_col[c].map_or(0.0, |r| b[r] / a[r][c])).collect()
}

impl ProjectionQp {
    pub fn new(target: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(target.len(), weights.len());
        assert!(weights.iter().all(|&w| w > 0.0));
        Self {
            target,
            weights,
            eq: Vec::new(),
            le: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// Largest constraint violation at `x`.
    pub fn infeasibility(&self, x: &[f64]) -> f64 {
        let e = self.eq.iter().map(|(a, b)| (dot(a, x) - b).abs());
        let i = self.le.iter().map(|(a, b)| (dot(a, x) - b).max(0.0));
        e.chain(i).fold(0.0, f64::max)
    }

    /// Solves from a feasible starting point.
    pub fn solve(&self, x0: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let feas_tol = 1e-9;
        if self.infeasibility(x0) > feas_tol {
            return Err(Error::InvalidParameter(format!(
                "starting point violates the constraints by {:e}",
                self.infeasibility(x0)
            )));
        }
        let mut x = x0.to_vec();
        // Working set: equality rows first (independent subset), then inequalities.
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut work_eq: Vec<usize> = Vec::new();
        for (idx, (a, _)) in self.eq.iter().enumerate() {
            let mut r = a.clone();
            for q in &basis {
                let d = dot(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= d * qi;
                }
            }
            let norm = dot(&r, &r).sqrt();
            if norm > 1e-10 * dot(a, a).sqrt().max(1e-300) {
                basis.push(r.iter().map(|v| v / norm).collect());
                work_eq.push(idx);
            }
        }
        let mut work_le: Vec<usize> = Vec::new();
        let winv: Vec<f64> = self.weights.iter().map(|w| 1.0 / w).collect();
        let max_iter = 50 * (n + self.le.len()) + 1000;
        for _ in 0..max_iter {
            let rows: Vec<&Vec<f64>> = work_eq
                .iter()
                .map(|&i| &self.eq[i].0)
                .chain(work_le.iter().map(|&i| &self.le[i].0))
                .collect();
            // Gradient of ½Σwᵢ(xᵢ − aᵢ)² (scaled objective).
            let g: Vec<f64> = (0..n).map(|i| self.weights[i] * (x[i] - self.target[i])).collect();
            let m = rows.len();
            let mut gram = vec![vec![0.0; m]; m];
            let mut rhs = vec![0.0; m];
            for (r, ar) in rows.iter().enumerate() {
                for (c, ac) in rows.iter().enumerate() {
                    gram[r][c] = (0..n).map(|i| ar[i] * winv[i] * ac[i]).sum();
                }
                rhs[r] = -(0..n).map(|i| ar[i] * winv[i] * g[i]).sum::<f64>();
            }
            let lambda = solve_dense(gram, rhs);
            let p: Vec<f64> = (0..n)
                .map(|i| {
                    let at_l: f64 = rows.iter().zip(&lambda).map(|(a, l)| a[i] * l).sum();
                    -winv[i] * (g[i] + at_l)
                })
                .collect();
            let pnorm = dot(&p, &p).sqrt();
            let xnorm = dot(&x, &x).sqrt();
            if pnorm <= 1e-12 * (1.0 + xnorm) {
                let le_mult = &lambda[work_eq.len()..];
                let worst = le_mult
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(i, &v)| (i, v));
                match worst {
                    Some((pos, v)) if v < -1e-12 * (1.0 + pnorm) => {
                        work_le.remove(pos);
                    }
                    _ => return Ok(x),
                }
                continue;
            }
            let mut alpha = 1.0;
            let mut blocking = None;
            for (idx, (a, b)) in self.le.iter().enumerate() {
                if work_le.contains(&idx) {
                    continue;
                }
                let ap = dot(a, &p);
                if ap > 1e-14 * dot(a, a).sqrt() * pnorm {
                    let t = ((b - dot(a, &x)) / ap).max(0.0);
                    if t < alpha {
                        alpha = t;
                        blocking = Some(idx);
                    }
                }
            }
            for (xi, pi) in x.iter_mut().zip(&p) {
                *xi += alpha * pi;
            }
            if let Some(b) = blocking {
                work_le.push(b);
            }
        }
        Err(Error::NonConvergence {
            routine: "active-set QP oracle",
            iterations: max_iter,
        })
    }
}

/// Projection of a symmetric matrix in the Frobenius norm, with variables
/// the upper-triangle entries (off-diagonal entries carry weight 2).
#[derive(Debug, Clone)]
pub struct SymProjectionQp {
    pub order: usize,
    pub qp: ProjectionQp,
}

impl SymProjectionQp {
    pub fn new(m: &SymMatrix<f64>) -> Self {
        let q = m.order();
        let mut target = Vec::new();
        let mut weights = Vec::new();
        for i in 0..q {
            for j in i..q {
                target.push(m.get(i, j));
                weights.push(if i == j { 1.0 } else { 2.0 });
            }
        }
        Self {
            order: q,
            qp: ProjectionQp::new(target, weights),
        }
    }

    /// Variable index of entry `(i, j)`.
    pub fn var(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        i * self.order - i * (i + 1) / 2 + j
    }

    fn row(&self, terms: &[((usize, usize), f64)]) -> Vec<f64> {
        let mut a = vec![0.0; self.qp.dim()];
        for &((i, j), c) in terms {
            a[self.var(i, j)] += c;
        }
        a
    }

    pub fn add_eq(&mut self, terms: &[((usize, usize), f64)], rhs: f64) {
        let a = self.row(terms);
        self.qp.eq.push((a, rhs));
    }

    pub fn add_le(&mut self, terms: &[((usize, usize), f64)], rhs: f64) {
        let a = self.row(terms);
        self.qp.le.push((a, rhs));
    }

    pub fn to_vec(&self, x: &SymMatrix<f64>) -> Vec<f64> {
        let q = self.order;
        let mut v = Vec::with_capacity(self.qp.dim());
        for i in 0..q {
            for j in i..q {
                v.push(x.get(i, j));
            }
        }
        v
    }

    pub fn to_matrix(&self, v: &[f64]) -> SymMatrix<f64> {
        SymMatrix::from_upper(self.order, |i, j| v[self.var(i, j)])
    }

    pub fn solve(&self, start: &SymMatrix<f64>) -> Result<SymMatrix<f64>> {
        let v = self.qp.solve(&self.to_vec(start))?;
        Ok(self.to_matrix(&v))
    }
}
