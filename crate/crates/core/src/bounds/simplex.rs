//! Bounded-variable dual simplex with an explicit basis inverse.
//!
//! Every structural variable carries finite bounds, so the all-slack basis
//! with each structural at its cost-favourable bound is dual feasible and no
//! phase one is needed. Rows are `a·x ≤ b` or `a·x = b`.

use log::debug;

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
    pub eq: bool,
}

/// `min cᵀx` over `lo ≤ x ≤ hi` and the rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundedLp {
    pub c: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// `cᵀx` at the final primal point.
    pub value: f64,
    pub x: Vec<f64>,
    /// Lagrange multipliers in `cᵀx + yᵀ(Ax − b)` form: `y ≥ 0` on `≤` rows.
    pub y: Vec<f64>,
    pub optimal: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    Lower,
    Upper,
}

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 50;
const RECOMPUTE_EVERY: usize = 100;

impl BoundedLp {
    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    /// Lagrangian dual function at `y`. It is a valid lower bound on the
    /// optimum for every `y` with `y ≥ 0` on inequality rows; entries of the
    /// wrong sign are clamped to zero first.
    pub fn dual_value(&self, y: &[f64]) -> f64 {
        let mut reduced = self.c.clone();
        let mut value = 0.0;
        for (row, &yi) in self.rows.iter().zip(y) {
            let yi = if row.eq { yi } else { yi.max(0.0) };
            if yi == 0.0 {
                continue;
            }
            value -= yi * row.rhs;
            for &(j, a) in &row.terms {
                reduced[j] += yi * a;
            }
        }
        for (j, &d) in reduced.iter().enumerate() {
            value += if d >= 0.0 { d * self.lo[j] } else { d * self.hi[j] };
        }
        value
    }

    /// Largest bound or row violation of `x`.
    pub fn infeasibility(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(self.lo[j] - v).max(v - self.hi[j]);
        }
        for row in &self.rows {
            let lhs: f64 = row.terms.iter().map(|&(j, a)| a * x[j]).sum();
            let r = lhs - row.rhs;
            worst = worst.max(if row.eq { r.abs() } else { r });
        }
        worst
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Dual simplex from the all-slack basis. Stops at optimality, at
    /// `max_iter`, or when the ratio test finds no entering variable
    /// (primal infeasibility, impossible for the relaxations built here).
    pub fn solve(&self, max_iter: usize) -> LpSolution {
        Solver::new(self).run(max_iter)
    }
}

struct Solver<'a> {
    lp: &'a BoundedLp,
    n: usize,
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    d: Vec<f64>,
    status: Vec<Status>,
    basic: Vec<usize>,
    binv: Vec<f64>,
}

impl<'a> Solver<'a> {
    fn new(lp: &'a BoundedLp) -> Self {
        let n = lp.num_vars();
        let m = lp.rows.len();
        let mut cols = vec![Vec::new(); n];
        for (i, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.terms {
                if a != 0.0 {
                    cols[j].push((i, a));
                }
            }
        }
        let mut lo = lp.lo.clone();
        let mut hi = lp.hi.clone();
        for row in &lp.rows {
            lo.push(0.0);
            hi.push(if row.eq { 0.0 } else { f64::INFINITY });
        }
        let mut cost = lp.c.clone();
        cost.resize(n + m, 0.0);
        let mut status = vec![Status::Basic; n + m];
        let mut x = vec![0.0; n + m];
        for j in 0..n {
            let at_lower = cost[j] >= 0.0;
            status[j] = if at_lower { Status::Lower } else { Status::Upper };
            x[j] = if at_lower { lo[j] } else { hi[j] };
        }
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let mut s = Self {
            lp,
            n,
            m,
            cols,
            lo,
            hi,
            d: cost.clone(),
            cost,
            x,
            status,
            basic: (n..n + m).collect(),
            binv,
        };
        s.recompute();
        s
    }

    /// `A_j` as a sparse column, slacks included.
    fn column(&self, j: usize) -> Vec<(usize, f64)> {
        if j < self.n {
            self.cols[j].clone()
        } else {
            vec![(j - self.n, 1.0)]
        }
    }

    /// Recomputes basic values and reduced costs from the basis inverse.
    fn recompute(&mut self) {
        let m = self.m;
        let mut rhs: Vec<f64> = self.lp.rows.iter().map(|r| r.rhs).collect();
        for j in 0..self.n + m {
            if self.status[j] != Status::Basic && self.x[j] != 0.0 {
                for (i, a) in self.column(j) {
                    rhs[i] -= a * self.x[j];
                }
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            self.x[self.basic[r]] = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        }
        let pi = self.row_duals();
        for j in 0..self.n + m {
            self.d[j] = if self.status[j] == Status::Basic {
                0.0
            } else {
                self.cost[j] - self.column(j).iter().map(|&(i, a)| pi[i] * a).sum::<f64>()
            };
        }
    }

    /// `π = c_Bᵀ B⁻¹`.
    fn row_duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut pi = vec![0.0; m];
        for r in 0..m {
            let cb = self.cost[self.basic[r]];
            if cb != 0.0 {
                for (p, &b) in pi.iter_mut().zip(&self.binv[r * m..(r + 1) * m]) {
                    *p += cb * b;
                }
            }
        }
        pi
    }

    fn infeasibility_of(&self, var: usize) -> f64 {
        let v = self.x[var];
        (self.lo[var] - v).max(v - self.hi[var]).max(0.0)
    }

    fn run(mut self, max_iter: usize) -> LpSolution {
        let (n, m) = (self.n, self.m);
        let mut iterations = 0;
        let mut degenerate = 0;
        let mut bland = false;
        let mut optimal = false;
        let mut alpha = vec![0.0; n + m];
        while iterations < max_iter {
            // Leaving row.
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let inf = self.infeasibility_of(self.basic[r]);
                if inf > PRIMAL_TOL {
                    let better = match leave {
                        None => true,
                        Some((r0, best)) => {
                            if bland {
                                self.basic[r] < self.basic[r0]
                            } else {
                                inf > best
                            }
                        }
                    };
                    if better {
                        leave = Some((r, inf));
                    }
                }
            }
            let Some((r, _)) = leave else {
                optimal = true;
                break;
            };
            let bvar = self.basic[r];
            let to_lower = self.x[bvar] < self.lo[bvar];
            let target = if to_lower { self.lo[bvar] } else { self.hi[bvar] };

            // Pivot row α_r = (B⁻¹)_r A.
            alpha.iter_mut().for_each(|a| *a = 0.0);
            let rho = &self.binv[r * m..(r + 1) * m];
            for (i, &ri) in rho.iter().enumerate() {
                if ri != 0.0 {
                    for &(j, a) in &self.lp.rows[i].terms {
                        alpha[j] += ri * a;
                    }
                    alpha[n + i] = ri;
                }
            }

            // Ratio test (Harris two-pass, or Bland's smallest index).
            let eligible = |j: usize, status: Status, a: f64| -> bool {
                if status == Status::Basic || a.abs() <= PIVOT_TOL || self.lo[j] == self.hi[j] {
                    return false;
                }
                let increase = if to_lower { a < 0.0 } else { a > 0.0 };
                match status {
                    Status::Lower => increase,
                    Status::Upper => !increase,
                    Status::Basic => false,
                }
            };
            let mut bound = f64::INFINITY;
            for j in 0..n + m {
                if eligible(j, self.status[j], alpha[j]) {
                    let slack = if bland { self.d[j].abs() } else { self.d[j].abs() + DUAL_TOL };
                    bound = bound.min(slack / alpha[j].abs());
                }
            }
            if !bound.is_finite() {
                debug!("dual simplex: row {r} admits no entering variable");
                break;
            }
            let mut enter: Option<usize> = None;
            for j in 0..n + m {
                if !eligible(j, self.status[j], alpha[j]) {
                    continue;
                }
                let ratio = self.d[j].abs() / alpha[j].abs();
                if bland {
                    if ratio <= bound * (1.0 + 1e-12) + 1e-15 && enter.is_none_or(|q| j < q) {
                        enter = Some(j);
                    }
                } else if ratio <= bound && enter.is_none_or(|q| alpha[j].abs() > alpha[q].abs()) {
                    enter = Some(j);
                }
            }
            let q = enter.expect("finite ratio bound has a witness");
            let aq = alpha[q];

            // Dual update.
            let theta_d = self.d[q] / aq;
            if theta_d.abs() <= 1e-12 {
                degenerate += 1;
                if degenerate >= DEGENERATE_STREAK && !bland {
                    debug!("dual simplex: switching to Bland's rule after {iterations} iterations");
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            for j in 0..n + m {
                if self.status[j] != Status::Basic && alpha[j] != 0.0 {
                    self.d[j] -= theta_d * alpha[j];
                }
            }
            self.d[q] = 0.0;
            self.d[bvar] = -theta_d;

            // Primal update along B⁻¹A_q.
            let col = self.column(q);
            let mut colq = vec![0.0; m];
            for (i, c) in colq.iter_mut().enumerate() {
                let row = &self.binv[i * m..(i + 1) * m];
                *c = col.iter().map(|&(k, a)| row[k] * a).sum();
            }
            let theta_p = (self.x[bvar] - target) / aq;
            for i in 0..m {
                if colq[i] != 0.0 {
                    self.x[self.basic[i]] -= theta_p * colq[i];
                }
            }
            self.x[q] += theta_p;
            self.x[bvar] = target;
            self.status[bvar] = if to_lower { Status::Lower } else { Status::Upper };
            self.status[q] = Status::Basic;
            self.basic[r] = q;

            // Basis inverse update.
            let piv = colq[r];
            for v in &mut self.binv[r * m..(r + 1) * m] {
                *v /= piv;
            }
            let pivot_row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            for (i, &f) in colq.iter().enumerate() {
                if i != r && f != 0.0 {
                    for (b, p) in self.binv[i * m..(i + 1) * m].iter_mut().zip(&pivot_row) {
                        *b -= f * p;
                    }
                }
            }
            iterations += 1;
            if iterations % RECOMPUTE_EVERY == 0 {
                self.recompute();
            }
        }
        if optimal {
            self.recompute();
            optimal = (0..m).all(|r| self.infeasibility_of(self.basic[r]) <= PRIMAL_TOL);
        }
        let pi = self.row_duals();
        let y = pi
            .iter()
            .zip(&self.lp.rows)
            .map(|(p, row)| if row.eq { -p } else { (-p).max(0.0) })
            .collect();
        let x = self.x[..n].to_vec();
        LpSolution {
            value: self.lp.objective(&x),
            x,
            y,
            optimal,
            iterations,
        }
    }
}
