//! Certified lower bounds from any dual multiplier, the linear program over
//! the cut-strengthened base set, and combinatorial reference bounds.

mod combinatorial;
mod simplex;

pub use combinatorial::{enumerate_optimum, heuristic_upper_bound, ENUMERATION_LIMIT};
pub use simplex::{BoundedLp, LpRow, LpSolution};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::cuts::Cut;
use crate::error::Result;
use crate::linalg::{lambda_max_upper, SymMatrix};
use crate::relaxation::{BaseSetDescriptor, Relaxation};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// How `min ⟨C, X⟩` over the base set was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    /// Over 𝒳_𝒯, solved to optimality.
    Exact,
    /// Over 𝒳 only (cuts ignored); weaker but valid.
    BoxRelaxed,
}

/// Requested evaluation of the linear minimisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMode {
    Exact,
    BoxRelaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    /// Certified lower bound on the (unscaled) minimum cut.
    pub lb: f64,
    /// `⌈lb⌉`, present for integer-weight graphs only.
    pub lb_rounded: Option<i64>,
    pub lp_status: LpStatus,
    /// `min ⟨S·L̄ + Z, X⟩` over the base set, scaled units.
    pub lp_value: f64,
    /// Upper estimate of `λ_max(VᵀZV)`.
    pub lambda_max: f64,
    /// Trace shared by every feasible `R`.
    pub trace: f64,
}

/// One matrix entry expressed in LP variables.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Entry {
    Const(f64),
    Affine { var: usize, coef: f64, offset: f64 },
}

/// The base set written as a bounded LP in its free entries.
#[derive(Debug, Clone)]
struct EntryModel {
    order: usize,
    entries: Vec<Entry>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Equality rows of the base set (the bisection trace).
    eq: Vec<LpRow>,
}

impl EntryModel {
    fn new<T: Real>(base: &BaseSetDescriptor<T>, order: usize) -> Self {
        let mut entries = vec![Entry::Const(0.0); order * order];
        let (mut lo, mut hi, mut eq) = (Vec::new(), Vec::new(), Vec::new());
        let set = |entries: &mut Vec<Entry>, i: usize, j: usize, e: Entry| {
            entries[i * order + j] = e;
            entries[j * order + i] = e;
        };
        match *base {
            BaseSetDescriptor::Ep { diag, lo: l, hi: h, .. } => {
                for i in 0..order {
                    set(&mut entries, i, i, Entry::Const(diag.to_f64_lossy()));
                    for j in (i + 1)..order {
                        set(&mut entries, i, j, Entry::Affine { var: lo.len(), coef: 1.0, offset: 0.0 });
                        lo.push(l.to_f64_lossy());
                        hi.push(h.to_f64_lossy());
                    }
                }
            }
            BaseSetDescriptor::Bp { n, m1, .. } => {
                set(&mut entries, 0, 0, Entry::Const(1.0));
                for v in 0..n {
                    let (a, b) = (1 + v, 1 + n + v);
                    let y = lo.len();
                    lo.push(0.0);
                    hi.push(1.0);
                    let ya = Entry::Affine { var: y, coef: 1.0, offset: 0.0 };
                    let yb = Entry::Affine { var: y, coef: -1.0, offset: 1.0 };
                    set(&mut entries, 0, a, ya);
                    set(&mut entries, a, a, ya);
                    set(&mut entries, 0, b, yb);
                    set(&mut entries, b, b, yb);
                }
                eq.push(LpRow { terms: (0..n).map(|v| (v, 1.0)).collect(), rhs: m1 as f64, eq: true });
                for a in 1..order {
                    for b in (a + 1)..order {
                        if b != a + n {
                            set(&mut entries, a, b, Entry::Affine { var: lo.len(), coef: 1.0, offset: 0.0 });
                            lo.push(0.0);
                            hi.push(1.0);
                        }
                    }
                }
            }
        }
        Self { order, entries, lo, hi, eq }
    }

    fn entry(&self, i: usize, j: usize) -> Entry {
        self.entries[i * self.order + j]
    }

    /// `⟨C, X⟩ = constant + cᵀx`.
    fn objective<T: Real>(&self, c: &SymMatrix<T>) -> (f64, Vec<f64>) {
        let mut constant = 0.0;
        let mut lin = vec![0.0; self.lo.len()];
        for i in 0..self.order {
            for j in i..self.order {
                let w = c.get(i, j).to_f64_lossy() * if i == j { 1.0 } else { 2.0 };
                match self.entry(i, j) {
                    Entry::Const(v) => constant += w * v,
                    Entry::Affine { var, coef, offset } => {
                        lin[var] += w * coef;
                        constant += w * offset;
                    }
                }
            }
        }
        (constant, lin)
    }

    fn cut_row(&self, cut: &Cut, k: usize) -> LpRow {
        let (terms, rhs) = cut.linear_form::<f64>(k);
        let mut rhs = rhs;
        let mut out: Vec<(usize, f64)> = Vec::new();
        for ((i, j), a) in terms {
            match self.entry(i, j) {
                Entry::Const(v) => rhs -= a * v,
                Entry::Affine { var, coef, offset } => {
                    rhs -= a * offset;
                    out.push((var, a * coef));
                }
            }
        }
        out.sort_by_key(|t| t.0);
        out.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        out.retain(|t| t.1 != 0.0);
        LpRow { terms: out, rhs, eq: false }
    }

    fn lp<T: Real>(&self, c: &SymMatrix<T>, cuts: &[Cut], k: usize) -> (f64, BoundedLp) {
        let (constant, lin) = self.objective(c);
        let mut rows = self.eq.clone();
        rows.extend(cuts.iter().map(|cut| self.cut_row(cut, k)));
        (constant, BoundedLp { c: lin, lo: self.lo.clone(), hi: self.hi.clone(), rows })
    }

    fn matrix<T: Real>(&self, x: &[f64]) -> SymMatrix<T> {
        SymMatrix::from_upper(self.order, |i, j| {
            T::lit(match self.entry(i, j) {
                Entry::Const(v) => v,
                Entry::Affine { var, coef, offset } => offset + coef * x[var],
            })
        })
    }

    /// Minimum over the base set alone: box endpoints, plus a fractional
    /// knapsack for the variables tied by the equality row.
    fn box_minimum(&self, lin: &[f64]) -> (f64, Vec<f64>) {
        let mut x: Vec<f64> = lin
            .iter()
            .enumerate()
            .map(|(j, &c)| if c >= 0.0 { self.lo[j] } else { self.hi[j] })
            .collect();
        for row in &self.eq {
            let mut vars: Vec<usize> = row.terms.iter().map(|t| t.0).collect();
            vars.sort_by(|&a, &b| lin[a].total_cmp(&lin[b]).then(a.cmp(&b)));
            let mut left = row.rhs;
            for &j in &vars {
                let take = left.clamp(self.lo[j], self.hi[j]);
                x[j] = take;
                left -= take;
            }
        }
        (lin.iter().zip(&x).map(|(c, v)| c * v).sum(), x)
    }
}

/// Exact `min ⟨C, X⟩` over 𝒳_𝒯. Returns the certified value (the
/// Lagrangian dual value at the simplex multipliers), a minimiser, and
/// whether optimality was verified to `lp_residual`.
pub fn solve_lp_over_xt<T: Real>(c: &SymMatrix<T>, rel: &Relaxation<T>, cuts: &[Cut]) -> (f64, SymMatrix<T>, bool) {
    let model = EntryModel::new(&rel.base, rel.order());
    let (constant, lp) = model.lp(c, cuts, rel.spec.k);
    let max_iter = 50 * (lp.num_vars() + lp.rows.len()) + 1000;
    let sol = lp.solve(max_iter);
    let (box_val, box_x) = model.box_minimum(&lp.c);
    let certified = lp.dual_value(&sol.y);
    let tol = Tolerances::DEFAULT.lp_residual;
    let gap = sol.value - certified;
    let exact = sol.optimal && lp.infeasibility(&sol.x) <= tol && gap <= tol * (1.0 + sol.value.abs());
    if exact {
        (constant + certified, model.matrix(&sol.x), true)
    } else if certified >= box_val {
        (constant + certified, model.matrix(&sol.x), false)
    } else {
        (constant + box_val, model.matrix(&box_x), false)
    }
}

/// `min ⟨C, X⟩` over 𝒳 (cuts ignored), in closed form.
pub fn box_minimum<T: Real>(c: &SymMatrix<T>, rel: &Relaxation<T>) -> (f64, SymMatrix<T>) {
    let model = EntryModel::new(&rel.base, rel.order());
    let (constant, lin) = model.objective(c);
    let (v, x) = model.box_minimum(&lin);
    (constant + v, model.matrix(&x))
}

/// Certified lower bound from the multiplier `z` of the scaled problem:
/// `[min_{X∈𝒳_𝒯} ⟨S·L̄ + Z, X⟩ − t·λ_max(VᵀZV)] / S − margin`, where `t` is
/// the trace shared by all feasible `R`.
pub fn safe_lower_bound<T: Real>(
    z: &SymMatrix<T>,
    rel: &Relaxation<T>,
    cuts: &[Cut],
    mode: BoundMode,
    integer_weights: bool,
) -> Result<BoundCertificate> {
    let tol = Tolerances::DEFAULT;
    let c = rel.lbar.scaled(rel.scale).add(z);
    let (lp_value, lp_status) = match mode {
        BoundMode::Exact => {
            let (v, _, exact) = solve_lp_over_xt(&c, rel, cuts);
            if !exact {
                warn!("LP over the cut set not verified optimal; bound downgraded to the base-set value");
            }
            (v, if exact { LpStatus::Exact } else { LpStatus::BoxRelaxed })
        }
        BoundMode::BoxRelaxed => (box_minimum(&c, rel).0, LpStatus::BoxRelaxed),
    };
    let w = z.congruence_t(&rel.v);
    let lambda = lambda_max_upper(&w, tol.lambda_max_rel)?.to_f64_lossy();
    let trace = rel.feasible_trace().to_f64_lossy();
    let lb = (lp_value - trace * lambda) / rel.scale.to_f64_lossy() - tol.bound_margin;
    Ok(BoundCertificate {
        lb,
        lb_rounded: integer_weights.then(|| lb.ceil() as i64),
        lp_status,
        lp_value,
        lambda_max: lambda,
        trace,
    })
}
