//! Cyclic Dykstra projection onto the intersection of the base set with
//! the cut polyhedra, one cluster of disjoint cuts at a time.

use rayon::prelude::*;

use crate::cuts::{Cut, CutClustering};
use crate::linalg::SymMatrix;
use crate::scalar::Real;

/// Clusters smaller than this are projected sequentially.
const PAR_CLUSTER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DykstraConfig {
    /// Stop once `‖X^{q+1} − X^q‖_F` falls below this.
    pub eps_proj: f64,
    pub max_sweeps: usize,
    /// Apply the cuts of one cluster in parallel. Results are bit-identical
    /// either way because supports within a cluster are disjoint.
    pub parallel: bool,
}

impl Default for DykstraConfig {
    fn default() -> Self {
        Self {
            eps_proj: 1e-4,
            max_sweeps: 2000,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DykstraOutcome<T> {
    pub x: SymMatrix<T>,
    pub sweeps: usize,
    pub converged: bool,
    /// `‖X^{q+1} − X^q‖_F` for every sweep.
    pub residuals: Vec<T>,
}

/// Working state of one projection call. The cut normals are stored only
/// on each cut's support.
#[derive(Debug, Clone)]
pub struct DykstraState<T> {
    pub x: SymMatrix<T>,
    pub n_base: SymMatrix<T>,
    pub n_cuts: Vec<Vec<T>>,
    pub sweeps: usize,
}

impl<T: Real> DykstraState<T> {
    pub fn new(m: &SymMatrix<T>, cuts: &[Cut]) -> Self {
        Self {
            x: m.clone(),
            n_base: SymMatrix::zeros(m.order()),
            n_cuts: cuts.iter().map(|c| vec![T::zero(); c.support().len()]).collect(),
            sweeps: 0,
        }
    }

    /// Restarts from normals of an earlier call on the same cut list:
    /// `X = M − N_base − Σ N_t`, which keeps `X + Σ N = M` as in a cold start.
    pub fn warm(m: &SymMatrix<T>, cuts: &[Cut], normals: DykstraNormals<T>) -> Self {
        let mut x = m.sub(&normals.base);
        for (cut, n) in cuts.iter().zip(&normals.cuts) {
            let vals: Vec<T> = cut.gather(&x).iter().zip(n).map(|(&a, &b)| a - b).collect();
            cut.scatter(&mut x, &vals);
        }
        Self {
            x,
            n_base: normals.base,
            n_cuts: normals.cuts,
            sweeps: 0,
        }
    }

    /// One base projection followed by one pass over all clusters.
    pub fn sweep<F>(&mut self, base: &F, cuts: &[Cut], clustering: &CutClustering, k: usize, parallel: bool)
    where
        F: Fn(&SymMatrix<T>) -> SymMatrix<T>,
    {
        let y = self.x.add(&self.n_base);
        self.x = base(&y);
        self.n_base = y.sub(&self.x);
        for cluster in &clustering.clusters {
            let x = &self.x;
            let normals = &self.n_cuts;
            let step = |&c: &usize| -> (Vec<T>, Vec<T>) {
                let cut = &cuts[c];
                let shifted: Vec<T> = cut.gather(x).iter().zip(&normals[c]).map(|(&a, &b)| a + b).collect();
                let mut proj = shifted.clone();
                cut.project_values(&mut proj, k);
                let normal = shifted.iter().zip(&proj).map(|(&a, &b)| a - b).collect();
                (proj, normal)
            };
            let updates: Vec<(Vec<T>, Vec<T>)> = if parallel && cluster.len() >= PAR_CLUSTER {
                cluster.par_iter().map(step).collect()
            } else {
                cluster.iter().map(step).collect()
            };
            for (&c, (proj, normal)) in cluster.iter().zip(updates) {
                cuts[c].scatter(&mut self.x, &proj);
                self.n_cuts[c] = normal;
            }
        }
        self.sweeps += 1;
    }
}

/// Normal matrices kept between calls with an unchanged cut list.
#[derive(Debug, Clone)]
pub struct DykstraNormals<T> {
    pub base: SymMatrix<T>,
    pub cuts: Vec<Vec<T>>,
}

/// Best approximation of `m` in `𝒳 ∩ ⋂ₜ ℋₜ`.
pub fn dykstra_project<T, F>(
    m: &SymMatrix<T>,
    base: F,
    cuts: &[Cut],
    clustering: &CutClustering,
    k: usize,
    cfg: &DykstraConfig,
) -> DykstraOutcome<T>
where
    T: Real,
    F: Fn(&SymMatrix<T>) -> SymMatrix<T>,
{
    dykstra_project_warm(m, base, cuts, clustering, k, cfg, &mut None)
}

/// [`dykstra_project`] starting from `normals` when present (they must come
/// from a call with the same cuts) and leaving the final normals there.
pub fn dykstra_project_warm<T, F>(
    m: &SymMatrix<T>,
    base: F,
    cuts: &[Cut],
    clustering: &CutClustering,
    k: usize,
    cfg: &DykstraConfig,
    normals: &mut Option<DykstraNormals<T>>,
) -> DykstraOutcome<T>
where
    T: Real,
    F: Fn(&SymMatrix<T>) -> SymMatrix<T>,
{
    if cuts.is_empty() {
        let x = base(m);
        let r = x.distance(m);
        return DykstraOutcome {
            x,
            sweeps: 1,
            converged: true,
            residuals: vec![r],
        };
    }
    let mut state = match normals.take() {
        Some(n) if n.cuts.len() == cuts.len() && n.base.order() == m.order() => DykstraState::warm(m, cuts, n),
        _ => DykstraState::new(m, cuts),
    };
    let mut residuals = Vec::new();
    let eps = T::lit(cfg.eps_proj);
    let mut converged = false;
    while state.sweeps < cfg.max_sweeps {
        let prev = state.x.clone();
        state.sweep(&base, cuts, clustering, k, cfg.parallel);
        let r = state.x.distance(&prev);
        residuals.push(r);
        if r < eps {
            converged = true;
            break;
        }
    }
    *normals = Some(DykstraNormals {
        base: state.n_base,
        cuts: state.n_cuts,
    });
    DykstraOutcome {
        x: state.x,
        sweeps: state.sweeps,
        converged,
        residuals,
    }
}
