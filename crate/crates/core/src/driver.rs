//! The cutting-plane ADMM outer loop: solve, certify, separate, repeat.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use log::info;
use serde::{Deserialize, Serialize};

use crate::admm::{init_state, run_inner, AdmmConfig, InnerStop};
use crate::bounds::{safe_lower_bound, BoundCertificate, BoundMode, LpStatus};
use crate::cuts::{cluster_cuts, separate_bqp_excluding, separate_ep_pooled, Cut, CutFamily, CutKind, EpSeparationParams};
use crate::error::{Error, Result};
use crate::graph::{GraphInstance, PartitionSpec};
use crate::relaxation::{build_relaxation, Problem, Relaxation};
use crate::scalar::Real;
use crate::tolerances::Tolerances;

/// Inner tolerances for the first solve, the intermediate solves and the
/// final polish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsSchedule {
    pub first: f64,
    pub middle: f64,
    pub last: f64,
}

impl EpsSchedule {
    pub fn for_problem(problem: Problem) -> Self {
        match problem {
            Problem::Ep => Self { first: 1e-3, middle: 1e-3, last: 1e-4 },
            Problem::Bp => Self { first: 1e-5, middle: 1e-4, last: 1e-5 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Known upper bound; enables the gap-closure stop.
    pub ub: Option<f64>,
    pub num_cuts: usize,
    pub max_outer_loops: usize,
    pub eps_proj: f64,
    pub eps_admm: EpsSchedule,
    pub max_time: Duration,
    /// Repetitions of the probabilistic independent-set heuristic.
    pub n_r: usize,
    /// Sensitivity of the probabilistic heuristic.
    pub eps_sample: f64,
    pub tol_sep: f64,
    pub exact_is_max_sets: u64,
    pub max_inner_iter: usize,
    pub min_improvement: f64,
    pub bound_mode: BoundMode,
    pub seed: u64,
}

impl SolveConfig {
    pub fn defaults(n: usize, problem: Problem) -> Self {
        Self {
            ub: None,
            num_cuts: if n <= 300 { 3 * n } else { 5 * n },
            max_outer_loops: if n <= 300 { 30 } else { 10 },
            eps_proj: match problem {
                Problem::Ep => 1e-4,
                Problem::Bp => 1e-6,
            },
            eps_admm: EpsSchedule::for_problem(problem),
            max_time: Duration::from_secs(7200),
            n_r: n,
            eps_sample: 0.1,
            tol_sep: Tolerances::DEFAULT.separation,
            exact_is_max_sets: 2_000_000,
            max_inner_iter: 20_000,
            min_improvement: 1e-3,
            bound_mode: BoundMode::Exact,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = [self.eps_proj, self.eps_admm.first, self.eps_admm.middle, self.eps_admm.last, self.eps_sample];
        if positive.iter().any(|&v| v.is_nan() || v <= 0.0) || self.num_cuts == 0 {
            return Err(Error::InvalidParameter("tolerances must be positive and num_cuts at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    GapClosed,
    SmallImprovement,
    FewNewCuts,
    MaxOuterLoops,
    TimeLimit,
}

/// One solve of the inner ADMM and the bound it certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterRecord {
    pub outer: usize,
    /// True for the tighter final solve after the loop stopped.
    pub polish: bool,
    pub eps_admm: f64,
    pub inner_iterations: usize,
    pub inner_stop: InnerStop,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub sigma: f64,
    /// Bound certified by this solve.
    pub lb_step: f64,
    /// Running maximum of certified bounds.
    pub lb: f64,
    pub lp_status: LpStatus,
    /// Cut counts in effect during this solve.
    pub triangle_cuts: usize,
    pub indepset_cuts: usize,
    pub bqp_cuts: usize,
    /// Cuts separated after this solve (zero if the loop stopped first).
    pub new_cuts: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub graph: String,
    pub n: usize,
    pub k: usize,
    pub m: Vec<usize>,
    pub problem: Problem,
    pub ub: Option<f64>,
    pub records: Vec<OuterRecord>,
    pub lb: f64,
    /// `⌈lb⌉` for integer-weight graphs.
    pub lb_rounded: Option<i64>,
    pub stop: StopReason,
    pub outer_loops: usize,
    pub inner_iterations: usize,
    pub total_cuts: usize,
    pub wall_time: f64,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Line<'a> {
    Outer {
        graph: &'a str,
        #[serde(flatten)]
        record: &'a OuterRecord,
    },
    Summary {
        graph: &'a str,
        n: usize,
        k: usize,
        m: &'a [usize],
        problem: Problem,
        ub: Option<f64>,
        lb: f64,
        lb_rounded: Option<i64>,
        stop: StopReason,
        outer_loops: usize,
        inner_iterations: usize,
        total_cuts: usize,
        wall_time: f64,
    },
}

impl BoundReport {
    /// One JSON object per line: a `"type": "outer"` line per record, then a
    /// `"type": "summary"` line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut w, &Line::Outer { graph: &self.graph, record })?;
            writeln!(w)?;
        }
        let summary = Line::Summary {
            graph: &self.graph,
            n: self.n,
            k: self.k,
            m: &self.m,
            problem: self.problem,
            ub: self.ub,
            lb: self.lb,
            lb_rounded: self.lb_rounded,
            stop: self.stop,
            outer_loops: self.outer_loops,
            inner_iterations: self.inner_iterations,
            total_cuts: self.total_cuts,
            wall_time: self.wall_time,
        };
        serde_json::to_writer(&mut w, &summary)?;
        writeln!(w)
    }

    /// The report with wall-clock fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.wall_time = 0.0;
        r.records.iter_mut().for_each(|rec| rec.wall_time = 0.0);
        r
    }
}

struct Run<'a, T> {
    rel: Relaxation<T>,
    cfg: &'a SolveConfig,
    integral: bool,
    start: Instant,
    deadline: Instant,
    cuts: Vec<Cut>,
    present: HashSet<CutKind>,
    records: Vec<OuterRecord>,
    best: f64,
}

impl<T: Real> Run<'_, T> {
    fn gap_closed(&self) -> bool {
        match self.cfg.ub {
            Some(ub) if self.integral => self.best.ceil() >= ub,
            Some(ub) => self.best >= ub,
            None => false,
        }
    }

    fn counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for cut in &self.cuts {
            c[match cut.family() {
                CutFamily::Triangle => 0,
                CutFamily::IndepSet => 1,
                CutFamily::Bqp => 2,
            }] += 1;
        }
        c
    }

    fn certify(&mut self, z: &crate::linalg::SymMatrix<T>) -> Result<BoundCertificate> {
        let cert = safe_lower_bound(z, &self.rel, &self.cuts, self.cfg.bound_mode, self.integral)?;
        self.best = self.best.max(cert.lb);
        Ok(cert)
    }
}

/// Runs the cutting-plane loop on `g` and returns the certified bound with
/// a record of every inner solve.
pub fn solve(g: &GraphInstance, spec: &PartitionSpec, cfg: &SolveConfig) -> Result<BoundReport> {
    solve_with::<f64>(g, spec, cfg)
}

/// [`solve`] with the conic engine running in scalar type `T`.
pub fn solve_with<T: Real>(g: &GraphInstance, spec: &PartitionSpec, cfg: &SolveConfig) -> Result<BoundReport> {
    cfg.validate()?;
    let start = Instant::now();
    let rel = build_relaxation::<T>(g, spec)?;
    let problem = rel.problem;
    let mut admm = AdmmConfig::for_problem(problem);
    admm.dykstra.eps_proj = cfg.eps_proj;
    admm.max_iter = cfg.max_inner_iter;
    let mut run = Run {
        rel,
        cfg,
        integral: g.has_integer_weights(),
        start,
        deadline: start.checked_add(cfg.max_time).unwrap_or(start + Duration::from_secs(u32::MAX as u64)),
        cuts: Vec::new(),
        present: HashSet::new(),
        records: Vec::new(),
        best: f64::NEG_INFINITY,
    };
    admm.deadline = Some(run.deadline);
    let mut state = init_state(&run.rel);
    let mut clustering = cluster_cuts(&run.cuts);
    let n = g.n();
    let k = spec.k;

    let solve_once = |run: &mut Run<T>, state: &mut crate::admm::AdmmState<T>, clustering: &crate::cuts::CutClustering, outer: usize, eps: f64, polish: bool| -> Result<()> {
        let mut c = admm;
        c.eps_admm = eps;
        let inner = run_inner(state, &run.rel, &run.cuts, clustering, &c)?;
        let cert = run.certify(&state.z)?;
        let [tri, is, bqp] = run.counts();
        info!(
            "outer {outer}{}: lb {:.6} (step {:.6}), {} inner iterations, {} cuts",
            if polish { " (polish)" } else { "" },
            run.best,
            cert.lb,
            inner.iterations,
            run.cuts.len()
        );
        run.records.push(OuterRecord {
            outer,
            polish,
            eps_admm: eps,
            inner_iterations: inner.iterations,
            inner_stop: inner.stop,
            primal_residual: inner.primal_residual,
            dual_residual: inner.dual_residual,
            sigma: state.sigma.to_f64_lossy(),
            lb_step: cert.lb,
            lb: run.best,
            lp_status: cert.lp_status,
            triangle_cuts: tri,
            indepset_cuts: is,
            bqp_cuts: bqp,
            new_cuts: 0,
            wall_time: run.start.elapsed().as_secs_f64(),
        });
        Ok(())
    };

    let stop = 'outer: {
        if cfg.max_time.is_zero() {
            let cert = run.certify(&state.z)?;
            run.records.push(OuterRecord {
                outer: 0,
                polish: false,
                eps_admm: cfg.eps_admm.first,
                inner_iterations: 0,
                inner_stop: InnerStop::TimeLimit,
                primal_residual: f64::NAN,
                dual_residual: f64::NAN,
                sigma: state.sigma.to_f64_lossy(),
                lb_step: cert.lb,
                lb: run.best,
                lp_status: cert.lp_status,
                triangle_cuts: 0,
                indepset_cuts: 0,
                bqp_cuts: 0,
                new_cuts: 0,
                wall_time: run.start.elapsed().as_secs_f64(),
            });
            break 'outer StopReason::TimeLimit;
        }
        let mut outer = 0;
        loop {
            let eps = if cfg.max_outer_loops == 0 {
                cfg.eps_admm.last
            } else if outer == 0 {
                cfg.eps_admm.first
            } else {
                cfg.eps_admm.middle
            };
            let previous = run.best;
            solve_once(&mut run, &mut state, &clustering, outer, eps, false)?;
            let timed_out = run.records.last().is_some_and(|r| r.inner_stop == InnerStop::TimeLimit) || Instant::now() >= run.deadline;

            let reason = if run.gap_closed() {
                Some(StopReason::GapClosed)
            } else if outer > 0 && run.best - previous < cfg.min_improvement {
                Some(StopReason::SmallImprovement)
            } else {
                None
            };
            let reason = match reason {
                Some(r) => Some(r),
                None if timed_out => break 'outer StopReason::TimeLimit,
                None => {
                    let x = &state.x;
                    let sep = match run.rel.problem {
                        Problem::Ep => {
                            let params = EpSeparationParams {
                                limit: cfg.num_cuts,
                                tol: cfg.tol_sep,
                                n_r: cfg.n_r,
                                eps: cfg.eps_sample,
                                seed: cfg.seed.wrapping_add(outer as u64),
                                exact_is_max_sets: cfg.exact_is_max_sets,
                            };
                            separate_ep_pooled(x, k, &params, &run.present)
                        }
                        Problem::Bp => separate_bqp_excluding(x, cfg.num_cuts, cfg.tol_sep, &run.present),
                    };
                    let new = sep.cuts.len();
                    if let Some(rec) = run.records.last_mut() {
                        rec.new_cuts = new;
                    }
                    if (new as f64) < 0.25 * n as f64 {
                        Some(StopReason::FewNewCuts)
                    } else if outer >= cfg.max_outer_loops {
                        Some(StopReason::MaxOuterLoops)
                    } else {
                        for cut in sep.cuts {
                            run.present.insert(cut.kind.clone());
                            run.cuts.push(cut);
                        }
                        clustering = cluster_cuts(&run.cuts);
                        None
                    }
                }
            };
            if let Some(reason) = reason {
                if reason != StopReason::GapClosed && !timed_out && !(reason == StopReason::MaxOuterLoops && cfg.max_outer_loops == 0) {
                    if let Some(rec) = run.records.last_mut() {
                        rec.new_cuts = 0;
                    }
                    solve_once(&mut run, &mut state, &clustering, outer, cfg.eps_admm.last, true)?;
                }
                break 'outer reason;
            }
            outer += 1;
        }
    };

    let [tri, is, bqp] = run.counts();
    let outer_loops = run.records.iter().filter(|r| !r.polish).count();
    Ok(BoundReport {
        graph: g.name().to_string(),
        n,
        k,
        m: spec.m.clone(),
        problem,
        ub: cfg.ub,
        lb: run.best,
        lb_rounded: run.integral.then(|| run.best.ceil() as i64),
        stop,
        outer_loops,
        inner_iterations: run.records.iter().map(|r| r.inner_iterations).sum(),
        total_cuts: tri + is + bqp,
        wall_time: run.start.elapsed().as_secs_f64(),
        records: run.records,
    })
}
