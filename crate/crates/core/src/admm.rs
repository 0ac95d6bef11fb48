//! ADMM for the facially reduced DNN relaxation:
//! an R-step (PSD projection), an X-step (projection onto 𝒳_𝒯 by Dykstra)
//! and a multiplier update, with an optional adaptive penalty.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cuts::{Cut, CutClustering};
use crate::dykstra::{dykstra_project_warm, DykstraConfig, DykstraNormals};
use crate::error::Result;
use crate::linalg::{project_psd, SymMatrix};
use crate::relaxation::{Problem, Relaxation};
use crate::scalar::Real;

/// How the penalty parameter evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepsizeMode {
    /// σ is pulled towards `‖Z‖/‖X‖` with weights `2^{−p/100}`.
    Adaptive,
    /// σ stays at its initial value and the dual step uses a larger γ.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmConfig {
    pub mode: StepsizeMode,
    pub gamma: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub eps_admm: f64,
    pub max_iter: usize,
    pub deadline: Option<Instant>,
    pub dykstra: DykstraConfig,
}

impl AdmmConfig {
    /// Defaults for a relaxation: adaptive σ with γ = 1 for equipartition,
    /// fixed σ with γ = 1.608 for bisection.
    pub fn for_problem(problem: Problem) -> Self {
        let (mode, gamma, eps_proj) = match problem {
            Problem::Ep => (StepsizeMode::Adaptive, 1.0, 1e-4),
            Problem::Bp => (StepsizeMode::Fixed, 1.608, 1e-6),
        };
        Self {
            mode,
            gamma,
            sigma_min: 1e-5,
            sigma_max: 1e3,
            eps_admm: 1e-4,
            max_iter: 20_000,
            deadline: None,
            dykstra: DykstraConfig {
                eps_proj,
                ..DykstraConfig::default()
            },
        }
    }
}

/// Iterates of the ADMM.
#[derive(Debug, Clone)]
pub struct AdmmState<T> {
    pub r: SymMatrix<T>,
    pub x: SymMatrix<T>,
    pub z: SymMatrix<T>,
    pub sigma: T,
    pub gamma: T,
    /// Iterations performed so far, across all inner solves.
    pub p: usize,
}

/// Starting point: `R = 0`, `Z = 0`; equipartition starts from
/// `X = ((k−1)/k) I` with `σ = ⌈n/k⌉`, bisection from `X = e₁e₁ᵀ` with
/// `σ = ⌈(2n/m₁)²⌉`.
pub fn init_state<T: Real>(rel: &Relaxation<T>) -> AdmmState<T> {
    let q = rel.order();
    let n = rel.n;
    match rel.problem {
        Problem::Ep => {
            let k = rel.spec.k;
            let kk = T::from_count(k);
            AdmmState {
                r: SymMatrix::zeros(rel.reduced_order()),
                x: SymMatrix::identity(q).scaled((kk - T::one()) / kk),
                z: SymMatrix::zeros(q),
                sigma: T::from_count(n.div_ceil(k)),
                gamma: T::one(),
                p: 0,
            }
        }
        Problem::Bp => {
            let m1 = rel.spec.m[0];
            let mut x = SymMatrix::zeros(q);
            x.set(0, 0, T::one());
            let ratio = (2 * n) as f64 / m1 as f64;
            AdmmState {
                r: SymMatrix::zeros(rel.reduced_order()),
                x,
                z: SymMatrix::zeros(q),
                sigma: T::lit((ratio * ratio).ceil()),
                gamma: T::lit(1.608),
                p: 0,
            }
        }
    }
}

/// `P_⪰0(Vᵀ(X + Z/σ)V)`.
pub fn step_r<T: Real>(s: &AdmmState<T>, rel: &Relaxation<T>) -> Result<SymMatrix<T>> {
    let m = s.x.add_scaled(T::one() / s.sigma, &s.z).congruence_t(&rel.v);
    project_psd(&m)
}

/// Projection of `VRVᵀ − (S·L̄ + Z)/σ` onto 𝒳_𝒯, where `vrv = V R Vᵀ`.
/// Returns the new `X` and whether Dykstra converged. `normals` warm-starts
/// Dykstra and must be `None` whenever `cuts` changed since it was filled.
pub fn step_x<T: Real>(
    s: &AdmmState<T>,
    vrv: &SymMatrix<T>,
    rel: &Relaxation<T>,
    cuts: &[Cut],
    clustering: &CutClustering,
    dykstra: &DykstraConfig,
    normals: &mut Option<DykstraNormals<T>>,
) -> (SymMatrix<T>, bool) {
    let inv = T::one() / s.sigma;
    let mut m = vrv.add_scaled(-inv * rel.scale, &rel.lbar);
    m = m.add_scaled(-inv, &s.z);
    let out = dykstra_project_warm(&m, |y| rel.project_base(y), cuts, clustering, rel.spec.k, dykstra, normals);
    (out.x, out.converged)
}

/// `Z + γσ(X − VRVᵀ)`.
pub fn step_z<T: Real>(s: &AdmmState<T>, vrv: &SymMatrix<T>) -> SymMatrix<T> {
    s.z.add_scaled(s.gamma * s.sigma, &s.x.sub(vrv))
}

/// `(1−ω)σ + ω·clamp(‖Z‖/‖X‖, σ_min, σ_max)` with `ω = 2^{−p/100}`;
/// unchanged when `‖X‖ = 0`.
pub fn update_sigma<T: Real>(s: &AdmmState<T>, sigma_min: f64, sigma_max: f64) -> T {
    let xn = s.x.frobenius_norm();
    if xn == T::zero() {
        return s.sigma;
    }
    let omega = T::lit(2f64.powf(-(s.p as f64) / 100.0));
    let target = (s.z.frobenius_norm() / xn).clamp_to(T::lit(sigma_min), T::lit(sigma_max));
    (T::one() - omega) * s.sigma + omega * target
}

/// Why an inner solve returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerStop {
    Converged,
    TimeLimit,
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerOutcome {
    pub stop: InnerStop,
    pub iterations: usize,
    /// `‖X − VRVᵀ‖_F / (1 + ‖X‖_F)` at exit.
    pub primal_residual: f64,
    /// `σ‖X^{p+1} − X^p‖_F / (1 + ‖Z‖_F)` at exit.
    pub dual_residual: f64,
    /// Iterations in which Dykstra hit its sweep cap.
    pub inexact_projections: usize,
}

/// Runs ADMM iterations until both residuals drop below `eps_admm`, the
/// deadline passes or the iteration cap is reached. At least one iteration
/// is always performed unless the deadline has already passed. Dykstra
/// normals carry over between iterations of one call and start from zero
/// on each call.
pub fn run_inner<T: Real>(
    s: &mut AdmmState<T>,
    rel: &Relaxation<T>,
    cuts: &[Cut],
    clustering: &CutClustering,
    cfg: &AdmmConfig,
) -> Result<InnerOutcome> {
    if cfg.mode == StepsizeMode::Adaptive {
        s.sigma = s.sigma.clamp_to(T::lit(cfg.sigma_min), T::lit(cfg.sigma_max));
    }
    s.gamma = T::lit(cfg.gamma);
    let mut out = InnerOutcome {
        stop: InnerStop::IterationLimit,
        iterations: 0,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        inexact_projections: 0,
    };
    let mut normals = None;
    while out.iterations < cfg.max_iter {
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            out.stop = InnerStop::TimeLimit;
            return Ok(out);
        }
        s.r = step_r(s, rel)?;
        let vrv = s.r.congruence(&rel.v);
        let (x_new, converged) = step_x(s, &vrv, rel, cuts, clustering, &cfg.dykstra, &mut normals);
        if !converged {
            out.inexact_projections += 1;
        }
        let dx = x_new.distance(&s.x);
        let sigma_used = s.sigma;
        s.x = x_new;
        s.z = step_z(s, &vrv);
        if cfg.mode == StepsizeMode::Adaptive {
            s.sigma = update_sigma(s, cfg.sigma_min, cfg.sigma_max);
        }
        s.p += 1;
        out.iterations += 1;
        let xn = s.x.frobenius_norm();
        out.primal_residual = (s.x.distance(&vrv) / (T::one() + xn)).to_f64_lossy();
        out.dual_residual = (sigma_used * dx / (T::one() + s.z.frobenius_norm())).to_f64_lossy();
        if out.primal_residual.max(out.dual_residual) < cfg.eps_admm {
            out.stop = InnerStop::Converged;
            return Ok(out);
        }
    }
    Ok(out)
}
