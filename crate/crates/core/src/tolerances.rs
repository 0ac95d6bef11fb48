//! Numerical tolerances shared by the solver and its test suites.

/// Every tolerance the pipeline relies on, in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative orthogonality bound for eigenvectors, `‖QᵀQ − I‖_F ≤ eig_orthogonality · q`.
    pub eig_orthogonality: f64,
    /// Relative residual bound `‖MQ − QΛ‖_F ≤ eig_residual · ‖M‖_F`.
    pub eig_residual: f64,
    /// Sweeps of implicit QL allowed per eigenvalue before giving up.
    pub eig_max_sweeps: usize,
    /// Relative accuracy assumed for the largest eigenvalue; the safe bound
    /// inflates `λ_max` by this much times `‖M‖_F`.
    pub lambda_max_rel: f64,
    /// Relative threshold under which a Householder pivot counts as zero.
    pub rank_rel: f64,
    /// Minimum violation for a cut to be reported by a separator.
    pub separation: f64,
    /// Complementary slackness / feasibility residual accepted from the LP.
    pub lp_residual: f64,
    /// Absolute amount subtracted from every certified lower bound.
    pub bound_margin: f64,
    /// Constraint satisfaction expected from the exact projectors.
    pub projection_feasibility: f64,
    /// Allowed deviation from arrow consistency before the BQP projector
    /// refuses its input.
    pub arrow_consistency: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        eig_orthogonality: 1e-10,
        eig_residual: 1e-9,
        eig_max_sweeps: 60,
        lambda_max_rel: 1e-9,
        rank_rel: 1e-10,
        separation: 1e-3,
        lp_residual: 1e-8,
        bound_margin: 1e-6,
        projection_feasibility: 1e-10,
        arrow_consistency: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
