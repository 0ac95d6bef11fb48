//! Reference solvers used to verify the fast closed-form routines. They
//! favour transparency over speed and are only meant for small problems.

mod lp;
mod qp;

pub use lp::{lp_vertex_enumeration, LpProblem};
pub use qp::{ProjectionQp, SymProjectionQp};
