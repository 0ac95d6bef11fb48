//! Doubly nonnegative lower bounds, strengthened by cutting planes, for the
//! k-equipartition and graph bisection problems.

pub mod admm;
pub mod bounds;
pub mod cuts;
pub mod driver;
pub mod dykstra;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod relaxation;
pub mod scalar;
pub mod tolerances;

pub use error::{Error, Result};
pub use scalar::Real;
pub use tolerances::Tolerances;

/// Double-precision instantiations of the generic types.
pub type SymMatrixF64 = linalg::SymMatrix<f64>;
pub type MatrixF64 = linalg::Matrix<f64>;
pub type RelaxationF64 = relaxation::Relaxation<f64>;
pub type AdmmStateF64 = admm::AdmmState<f64>;
