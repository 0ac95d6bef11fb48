//! Dense linear algebra over a generic real scalar.

mod eigen;
mod matrix;
mod qr;
mod sym;

pub use eigen::{
    eig_sym, eig_sym_with, lambda_max, lambda_max_upper, project_psd, project_psd_with_spectrum,
    SymEigen,
};
pub use matrix::Matrix;
pub use qr::{exact_rank, numerical_rank, orthonormal_basis};
pub use sym::SymMatrix;
