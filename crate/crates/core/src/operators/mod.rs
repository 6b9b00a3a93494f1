//! Time operators of the confined free particle and the tools to
//! diagonalize them.

pub mod cache;
pub mod ccr;
pub mod cto;
pub mod ctoa;
pub mod eigen;
pub mod matrix;

pub use cache::{CacheStatus, EigenCache};
pub use ccr::{canonical_domain_sample, ccr_defect, OperatorKind};
pub use cto::{cto_hilbert_schmidt_sq, cto_matrix};
pub use ctoa::{
    ctoa_eigenfunction_analytic, ctoa_eigenvalue_from_root, ctoa_kernel, ctoa_matrix, ctoa_matrix_element,
    ctoa_matrix_element_quadrature, AnalyticCtoaEigenfunction, Sign,
};
pub use eigen::{eig_hermitian, eigvals_hermitian, EigenSystem};
pub use matrix::HermitianMatrix;
