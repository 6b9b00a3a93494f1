//! Bessel functions of fractional order and the roots that fix the CTOA
//! spectrum.

pub mod bessel;
pub mod gamma;
pub mod roots;

pub use bessel::{bessel_j, bessel_j_derivative, bessel_j_reduced};
pub use gamma::gamma;
pub use roots::{count_sign_changes, ctoa_characteristic, find_ctoa_roots, RootTable};
