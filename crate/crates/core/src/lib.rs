//! Spectral simulator for two time operators of a free particle confined to
//! `[-l, l]` with the twisted boundary condition `φ(-l) = e^{-2iγ} φ(l)`:
//! the confined time-of-arrival operator (CTOA) and the characteristic time
//! operator (CTO).

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod operators;
pub mod output;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{EnergyBasis, SpatialGrid, SystemConfig, WaveFunction};
