//! Unitary dynamics of energy-basis states: evolution, position moments,
//! densities, transition probabilities and the fits built on them.

pub mod density;
pub mod evolution;
pub mod fit;
pub mod transitions;

pub use density::{count_prominent_maxima, density_field, DensityField};
pub use evolution::{
    evolve, expectation_q, linspace, sampling_step_limit, trajectory, variance_minimum_time, variance_q,
    PositionObservables, Trajectory, VarianceMinimum,
};
pub use fit::{slope_fit, LinearFit};
pub use transitions::{
    transition_peak, transition_probability, TransitionAmplitude, TransitionPeak, TransitionRow, TransitionScan,
};
