//! Analyses shared by the scenarios, the examples and the acceptance suite.

use serde::Serialize;

use super::spectra::{operator_matrix, Spectrum};
use crate::dynamics::transitions::{peak_of, DEFAULT_PEAK_SAMPLES};
use crate::dynamics::{
    evolve, linspace, slope_fit, trajectory, variance_minimum_time, LinearFit, PositionObservables, Trajectory,
    TransitionAmplitude, TransitionRow, TransitionScan,
};
use crate::error::Result;
use crate::model::{EnergyBasis, SystemConfig, WaveFunction};
use crate::operators::{eigvals_hermitian, OperatorKind};

/// Position moments of an evolving eigenstate around its eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrivalSummary {
    pub tau: f64,
    pub t_min: Option<f64>,
    pub var_min: Option<f64>,
    pub mean_q_at_t_min: Option<f64>,
    pub min_at_edge: bool,
    /// `|t_min − τ|/|τ|`.
    pub relative_deviation: Option<f64>,
    pub max_norm_drift: f64,
}

/// Trajectory of `wf` over `times` and the variance minimum found on it.
pub fn arrival(wf: &WaveFunction, tau: f64, times: &[f64]) -> Result<(Trajectory, ArrivalSummary)> {
    let traj = trajectory(wf, times)?;
    let min = variance_minimum_time(&traj)?;
    let obs = PositionObservables::new(wf.basis().clone());
    let mean_at = min.map(|m| obs.raw_moments(&evolve(wf, m.t_min)).0);
    let summary = ArrivalSummary {
        tau,
        t_min: min.map(|m| m.t_min),
        var_min: min.map(|m| m.var_min),
        mean_q_at_t_min: mean_at,
        min_at_edge: min.is_some_and(|m| m.at_edge),
        relative_deviation: min.map(|m| ((m.t_min - tau) / tau).abs()),
        max_norm_drift: traj.max_norm_drift(),
    };
    Ok((traj, summary))
}

/// Default window `[0, 2|τ|]` sampled at `samples` points.
pub fn arrival_times(tau: f64, t_max: Option<f64>, samples: usize) -> Vec<f64> {
    linspace(0.0, t_max.unwrap_or(2.0 * tau.abs()), samples)
}

/// Relative dip of the variance below its initial value, over samples with
/// `|t − center| ≤ half_window`. Zero if no sample falls in the window.
pub fn variance_depth(traj: &Trajectory, center: f64, half_window: f64) -> f64 {
    let Some(&v0) = traj.var_q.first() else {
        return 0.0;
    };
    let lowest = traj
        .times
        .iter()
        .zip(&traj.var_q)
        .filter(|(t, _)| (*t - center).abs() <= half_window)
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    if lowest.is_finite() && v0 > 0.0 {
        (1.0 - lowest / v0).max(0.0)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// `P_{±t}[n, n']` peaks for the given pairs of positive-eigenvalue indices.
///
/// Forward scans search `t ∈ [0, 4|Δτ|]`; backward scans search the mirror
/// window and report negative times.
pub fn transition_scan(spectrum: &Spectrum, pairs: &[(usize, usize)], direction: Direction) -> Result<TransitionScan> {
    let mut rows = Vec::with_capacity(pairs.len());
    for &(n, n_prime) in pairs {
        let (i, j) = (spectrum.positive_index(n)?, spectrum.positive_index(n_prime)?);
        let tau_n = spectrum.eigenvalues()[i];
        let tau_np = spectrum.eigenvalues()[j];
        let delta_tau = tau_np - tau_n;
        let amp = TransitionAmplitude::new(&spectrum.state(i), &spectrum.state(j))?;
        let sign = match direction {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        };
        let peak = peak_of(
            |s| amp.probability(sign * s),
            (0.0, 4.0 * delta_tau.abs()),
            DEFAULT_PEAK_SAMPLES,
        )?;
        rows.push(TransitionRow {
            n,
            n_prime,
            delta_tau,
            t_max: sign * peak.t_max,
            p_max: peak.p_max,
            boundary_flag: peak.boundary_flag,
        });
    }
    Ok(TransitionScan { rows })
}

/// Fit of `|t_max|` against `|Δτ|`.
pub fn scan_fit(scan: &TransitionScan) -> Result<LinearFit> {
    let pts: Vec<(f64, f64)> = scan.rows.iter().map(|r| (r.delta_tau.abs(), r.t_max.abs())).collect();
    slope_fit(&pts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub half_width: usize,
    pub doubled: usize,
    /// Largest relative change of τ_n over the checked indices.
    pub max_relative_change: f64,
    /// Relative change of the last index.
    pub last_relative_change: f64,
    pub converged: bool,
}

/// Threshold on the relative eigenvalue change under `K → 2K`.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-3;

/// Recomputes eigenvalues at `2K` and compares the n-th largest positive
/// ones for `n` in `indices`.
pub fn convergence_check(spectrum: &Spectrum, indices: &[usize]) -> Result<ConvergenceCheck> {
    let cfg = *spectrum.basis.config();
    let k = spectrum.basis.half_width();
    let doubled = EnergyBasis::new(cfg, 2 * k)?;
    let ev = eigvals_hermitian(&operator_matrix(spectrum.kind, &doubled)?)?;
    let mut max_change = 0.0f64;
    let mut last = 0.0;
    for &n in indices {
        let a = spectrum.tau(n)?;
        let b = ev[ev.len() - n];
        last = ((b - a) / b).abs();
        max_change = max_change.max(last);
    }
    Ok(ConvergenceCheck {
        half_width: k,
        doubled: 2 * k,
        max_relative_change: max_change,
        last_relative_change: last,
        converged: max_change < CONVERGENCE_THRESHOLD,
    })
}

/// Relative CTOA eigenvalue differences between the truncated matrix and
/// the Bessel roots, for the `count` largest positive eigenvalues.
pub fn ctoa_cross_check(cfg: SystemConfig, spectrum: &Spectrum, count: usize) -> Result<Vec<(f64, f64)>> {
    let roots = super::spectra::roots_for(cfg.gamma(), count)?;
    let from_roots = roots.taus(&cfg);
    let from_matrix = spectrum.positive_descending();
    Ok(from_roots
        .into_iter()
        .zip(from_matrix)
        .take(count)
        .collect())
}

/// Eigenstates of both signs of `kind` pair as `±τ`.
pub fn spectral_pairing_error(eigenvalues: &[f64]) -> f64 {
    let n = eigenvalues.len();
    (0..n)
        .map(|i| (eigenvalues[i] + eigenvalues[n - 1 - i]).abs())
        .fold(0.0, f64::max)
}

pub fn is_cto(kind: OperatorKind) -> bool {
    kind == OperatorKind::CtoPtt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cto_scan_runs() {
        let cfg = SystemConfig::atomic(std::f64::consts::PI / 6.0).unwrap();
        let s = Spectrum::compute(OperatorKind::CtoPtt, cfg, 40, None).unwrap();
        let pairs: Vec<_> = (10..=14).map(|n| (n, n - 1)).collect();
        let fwd = transition_scan(&s, &pairs, Direction::Forward).unwrap();
        assert!(fwd.rows.iter().all(|r| r.delta_tau > 0.0 && r.t_max > 0.0));
        assert!(fwd.rows.iter().all(|r| (0.0..=1.0).contains(&r.p_max)));
        let fit = scan_fit(&fwd).unwrap();
        assert!(fit.r_squared > 0.5);
    }

    #[test]
    fn pairing_error_of_symmetric_list() {
        assert_eq!(spectral_pairing_error(&[-2.0, -1.0, 0.0, 1.0, 2.0]), 0.0);
        assert!((spectral_pairing_error(&[-2.0, 0.0, 2.5]) - 0.5).abs() < 1e-15);
    }
}
