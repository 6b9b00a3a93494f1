//! Free evolution in the energy basis and the position moments of evolving
//! states.

use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::{position_element_by_offset, position_sq_element_by_offset, EnergyBasis, WaveFunction};
use crate::output::fmt_f64;

/// Tolerance on `|‖ψ‖ − 1|` for the observables.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// `c_k ← e^{−iE_k t/ħ} c_k`.
pub fn evolve(wf: &WaveFunction, t: f64) -> WaveFunction {
    let mut out = wf.clone();
    evolve_in_place(&mut out, t);
    out
}

pub fn evolve_in_place(wf: &mut WaveFunction, t: f64) {
    let basis = wf.basis().clone();
    let hbar = basis.config().hbar();
    for (c, &e) in wf.coeffs_mut().iter_mut().zip(basis.energies()) {
        *c *= Complex64::from_polar(1.0, -e * t / hbar);
    }
}

/// Forward and inverse plans of one padded length.
type FftPlan = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>, usize);

/// Evaluates `⟨q⟩` and `⟨q²⟩` from energy coefficients.
///
/// Both matrices are Toeplitz in `k`, so with `R(m) = Σ_k c̄_k c_{k+m}`,
/// `⟨q⟩ = 2 Re Σ_{m>0} q(m) R(m)` and `⟨q²⟩ = q²(0) R(0) + 2 Re Σ_{m>0} q²(m) R(m)`.
/// The autocorrelation is computed by FFT for large bases.
pub struct PositionObservables {
    basis: Arc<EnergyBasis>,
    q_offset: Vec<Complex64>,
    q2_offset: Vec<f64>,
    fft: Option<FftPlan>,
}

const FFT_THRESHOLD: usize = 96;

impl PositionObservables {
    pub fn new(basis: Arc<EnergyBasis>) -> Self {
        let n = basis.dim();
        let l = basis.config().l();
        let q_offset = (0..n as i64).map(|m| position_element_by_offset(m, l)).collect();
        let q2_offset = (0..n as i64).map(|m| position_sq_element_by_offset(m, l)).collect();
        let fft = (n >= FFT_THRESHOLD).then(|| {
            let len = (2 * n).next_power_of_two();
            let mut planner = FftPlanner::new();
            (planner.plan_fft_forward(len), planner.plan_fft_inverse(len), len)
        });
        Self {
            basis,
            q_offset,
            q2_offset,
            fft,
        }
    }

    pub fn basis(&self) -> &Arc<EnergyBasis> {
        &self.basis
    }

    /// `R(m)` for `m = 0..N`.
    fn autocorrelation(&self, c: &[Complex64]) -> Vec<Complex64> {
        let n = c.len();
        match &self.fft {
            Some((fwd, inv, len)) => {
                let mut buf = vec![Complex64::new(0.0, 0.0); *len];
                buf[..n].copy_from_slice(c);
                fwd.process(&mut buf);
                buf.iter_mut().for_each(|z| *z = Complex64::new(z.norm_sqr(), 0.0));
                inv.process(&mut buf);
                let scale = 1.0 / *len as f64;
                // the inverse transform of |X|² is L·R(m), zero-padding keeps it acyclic
                buf.truncate(n);
                buf.iter().map(|z| z * scale).collect()
            }
            None => (0..n)
                .map(|m| (0..n - m).map(|k| c[k].conj() * c[k + m]).sum())
                .collect(),
        }
    }

    /// `(⟨q⟩, ⟨q²⟩, ‖ψ‖²)` without a normalization check.
    pub fn raw_moments(&self, wf: &WaveFunction) -> (f64, f64, f64) {
        let c = wf.coeffs();
        let r = self.autocorrelation(c);
        let norm_sqr: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let mut mean = 0.0;
        let mut second = self.q2_offset[0] * norm_sqr;
        for m in 1..c.len() {
            mean += 2.0 * (self.q_offset[m] * r[m]).re;
            second += 2.0 * self.q2_offset[m] * r[m].re;
        }
        (mean, second, norm_sqr)
    }

    pub fn expectation_q(&self, wf: &WaveFunction) -> Result<f64> {
        check_normalized(wf)?;
        Ok(self.raw_moments(wf).0)
    }

    pub fn variance_q(&self, wf: &WaveFunction) -> Result<f64> {
        check_normalized(wf)?;
        let (mean, second, _) = self.raw_moments(wf);
        Ok(second - mean * mean)
    }
}

fn check_normalized(wf: &WaveFunction) -> Result<()> {
    let norm = wf.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Input(format!("state is not normalized (‖ψ‖ = {norm})")));
    }
    Ok(())
}

pub fn expectation_q(wf: &WaveFunction) -> Result<f64> {
    PositionObservables::new(wf.basis().clone()).expectation_q(wf)
}

pub fn variance_q(wf: &WaveFunction) -> Result<f64> {
    PositionObservables::new(wf.basis().clone()).variance_q(wf)
}

/// Position moments of an evolving state on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub mean_q: Vec<f64>,
    pub var_q: Vec<f64>,
    pub norm: Vec<f64>,
    /// Sampling-rule violations and similar remarks.
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    /// CSV with columns `t,mean_q,var_q,norm`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,mean_q,var_q,norm")?;
        for i in 0..self.len() {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_f64(self.times[i]),
                fmt_f64(self.mean_q[i]),
                fmt_f64(self.var_q[i]),
                fmt_f64(self.norm[i])
            )?;
        }
        Ok(())
    }
}

/// Largest energy carried with amplitude above `1e-8`.
pub fn max_carried_energy(wf: &WaveFunction) -> f64 {
    wf.coeffs()
        .iter()
        .zip(wf.basis().energies())
        .filter(|(c, _)| c.norm() > 1e-8)
        .map(|(_, &e)| e)
        .fold(0.0, f64::max)
}

/// Largest time step resolving the fastest carried phase with a factor of
/// ten margin.
pub fn sampling_step_limit(wf: &WaveFunction) -> f64 {
    let e = max_carried_energy(wf);
    if e == 0.0 {
        f64::INFINITY
    } else {
        0.1 * wf.basis().config().hbar() / e
    }
}

/// Evolves `wf` to every time on an ordered grid and records its position
/// moments.
pub fn trajectory(wf: &WaveFunction, t_grid: &[f64]) -> Result<Trajectory> {
    if t_grid.is_empty() {
        return Err(Error::Input("empty time grid".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Input("time grid must be strictly increasing".into()));
    }
    check_normalized(wf)?;
    let obs = PositionObservables::new(wf.basis().clone());
    let mut warnings = Vec::new();
    let limit = sampling_step_limit(wf);
    let widest = t_grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if widest > limit {
        warnings.push(format!(
            "time step {widest:.3e} exceeds the sampling limit 0.1ħ/E_max = {limit:.3e}"
        ));
    }
    let n = t_grid.len();
    let mut traj = Trajectory {
        times: t_grid.to_vec(),
        mean_q: Vec::with_capacity(n),
        var_q: Vec::with_capacity(n),
        norm: Vec::with_capacity(n),
        warnings,
    };
    for &t in t_grid {
        let psi = evolve(wf, t);
        let (mean, second, norm_sqr) = obs.raw_moments(&psi);
        traj.mean_q.push(mean);
        traj.var_q.push(second - mean * mean);
        traj.norm.push(norm_sqr.sqrt());
    }
    Ok(traj)
}

/// `n` equally spaced times over `[t0, t1]`, endpoints included.
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => (0..n)
            .map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceMinimum {
    pub t_min: f64,
    pub var_min: f64,
    /// Index of the smallest sample.
    pub index: usize,
    /// The smallest sample sits at either end of the window.
    pub at_edge: bool,
}

/// Global sample minimum, refined by the vertex of the parabola through it
/// and its two neighbours. `None` when the curve is flat.
pub fn variance_minimum_time(traj: &Trajectory) -> Result<Option<VarianceMinimum>> {
    let v = &traj.var_q;
    let t = &traj.times;
    if v.len() < 3 {
        return Err(Error::Input(format!("{} samples; at least 3 needed", v.len())));
    }
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if hi - lo < 1e-14 {
        return Ok(None);
    }
    let i = v
        .iter()
        .enumerate()
        .fold(0, |best, (j, &x)| if x < v[best] { j } else { best });
    if i == 0 || i == v.len() - 1 {
        return Ok(Some(VarianceMinimum {
            t_min: t[i],
            var_min: v[i],
            index: i,
            at_edge: true,
        }));
    }
    let (t_min, var_min) = parabola_vertex((t[i - 1], v[i - 1]), (t[i], v[i]), (t[i + 1], v[i + 1]));
    Ok(Some(VarianceMinimum {
        t_min,
        var_min,
        index: i,
        at_edge: false,
    }))
}

fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> (f64, f64) {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    // Newton divided differences: y = y0 + d1 (x−x0) + d2 (x−x0)(x−x1)
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let d2 = (d12 - d01) / (x2 - x0);
    if d2 <= 0.0 {
        return p1;
    }
    let x = 0.5 * (x0 + x1) - d01 / (2.0 * d2);
    let y = y0 + d01 * (x - x0) + d2 * (x - x0) * (x - x1);
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{synthesize, SpatialGrid, SystemConfig};
    use std::f64::consts::PI;

    fn basis(k: usize) -> Arc<EnergyBasis> {
        EnergyBasis::shared(SystemConfig::atomic(0.01).unwrap(), k).unwrap()
    }

    fn random_state(b: &Arc<EnergyBasis>, seed: u64) -> WaveFunction {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = (0..b.dim())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        WaveFunction::new(b.clone(), c).unwrap().normalized().unwrap()
    }

    #[test]
    fn evolution_basics() {
        let b = basis(8);
        let wf = random_state(&b, 3);
        assert_eq!(evolve(&wf, 0.0).coeffs(), wf.coeffs());
        let fwd = evolve(&wf, 0.37);
        assert!((fwd.norm() - 1.0).abs() < 1e-14);
        let back = evolve(&fwd, -0.37);
        for (a, c) in back.coeffs().iter().zip(wf.coeffs()) {
            assert!((a - c).norm() < 1e-13);
        }
    }

    #[test]
    fn single_basis_state_moments() {
        for k in [3, 200] {
            let b = basis(k);
            let wf = WaveFunction::basis_state(b.clone(), 1).unwrap();
            assert!(expectation_q(&wf).unwrap().abs() < 1e-15);
            assert!((variance_q(&wf).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn two_state_mean() {
        for k in [2, 100] {
            let b = basis(k);
            let mut c = vec![Complex64::new(0.0, 0.0); b.dim()];
            let s = 0.5f64.sqrt();
            c[b.index_of(0).unwrap()] = Complex64::new(s, 0.0);
            c[b.index_of(1).unwrap()] = Complex64::new(0.0, s);
            let wf = WaveFunction::new(b.clone(), c).unwrap();
            let m = expectation_q(&wf).unwrap();
            assert!((m + 1.0 / PI).abs() < 1e-14, "{m}");

            let grid = SpatialGrid::new(20001, 1.0).unwrap();
            let psi = synthesize(&wf, &grid);
            let dens: Vec<f64> = psi.iter().zip(grid.points()).map(|(z, q)| z.norm_sqr() * q).collect();
            assert!((grid.trapezoid(&dens) - m).abs() < 1e-6);
        }
    }

    #[test]
    fn fft_and_direct_agree() {
        let b = basis(120);
        let wf = random_state(&b, 11);
        let obs = PositionObservables::new(b.clone());
        assert!(obs.fft.is_some());
        let (m_fft, s_fft, _) = obs.raw_moments(&wf);
        let c = wf.coeffs();
        let mut m = Complex64::new(0.0, 0.0);
        let mut s = Complex64::new(0.0, 0.0);
        for (i, ki) in b.ks().enumerate() {
            for (j, kj) in b.ks().enumerate() {
                m += c[i].conj() * c[j] * position_element_by_offset(kj - ki, 1.0);
                s += c[i].conj() * c[j] * position_sq_element_by_offset(kj - ki, 1.0);
            }
        }
        assert!(m.im.abs() < 1e-12 && s.im.abs() < 1e-12);
        assert!((m.re - m_fft).abs() < 1e-13);
        assert!((s.re - s_fft).abs() < 1e-13);
    }

    #[test]
    fn variance_matches_grid_quadrature() {
        let b = basis(24);
        let wf = random_state(&b, 5);
        let grid = SpatialGrid::new(2001, 1.0).unwrap();
        for t in [0.0, 0.013, 0.2] {
            let psi = evolve(&wf, t);
            let dens: Vec<f64> = synthesize(&psi, &grid).iter().map(|z| z.norm_sqr()).collect();
            let q = grid.points();
            let m1 = grid.trapezoid(&dens.iter().zip(q).map(|(d, x)| d * x).collect::<Vec<_>>());
            let m2 = grid.trapezoid(&dens.iter().zip(q).map(|(d, x)| d * x * x).collect::<Vec<_>>());
            let var_grid = m2 - m1 * m1;
            assert!((variance_q(&psi).unwrap() - var_grid).abs() < 1e-6);
        }
    }

    #[test]
    fn unnormalized_rejected() {
        let b = basis(4);
        let c = vec![Complex64::new(1.0, 0.0); b.dim()];
        let wf = WaveFunction::new(b, c).unwrap();
        assert!(expectation_q(&wf).is_err());
        assert!(trajectory(&wf, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn stationary_trajectory() {
        let b = basis(16);
        let wf = WaveFunction::basis_state(b, -2).unwrap();
        let traj = trajectory(&wf, &linspace(0.0, 1.0, 50)).unwrap();
        let v0 = traj.var_q[0];
        assert!(traj.var_q.iter().all(|v| (v - v0).abs() < 1e-12));
        assert!(traj.mean_q.iter().all(|m| m.abs() < 1e-12));
        assert!(variance_minimum_time(&traj).unwrap().is_none());
        assert!(traj.max_norm_drift() < 1e-12);
    }

    #[test]
    fn sampling_rule_warning() {
        let b = basis(16);
        let wf = random_state(&b, 1);
        let traj = trajectory(&wf, &linspace(0.0, 1.0, 11)).unwrap();
        assert_eq!(traj.warnings.len(), 1);
        let dt = 0.5 * sampling_step_limit(&wf);
        let traj = trajectory(&wf, &linspace(0.0, 10.0 * dt, 11)).unwrap();
        assert!(traj.warnings.is_empty());
    }

    #[test]
    fn time_reversal_mirror() {
        let b = basis(10);
        let wf = random_state(&b, 2);
        let conj = WaveFunction::new(b.clone(), wf.coeffs().iter().map(|c| c.conj()).collect()).unwrap();
        let ts = linspace(0.0, 0.3, 31);
        let neg: Vec<f64> = ts.iter().rev().map(|t| -t).collect();
        let fwd = trajectory(&wf, &ts).unwrap();
        let bwd = trajectory(&conj, &neg).unwrap();
        for i in 0..ts.len() {
            let j = ts.len() - 1 - i;
            // the conjugated state is the q → −q image of the time-reversed one
            assert!((fwd.var_q[i] - bwd.var_q[j]).abs() < 1e-10);
            assert!((fwd.mean_q[i] + bwd.mean_q[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn parabola_refinement_is_exact() {
        let times = linspace(0.0, 1.0, 11);
        let var_q: Vec<f64> = times.iter().map(|t| (t - 0.3f64).powi(2) + 0.1).collect();
        let traj = Trajectory {
            norm: vec![1.0; times.len()],
            mean_q: vec![0.0; times.len()],
            times,
            var_q,
            warnings: vec![],
        };
        let m = variance_minimum_time(&traj).unwrap().unwrap();
        assert!((m.t_min - 0.3).abs() < 1e-14 && (m.var_min - 0.1).abs() < 1e-14);
        assert!(!m.at_edge);

        let times = linspace(0.0, 1.0, 11);
        let shifted = Trajectory {
            var_q: times.iter().map(|t| (t - 0.37f64).powi(2) + 0.1).collect(),
            ..traj.clone()
        };
        let m = variance_minimum_time(&shifted).unwrap().unwrap();
        assert!((m.t_min - 0.37).abs() < 1e-13);

        let edge = Trajectory {
            var_q: times.clone(),
            ..traj
        };
        assert!(variance_minimum_time(&edge).unwrap().unwrap().at_edge);
    }
}
