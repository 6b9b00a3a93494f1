//! The confined free particle on `[-l, l]` with twisted boundary condition
//! `φ(-l) = e^{-2iγ} φ(l)`: configuration, energy eigenbasis, states, and
//! position-operator matrix elements in that basis.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

/// Physical parameters. Defaults are atomic-style units `l = μ = ħ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    l: f64,
    mu: f64,
    hbar: f64,
    gamma: f64,
}

impl SystemConfig {
    pub fn new(l: f64, mu: f64, hbar: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("l", l), ("mu", mu), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, format!("must be positive, got {v}")));
            }
        }
        if !(gamma.is_finite() && gamma > 0.0 && gamma < FRAC_PI_2) {
            return Err(Error::config(
                "gamma",
                format!("must lie strictly inside (0, π/2), got {gamma}"),
            ));
        }
        Ok(Self { l, mu, hbar, gamma })
    }

    /// `l = μ = ħ = 1` with the given boundary phase.
    pub fn atomic(gamma: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, gamma)
    }

    pub fn l(&self) -> f64 {
        self.l
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Wave number `(γ + kπ)/l` of the k-th eigenfunction.
    pub fn wave_number(&self, k: i64) -> f64 {
        (self.gamma + k as f64 * PI) / self.l
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            l: 1.0,
            mu: 1.0,
            hbar: 1.0,
            gamma: 0.01,
        }
    }
}

pub fn momentum_eigenvalue(k: i64, cfg: &SystemConfig) -> f64 {
    cfg.hbar * cfg.wave_number(k)
}

/// `E_k = ħ²(γ + kπ)² / (2μl²)`.
pub fn energy_eigenvalue(k: i64, cfg: &SystemConfig) -> f64 {
    let p = momentum_eigenvalue(k, cfg);
    p * p / (2.0 * cfg.mu)
}

/// `φ_k(q) = (2l)^{-1/2} e^{i(γ+kπ)q/l}`.
pub fn basis_function_value(k: i64, q: f64, cfg: &SystemConfig) -> Result<Complex64> {
    check_in_interval(q, cfg)?;
    Ok(basis_function_unchecked(k, q, cfg))
}

#[inline]
pub(crate) fn basis_function_unchecked(k: i64, q: f64, cfg: &SystemConfig) -> Complex64 {
    Complex64::from_polar((2.0 * cfg.l).sqrt().recip(), cfg.wave_number(k) * q)
}

pub(crate) fn check_in_interval(q: f64, cfg: &SystemConfig) -> Result<()> {
    // one ulp of slack so grid endpoints built as -l + j*h are accepted
    let tol = 4.0 * f64::EPSILON * cfg.l;
    if !q.is_finite() || q < -cfg.l - tol || q > cfg.l + tol {
        return Err(Error::Domain(format!(
            "position {q} outside [-{l}, {l}]",
            l = cfg.l
        )));
    }
    Ok(())
}

/// `⟨φ_k| q̂ |φ_k'⟩`. Depends only on `m = k' - k`; the γ phases cancel.
pub fn position_matrix_element(k: i64, k_prime: i64, cfg: &SystemConfig) -> Complex64 {
    position_element_by_offset(k_prime - k, cfg.l)
}

/// `⟨φ_k| q̂² |φ_k'⟩`.
pub fn position_sq_matrix_element(k: i64, k_prime: i64, cfg: &SystemConfig) -> Complex64 {
    Complex64::new(position_sq_element_by_offset(k_prime - k, cfg.l), 0.0)
}

pub(crate) fn position_element_by_offset(m: i64, l: f64) -> Complex64 {
    if m == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(0.0, -l * sign / (m as f64 * PI))
}

pub(crate) fn position_sq_element_by_offset(m: i64, l: f64) -> f64 {
    if m == 0 {
        return l * l / 3.0;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let mf = m as f64;
    2.0 * sign * l * l / (mf * mf * PI * PI)
}

/// Truncated energy eigenbasis `k ∈ [-K, K]`, stored in ascending k.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBasis {
    config: SystemConfig,
    half_width: usize,
    momenta: Vec<f64>,
    energies: Vec<f64>,
}

impl EnergyBasis {
    pub fn new(config: SystemConfig, half_width: usize) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::config("K", "truncation half-width must be ≥ 1"));
        }
        let kk = half_width as i64;
        let momenta: Vec<f64> = (-kk..=kk).map(|k| momentum_eigenvalue(k, &config)).collect();
        let energies: Vec<f64> = (-kk..=kk).map(|k| energy_eigenvalue(k, &config)).collect();
        Ok(Self {
            config,
            half_width,
            momenta,
            energies,
        })
    }

    pub fn shared(config: SystemConfig, half_width: usize) -> Result<Arc<Self>> {
        Self::new(config, half_width).map(Arc::new)
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    /// The truncation half-width `K`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `N = 2K + 1`.
    pub fn dim(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn k_of(&self, index: usize) -> i64 {
        index as i64 - self.half_width as i64
    }

    pub fn index_of(&self, k: i64) -> Option<usize> {
        let i = k + self.half_width as i64;
        (0..self.dim() as i64).contains(&i).then_some(i as usize)
    }

    pub fn ks(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.dim()).map(|i| self.k_of(i))
    }

    /// Smallest |E_k - E_k'| over distinct pairs in the window.
    pub fn min_energy_gap(&self) -> f64 {
        let mut sorted = self.energies.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        sorted
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Quadrature with 32-node panels and at least 8 nodes per period of the
    /// fastest basis oscillation.
    pub fn default_quadrature(&self) -> QuadratureSpec {
        let omega = self.config.wave_number(self.half_width as i64).abs()
            + self.config.wave_number(-(self.half_width as i64)).abs();
        QuadratureSpec::for_frequency(0.5 * omega, 2.0 * self.config.l, 8.0)
    }
}

/// Complex coefficients over an [`EnergyBasis`], ascending in k.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    basis: Arc<EnergyBasis>,
    coeffs: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(basis: Arc<EnergyBasis>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != basis.dim() {
            return Err(Error::Input(format!(
                "{} coefficients for a basis of dimension {}",
                coeffs.len(),
                basis.dim()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Input("non-finite coefficient".into()));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn basis_state(basis: Arc<EnergyBasis>, k: i64) -> Result<Self> {
        let idx = basis
            .index_of(k)
            .ok_or_else(|| Error::Input(format!("k = {k} outside the truncation window")))?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.dim()];
        coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, coeffs })
    }

    pub fn zero(basis: Arc<EnergyBasis>) -> Self {
        let n = basis.dim();
        Self {
            basis,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn basis(&self) -> &Arc<EnergyBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Option<Complex64> {
        self.basis.index_of(k).map(|i| self.coeffs[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::Input("cannot normalize the zero vector".into()));
        }
        self.coeffs.iter_mut().for_each(|c| *c /= n);
        Ok(self)
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        self.check_same_basis(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn check_same_basis(&self, other: &WaveFunction) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis {
            Ok(())
        } else {
            Err(Error::Input("wave functions live on different bases".into()))
        }
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }
}

/// `M` uniformly spaced points on `[-l, l]`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    points: Vec<f64>,
}

impl SpatialGrid {
    pub const DEFAULT_POINTS: usize = 1001;

    pub fn new(points: usize, l: f64) -> Result<Self> {
        if points < 2 {
            return Err(Error::config("grid", "needs at least 2 points"));
        }
        let h = 2.0 * l / (points - 1) as f64;
        let mut q: Vec<f64> = (0..points).map(|j| -l + h * j as f64).collect();
        q[0] = -l;
        q[points - 1] = l;
        Ok(Self { points: q })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.points[1] - self.points[0]
    }

    /// Trapezoid rule over the grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        let h = self.spacing();
        let n = values.len();
        let inner: f64 = values[1..n - 1].iter().sum();
        h * (inner + 0.5 * (values[0] + values[n - 1]))
    }
}

/// Energy-basis projection together with a quadrature error estimate.
#[derive(Debug, Clone)]
pub struct Projection {
    pub wavefunction: WaveFunction,
    /// max_k |c_k(P) - c_k(2P)| against a rule with twice the panels.
    pub error_bound: f64,
}

/// `c_k = ∫ conj(φ_k(q)) f(q) dq` over the basis window.
pub fn project_function<F>(f: F, basis: &Arc<EnergyBasis>, quad: QuadratureSpec) -> Result<Projection>
where
    F: Fn(f64) -> Complex64,
{
    let coarse = project_with(&f, basis, quad)?;
    let fine = project_with(&f, basis, quad.refined())?;
    let error_bound = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(Projection {
        wavefunction: WaveFunction::new(basis.clone(), fine)?,
        error_bound,
    })
}

fn project_with<F>(f: &F, basis: &EnergyBasis, quad: QuadratureSpec) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    let cfg = basis.config();
    let l = cfg.l();
    let rule = quad.rule(-l, l);
    let samples: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&q, &w)| {
            let v = f(q);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v * w)
            } else {
                Err(Error::Input(format!("integrand is not finite at q = {q}")))
            }
        })
        .collect::<Result<_>>()?;
    let norm = (2.0 * l).sqrt().recip();
    Ok(basis
        .ks()
        .map(|k| {
            let kw = cfg.wave_number(k);
            let s: Complex64 = rule
                .nodes
                .iter()
                .zip(&samples)
                .map(|(&q, &fw)| Complex64::from_polar(1.0, -kw * q) * fw)
                .sum();
            s * norm
        })
        .collect())
}

/// `ψ(q_j) = Σ_k c_k φ_k(q_j)` on each grid point.
pub fn synthesize(wf: &WaveFunction, grid: &SpatialGrid) -> Vec<Complex64> {
    let basis = wf.basis();
    let cfg = basis.config();
    grid.points()
        .iter()
        .map(|&q| {
            basis
                .ks()
                .zip(wf.coeffs())
                .map(|(k, c)| c * basis_function_unchecked(k, q, cfg))
                .sum()
        })
        .collect()
}
