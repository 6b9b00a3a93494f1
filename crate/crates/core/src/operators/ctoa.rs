//! The confined time-of-arrival operator.
//!
//! Kernel:
//! `⟨q|T|q'⟩ = -μ(q+q') [e^{iγ} H(q-q') + e^{-iγ} H(q'-q)] / (4ħ sin γ)`
//! with `H(0) = 1/2`.
//!
//! Energy-basis matrix elements are obtained by integrating the kernel
//! against `conj(φ_k(q)) φ_k'(q')` in closed form. Writing `G` for the
//! integral over the full square and `I_>` for the triangle `q' < q`,
//! `T_kk' = C/(2l) [e^{-iγ} G + 2i sin γ I_>]`, `C = -μ/(4ħ sin γ)`; the
//! `1/sin γ` in `C` cancels against `G ∝ sin γ` off the diagonal.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};
use crate::model::{check_in_interval, EnergyBasis, SystemConfig};
use crate::quadrature::QuadratureSpec;
use crate::specfun::bessel::{bessel_j_reduced, bessel_j_unchecked};
use crate::specfun::RootTable;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn ctoa_kernel(q: f64, q_prime: f64, cfg: &SystemConfig) -> Result<Complex64> {
    check_in_interval(q, cfg)?;
    check_in_interval(q_prime, cfg)?;
    Ok(kernel_unchecked(q, q_prime, cfg))
}

fn kernel_unchecked(q: f64, q_prime: f64, cfg: &SystemConfig) -> Complex64 {
    let g = cfg.gamma();
    let pre = -cfg.mu() * (q + q_prime) / (4.0 * cfg.hbar() * g.sin());
    let weight = if q > q_prime {
        Complex64::from_polar(1.0, g)
    } else if q < q_prime {
        Complex64::from_polar(1.0, -g)
    } else {
        Complex64::new(g.cos(), 0.0)
    };
    weight * pre
}

/// `∫_{-l}^{l} e^{ict} dt`.
fn moment0(c: f64, l: f64) -> Complex64 {
    let u = c * l;
    if u == 0.0 {
        return Complex64::new(2.0 * l, 0.0);
    }
    Complex64::new(2.0 * u.sin() / c, 0.0)
}

/// `∫_{-l}^{l} t e^{ict} dt = 2i l² (sin u − u cos u)/u²`, `u = cl`.
fn moment1(c: f64, l: f64) -> Complex64 {
    let u = c * l;
    let g = if u.abs() < 0.5 {
        // Σ_{j≥1} (-1)^{j+1} 2j u^{2j-1} / (2j+1)!
        let u2 = u * u;
        let mut term = u / 3.0;
        let mut sum = term;
        for j in 2..16 {
            let jf = j as f64;
            term *= -u2 * jf / ((jf - 1.0) * (2.0 * jf) * (2.0 * jf + 1.0));
            sum += term;
        }
        sum
    } else {
        (u.sin() - u * u.cos()) / (u * u)
    };
    I * (2.0 * l * l * g)
}

/// `⟨φ_k|T|φ_k'⟩` in closed form.
pub fn ctoa_matrix_element(k: i64, k_prime: i64, cfg: &SystemConfig) -> Complex64 {
    // The triangle formula divides by the wave number of the ket; use the
    // orientation with the larger one and conjugate back.
    let a = cfg.wave_number(k);
    let b = cfg.wave_number(k_prime);
    if b.abs() < a.abs() {
        return element_closed_form(k_prime, k, cfg).conj();
    }
    element_closed_form(k, k_prime, cfg)
}

fn element_closed_form(k: i64, k_prime: i64, cfg: &SystemConfig) -> Complex64 {
    let l = cfg.l();
    let g = cfg.gamma();
    let a = cfg.wave_number(k);
    let b = cfg.wave_number(k_prime);
    let d = b - a;

    let ib = I * b;
    let b2 = b * b;
    let e_minus = Complex64::from_polar(1.0, -b * l);
    let i_lower = moment1(d, l) * 2.0 / ib
        + moment0(d, l) / b2
        + e_minus * (-moment1(-a, l) / ib + moment0(-a, l) * (Complex64::new(l, 0.0) / ib - 1.0 / b2));
    let full = moment1(-a, l) * moment0(b, l) + moment0(-a, l) * moment1(b, l);

    let c = -cfg.mu() / (4.0 * cfg.hbar() * g.sin());
    let phase = Complex64::from_polar(1.0, -g);
    (phase * full * c + i_lower * (I * (-cfg.mu() / (2.0 * cfg.hbar())))) / (2.0 * l)
}

/// Independent route: tensor Gauss–Legendre over the two triangles on which
/// the kernel is smooth.
pub fn ctoa_matrix_element_quadrature(k: i64, k_prime: i64, cfg: &SystemConfig, panels: usize) -> Complex64 {
    let l = cfg.l();
    let a = cfg.wave_number(k);
    let b = cfg.wave_number(k_prime);
    let outer = QuadratureSpec::new(32, panels).rule(-l, l);
    let inner = QuadratureSpec::new(32, panels);
    let g = cfg.gamma();
    let lower_w = Complex64::from_polar(1.0, g);
    let upper_w = Complex64::from_polar(1.0, -g);
    let mut total = Complex64::new(0.0, 0.0);
    for (&q, &wq) in outer.nodes.iter().zip(&outer.weights) {
        let bra = Complex64::from_polar(1.0, -a * q);
        let below = inner.rule(-l, q).integrate(|qp| Complex64::from_polar(1.0, b * qp) * (q + qp));
        let above = inner.rule(q, l).integrate(|qp| Complex64::from_polar(1.0, b * qp) * (q + qp));
        total += bra * (lower_w * below + upper_w * above) * wq;
    }
    let c = -cfg.mu() / (4.0 * cfg.hbar() * g.sin());
    total * c / (2.0 * l)
}

/// Truncated CTOA matrix over the basis window.
pub fn ctoa_matrix(basis: &EnergyBasis) -> HermitianMatrix {
    let cfg = basis.config();
    HermitianMatrix::from_upper(basis.dim(), |i, j| {
        ctoa_matrix_element(basis.k_of(i), basis.k_of(j), cfg)
    })
}

/// `τ = μl²/(4ħr)`; the caller attaches the sign.
pub fn ctoa_eigenvalue_from_root(r: f64, cfg: &SystemConfig) -> f64 {
    cfg.mu() * cfg.l() * cfg.l() / (4.0 * cfg.hbar() * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Unnormalized eigenfunction `φ^±_n(q)` built from the n-th root (1-based).
///
/// With `x = r q²/l²`, `J^∓_{ν,ρ}(x) = (4x)^ν (J_{-ν}(x) ∓ i J_ρ(x))`:
/// `φ^± = e^{∓ix} [J^∓_{3/4,1/4}(x) A ± (2q√r/l) J^∓_{1/4,3/4}(x) B]`,
/// `A = J_{-1/4}(r) − cot γ J_{3/4}(r)`, `B = J_{-3/4}(r) − cot γ J_{1/4}(r)`.
pub fn ctoa_eigenfunction_analytic(
    n: usize,
    sign: Sign,
    q: f64,
    cfg: &SystemConfig,
    roots: &RootTable,
) -> Result<Complex64> {
    check_in_interval(q, cfg)?;
    let r = roots.root(n)?;
    Ok(analytic_unchecked(r, sign, q, cfg))
}

fn analytic_unchecked(r: f64, sign: Sign, q: f64, cfg: &SystemConfig) -> Complex64 {
    let l = cfg.l();
    let s = sign.value();
    let cot = cfg.gamma().tan().recip();
    let coef_a = bessel_j_unchecked(-0.25, r) - cot * bessel_j_unchecked(0.75, r);
    let coef_b = bessel_j_unchecked(-0.75, r) - cot * bessel_j_unchecked(0.25, r);
    let x = r * q * q / (l * l);
    let first = paired_bessel(0.75, 0.25, x, s);
    let second = paired_bessel(0.25, 0.75, x, s);
    let odd = s * 2.0 * q * r.sqrt() / l;
    Complex64::from_polar(1.0, -s * x) * (first * coef_a + second * (odd * coef_b))
}

/// `(4x)^ν (J_{-ν}(x) − s i J_ρ(x))`, using the reduced series so that
/// `x = 0` is regular: `(4x)^ν J_{-ν}(x) = 8^ν J_{-ν}(x)/(x/2)^{-ν}`.
fn paired_bessel(nu: f64, rho: f64, x: f64, s: f64) -> Complex64 {
    let regular = 8f64.powf(nu) * bessel_j_reduced(-nu, x).unwrap_or(f64::NAN);
    let singular_free = if x == 0.0 {
        0.0
    } else {
        (4.0 * x).powf(nu) * (0.5 * x).powf(rho) * bessel_j_reduced(rho, x).unwrap_or(f64::NAN)
    };
    Complex64::new(regular, -s * singular_free)
}

/// Normalized analytic CTOA eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticCtoaEigenfunction {
    pub n: usize,
    pub sign: Sign,
    pub root: f64,
    pub config: SystemConfig,
    /// Multiplier turning the displayed formula into a unit vector.
    pub normalization: f64,
}

impl AnalyticCtoaEigenfunction {
    pub fn new(n: usize, sign: Sign, cfg: &SystemConfig, roots: &RootTable) -> Result<Self> {
        let root = roots.root(n)?;
        if (roots.gamma - cfg.gamma()).abs() > 1e-15 {
            return Err(Error::Input(format!(
                "root table built for γ = {}, config has γ = {}",
                roots.gamma,
                cfg.gamma()
            )));
        }
        let rule = Self::quadrature(root, cfg).rule(-cfg.l(), cfg.l());
        let norm_sq = rule.integrate(|q| analytic_unchecked(root, sign, q, cfg).norm_sqr());
        Ok(Self {
            n,
            sign,
            root,
            config: *cfg,
            normalization: norm_sq.sqrt().recip(),
        })
    }

    /// Panel rule resolving both the chirp `e^{∓ir q²/l²}` and the Bessel
    /// oscillations in `r q²/l²`.
    pub fn quadrature(root: f64, cfg: &SystemConfig) -> QuadratureSpec {
        let omega = 4.0 * root / cfg.l() + PI / cfg.l();
        QuadratureSpec::for_frequency(omega, 2.0 * cfg.l(), 16.0)
    }

    pub fn eigenvalue(&self) -> f64 {
        self.sign.value() * ctoa_eigenvalue_from_root(self.root, &self.config)
    }

    pub fn eval(&self, q: f64) -> Complex64 {
        analytic_unchecked(self.root, self.sign, q, &self.config) * self.normalization
    }

    /// Projection onto an energy basis with a rule fine enough for both the
    /// eigenfunction and the basis.
    pub fn project(&self, basis: &Arc<EnergyBasis>) -> Result<crate::model::Projection> {
        let a = Self::quadrature(self.root, &self.config);
        let b = basis.default_quadrature();
        let spec = QuadratureSpec::new(32, a.panels.max(b.panels));
        crate::model::project_function(|q| self.eval(q), basis, spec)
    }
}
