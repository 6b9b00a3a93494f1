//! Positive roots of the CTOA characteristic function
//! `F(x) = J_{-3/4}(x) J_{-1/4}(x) - cot²γ J_{3/4}(x) J_{1/4}(x)`.

use std::io::Write;

use super::bessel::{bessel_j, bessel_j_unchecked};
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::output::fmt_f64;

/// Linear scan step once past the small-x region.
pub const SCAN_STEP: f64 = 0.05;
const GEOMETRIC_RATIO: f64 = 1.05;

pub fn ctoa_characteristic(x: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!("gamma = {gamma} outside (0, π/2)")));
    }
    bessel_j(0.25, x)?;
    Ok(characteristic_parts(x, cot_sq(gamma)).0)
}

fn cot_sq(gamma: f64) -> f64 {
    let c = gamma.tan().recip();
    c * c
}

/// `(F(x), (1 + cot²γ)·2/(πx))`. The second entry bounds the size of either
/// Bessel product up to an O(1) factor, so it sets the scale on which `F`
/// is evaluated.
fn characteristic_parts(x: f64, cot2: f64) -> (f64, f64) {
    let a = bessel_j_unchecked(-0.75, x) * bessel_j_unchecked(-0.25, x);
    let b = cot2 * bessel_j_unchecked(0.75, x) * bessel_j_unchecked(0.25, x);
    (a - b, (1.0 + cot2) * 2.0 / (std::f64::consts::PI * x))
}

/// Ordered positive roots of `F` for one γ.
#[derive(Debug, Clone, PartialEq)]
pub struct RootTable {
    pub gamma: f64,
    pub roots: Vec<f64>,
    /// |F(r_n)|.
    pub residuals: Vec<f64>,
    /// Envelope `(1 + cot²γ)·2/(π r_n)` of `F` near each root; residuals are
    /// judged relative to this.
    pub scales: Vec<f64>,
}

impl RootTable {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// 1-based lookup.
    pub fn root(&self, n: usize) -> Result<f64> {
        n.checked_sub(1)
            .and_then(|i| self.roots.get(i).copied())
            .ok_or(Error::MissingRoot(n))
    }

    /// Positive CTOA eigenvalues `μl²/(4ħ r_n)`, descending.
    pub fn taus(&self, cfg: &SystemConfig) -> Vec<f64> {
        self.roots
            .iter()
            .map(|&r| crate::operators::ctoa_eigenvalue_from_root(r, cfg))
            .collect()
    }

    /// CSV with columns `n,r_n,tau_n,residual`.
    pub fn write_csv<W: Write>(&self, cfg: &SystemConfig, mut w: W) -> Result<()> {
        writeln!(w, "n,r_n,tau_n,residual")?;
        for (i, (r, res)) in self.roots.iter().zip(&self.residuals).enumerate() {
            let tau = crate::operators::ctoa_eigenvalue_from_root(*r, cfg);
            writeln!(w, "{},{},{},{}", i + 1, fmt_f64(*r), fmt_f64(tau), fmt_f64(*res))?;
        }
        Ok(())
    }
}

/// Scan abscissae: geometric from well below the small-x root
/// (`x ≈ 0.87 tan γ`) up to [`SCAN_STEP`], then uniform.
fn scan_points(gamma: f64, x_max: f64) -> Vec<f64> {
    let mut xs = Vec::new();
    let mut x = (1e-3 * gamma.tan()).min(1e-3);
    while x < SCAN_STEP {
        xs.push(x);
        x *= GEOMETRIC_RATIO;
    }
    let mut i = 1usize;
    loop {
        let x = SCAN_STEP * i as f64;
        if x > x_max {
            break;
        }
        xs.push(x);
        i += 1;
    }
    if xs.last().is_some_and(|&l| l < x_max) {
        xs.push(x_max);
    }
    xs
}

/// First `count` positive roots below `x_max`, by scan-and-bracket and
/// bisection down to floating-point resolution.
pub fn find_ctoa_roots(gamma: f64, count: usize, x_max: f64) -> Result<RootTable> {
    if count == 0 {
        return Err(Error::Input("root count must be ≥ 1".into()));
    }
    if !(gamma > 0.0 && gamma < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!("gamma = {gamma} outside (0, π/2)")));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(Error::Input(format!("x_max must be positive, got {x_max}")));
    }
    let cot2 = cot_sq(gamma);
    let f = |x: f64| characteristic_parts(x, cot2).0;

    let xs = scan_points(gamma, x_max);
    let mut roots = Vec::with_capacity(count);
    let mut prev_x = xs[0];
    let mut prev_f = f(prev_x);
    for &x in &xs[1..] {
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && (prev_f < 0.0) != (fx < 0.0) {
            roots.push(bisect(&f, prev_x, x, prev_f));
        }
        if roots.len() == count {
            break;
        }
        prev_x = x;
        prev_f = fx;
    }
    if roots.len() < count {
        return Err(Error::InsufficientRange {
            requested: count,
            found: roots.len(),
            x_max,
        });
    }
    let (residuals, scales) = roots
        .iter()
        .map(|&r| {
            let (v, s) = characteristic_parts(r, cot2);
            (v.abs(), s)
        })
        .unzip();
    Ok(RootTable {
        gamma,
        roots,
        residuals,
        scales,
    })
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    // pick the endpoint with the smaller residual
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

/// Number of sign changes of `F` on a uniform grid of spacing `step` over
/// `(0, x]`. Independent brute-force count used to validate root tables.
pub fn count_sign_changes(gamma: f64, x: f64, step: f64) -> usize {
    let cot2 = cot_sq(gamma);
    let n = (x / step).floor() as usize;
    let mut count = 0;
    let mut prev = characteristic_parts(step, cot2).0;
    for i in 2..=n {
        let v = characteristic_parts(step * i as f64, cot2).0;
        if (v < 0.0) != (prev < 0.0) {
            count += 1;
        }
        prev = v;
    }
    count
}
