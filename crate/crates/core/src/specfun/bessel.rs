//! Bessel functions of the first kind for real order and positive argument.
//!
//! Below [`SERIES_SWITCH`] the ascending series is summed in double-double
//! arithmetic so that the alternating cancellation near x ≈ 12 costs nothing;
//! above it the Hankel asymptotic expansion is used, truncated at its
//! smallest term.

use std::f64::consts::PI;

use super::gamma::recip_gamma;
use crate::error::{Error, Result};

pub const SERIES_SWITCH: f64 = 12.0;
const MIN_SERIES_TERMS: usize = 30;
const MAX_SERIES_TERMS: usize = 400;

/// Unevaluated sum `hi + lo` with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self { hi: s, lo: b - (s - a) }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Self {
            hi: p,
            lo: a.mul_add(b, -p),
        }
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        let t = Self::two_sum(self.lo, o.lo);
        let s = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(s.hi, s.lo + t.lo)
    }

    fn mul(self, o: Self) -> Self {
        let p = Self::two_prod(self.hi, o.hi);
        let lo = p.lo + (self.hi * o.lo + self.lo * o.hi);
        Self::quick_two_sum(p.hi, lo)
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let p = Self::two_prod(q1, d);
        let r = Self::two_sum(self.hi, -p.hi);
        let q2 = (r.hi + (r.lo - p.lo) + self.lo) / d;
        Self::quick_two_sum(q1, q2)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `J_ν(x)` for `x > 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j needs x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!("non-finite order {nu}")));
    }
    Ok(bessel_j_unchecked(nu, x))
}

pub(crate) fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if nu < 0.0 && nu == nu.floor() {
        // J_{-n} = (-1)^n J_n
        let n = -nu;
        let s = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return s * bessel_j_unchecked(n, x);
    }
    if x <= SERIES_SWITCH {
        bessel_j_series(nu, x)
    } else {
        bessel_j_asymptotic(nu, x)
    }
}

/// The entire function `J_ν(x) / (x/2)^ν`, finite at `x = 0`. For negative
/// non-integer ν this is the regular factor of the `x^{-|ν|}` singularity.
pub fn bessel_j_reduced(nu: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j_reduced needs x ≥ 0, got {x}")));
    }
    Ok(if x <= SERIES_SWITCH {
        series_sum(nu, x)
    } else {
        bessel_j_unchecked(nu, x) / (0.5 * x).powf(nu)
    })
}

pub fn bessel_j_series(nu: f64, x: f64) -> f64 {
    (0.5 * x).powf(nu) * series_sum(nu, x)
}

/// `Σ_m (-x²/4)^m / (m! Γ(m+ν+1))`.
fn series_sum(nu: f64, x: f64) -> f64 {
    let neg_quarter_sq = DoubleDouble::two_prod(0.5 * x, 0.5 * x).neg();
    // first non-vanishing term when ν+1 is a non-positive integer is handled
    // by the integer-order reflection in the caller
    let mut term = DoubleDouble::from_f64(recip_gamma(nu + 1.0));
    let mut sum = term;
    let mut m = 1usize;
    loop {
        let mf = m as f64;
        term = term.mul(neg_quarter_sq).div_f64(mf).div_f64(mf + nu);
        sum = sum.add(term);
        if m >= MIN_SERIES_TERMS && term.hi.abs() <= 1e-34 * sum.hi.abs().max(1e-300) {
            break;
        }
        if m >= MAX_SERIES_TERMS {
            break;
        }
        m += 1;
    }
    sum.to_f64()
}

/// Hankel expansion `√(2/πx) (P cos χ - Q sin χ)`, `χ = x - (ν/2 + 1/4)π`,
/// summed until the terms stop decreasing.
pub fn bessel_j_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    // a_k(ν)/x^k with a_k = Π_{j=1..k}(μ - (2j-1)²) / (k! 8^k)
    let mut term = 1.0;
    let mut prev_abs = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        let a = term.abs();
        if a > prev_abs || term == 0.0 {
            break;
        }
        prev_abs = a;
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if a < 1e-17 * p.abs().max(q.abs()).max(1e-300) {
            break;
        }
    }
    let phase = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// `J_ν'(x) = (J_{ν-1}(x) - J_{ν+1}(x)) / 2`.
pub fn bessel_j_derivative(nu: f64, x: f64) -> Result<f64> {
    Ok(0.5 * (bessel_j(nu - 1.0, x)? - bessel_j(nu + 1.0, x)?))
}
