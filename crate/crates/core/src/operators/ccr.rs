//! Time–energy commutation relation checks.
//!
//! Sign conventions: a passage-time-type operator obeys `[T,H] = iħ` on its
//! canonical domain, a time-of-arrival-type one obeys `[H,T] = iħ`. The CTO
//! is of the first kind and the CTOA of the second, so written uniformly as
//! `[T,H]ψ = iħ s ψ` we have `s = +1` for the CTO and `s = −1` for the CTOA.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};
use crate::model::{project_function, EnergyBasis, WaveFunction};
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    /// Confined time-of-arrival operator.
    #[serde(rename = "CTOA")]
    CtoaTat,
    /// Characteristic time operator.
    #[serde(rename = "CTO")]
    CtoPtt,
}

impl OperatorKind {
    pub fn ccr_sign(self) -> f64 {
        match self {
            OperatorKind::CtoaTat => -1.0,
            OperatorKind::CtoPtt => 1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            OperatorKind::CtoaTat => "CTOA",
            OperatorKind::CtoPtt => "CTO",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "CTOA" => Some(OperatorKind::CtoaTat),
            "CTO" => Some(OperatorKind::CtoPtt),
            _ => None,
        }
    }
}

/// `‖[T,H]ψ − iħ s ψ‖ / ‖ψ‖` with `H` diagonal in the energy basis.
pub fn ccr_defect(t: &HermitianMatrix, basis: &EnergyBasis, wf: &WaveFunction, kind: OperatorKind) -> Result<f64> {
    if t.dim() != basis.dim() || wf.basis().dim() != basis.dim() {
        return Err(Error::Input(format!(
            "dimension mismatch: operator {}, basis {}, state {}",
            t.dim(),
            basis.dim(),
            wf.basis().dim()
        )));
    }
    let norm = wf.norm();
    if norm == 0.0 {
        return Err(Error::Input("commutator defect of the zero vector is undefined".into()));
    }
    let e = basis.energies();
    let psi = wf.coeffs();
    let h_psi: Vec<Complex64> = psi.iter().zip(e).map(|(c, &ek)| c * ek).collect();
    let t_h_psi = t.matvec(&h_psi);
    let t_psi = t.matvec(psi);
    let target = Complex64::new(0.0, basis.config().hbar() * kind.ccr_sign());
    let defect_sq: f64 = (0..psi.len())
        .map(|k| (t_h_psi[k] - e[k] * t_psi[k] - target * psi[k]).norm_sqr())
        .sum();
    Ok(defect_sq.sqrt() / norm)
}

/// A normalized pseudo-random state in the operator's canonical domain.
///
/// CTO: random coefficients with zero sum. CTOA: the projection of
/// `(l²−q²)² p(q) − c (l²−q²)³` with `p` a random cubic and `c` fixing the
/// integral to zero, so the function, its derivative at `±l`, and its mean
/// all vanish.
pub fn canonical_domain_sample(kind: OperatorKind, basis: &Arc<EnergyBasis>, seed: u64) -> Result<WaveFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        OperatorKind::CtoPtt => {
            let mut c: Vec<Complex64> = (0..basis.dim())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let mean = c.iter().sum::<Complex64>() / c.len() as f64;
            c.iter_mut().for_each(|z| *z -= mean);
            WaveFunction::new(basis.clone(), c)?.normalized()
        }
        OperatorKind::CtoaTat => {
            let l = basis.config().l();
            let p: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let shape = ctoa_domain_function(p, l);
            let spec = basis.default_quadrature();
            project_function(|q| Complex64::new(shape(q), 0.0), basis, spec)?
                .wavefunction
                .normalized()
        }
    }
}

/// `(l²−q²)² p(q) − c (l²−q²)³` with zero integral over `[−l, l]`.
pub fn ctoa_domain_function(p: [f64; 4], l: f64) -> impl Fn(f64) -> f64 {
    let poly = move |q: f64| ((p[3] * q + p[2]) * q + p[1]) * q + p[0];
    // degree ≤ 7 integrands: an 8-point rule is exact
    let (x, w) = gauss_legendre(8);
    let mut num = 0.0;
    let mut den = 0.0;
    for (&xi, &wi) in x.iter().zip(&w) {
        let q = l * xi;
        let b = l * l - q * q;
        num += wi * b * b * poly(q);
        den += wi * b * b * b;
    }
    let c = num / den;
    move |q: f64| {
        let b = l * l - q * q;
        b * b * (poly(q) - c * b)
    }
}
