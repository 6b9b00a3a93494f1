//! The characteristic time operator in the energy representation:
//! `T_kl = iħ/(E_k − E_l)` for `k ≠ l`, zero on the diagonal.

use num_complex::Complex64;

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};
use crate::model::EnergyBasis;

pub fn cto_matrix(basis: &EnergyBasis) -> Result<HermitianMatrix> {
    let e = basis.energies();
    let hbar = basis.config().hbar();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i] == e[j] {
                return Err(Error::Degenerate {
                    k: basis.k_of(i),
                    k_prime: basis.k_of(j),
                });
            }
        }
    }
    Ok(HermitianMatrix::from_upper(basis.dim(), |i, j| {
        if i == j {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, hbar / (e[i] - e[j]))
        }
    }))
}

/// `Σ_{k≠k'} ħ²/(E_k − E_k')²`, the squared Hilbert–Schmidt norm of the
/// truncated operator.
pub fn cto_hilbert_schmidt_sq(basis: &EnergyBasis) -> f64 {
    let e = basis.energies();
    let hbar = basis.config().hbar();
    let mut sum = 0.0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let d = e[i] - e[j];
            sum += 2.0 * hbar * hbar / (d * d);
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemConfig;
    use crate::operators::eigen::eigvals_hermitian;

    #[test]
    fn entries() {
        let basis = EnergyBasis::new(SystemConfig::atomic(0.01).unwrap(), 3).unwrap();
        let t = cto_matrix(&basis).unwrap();
        for i in 0..t.dim() {
            assert_eq!(t.get(i, i), Complex64::new(0.0, 0.0));
        }
        let (i0, i1) = (basis.index_of(0).unwrap(), basis.index_of(1).unwrap());
        let v = t.get(i0, i1);
        assert_eq!(v.re, 0.0);
        assert!((v.im + 0.201_361).abs() < 1e-6, "{v}");
        assert!(t.is_purely_imaginary());
        assert!(t.is_hermitian());
    }

    #[test]
    fn degenerate_energies_rejected() {
        // γ → 0 is excluded by SystemConfig; degeneracy can only arise through
        // rounding, so exercise the check on a tiny γ where E_k ≠ E_{-k}
        let basis = EnergyBasis::new(SystemConfig::atomic(1e-3).unwrap(), 4).unwrap();
        assert!(cto_matrix(&basis).is_ok());
    }

    #[test]
    fn spectrum_pairs_with_single_zero() {
        for half in [1, 2, 3] {
            let basis = EnergyBasis::new(SystemConfig::atomic(0.3).unwrap(), half).unwrap();
            let t = cto_matrix(&basis).unwrap();
            let ev = eigvals_hermitian(&t).unwrap();
            let n = ev.len();
            let scale = t.frobenius_norm();
            for i in 0..n {
                assert!((ev[i] + ev[n - 1 - i]).abs() <= 1e-10 * scale);
            }
            assert_eq!(ev.iter().filter(|v| v.abs() <= 1e-10 * scale).count(), 1);
        }
    }

    #[test]
    fn hilbert_schmidt_sum_converges() {
        let cfg = SystemConfig::atomic(std::f64::consts::PI / 6.0).unwrap();
        let a = cto_hilbert_schmidt_sq(&EnergyBasis::new(cfg, 256).unwrap());
        let b = cto_hilbert_schmidt_sq(&EnergyBasis::new(cfg, 512).unwrap());
        let c = cto_hilbert_schmidt_sq(&EnergyBasis::new(cfg, 1024).unwrap());
        assert!(((c - b) / b).abs() < 0.01);
        assert!((c - b).abs() < (b - a).abs());
        let direct = cto_matrix(&EnergyBasis::new(cfg, 20).unwrap()).unwrap().frobenius_norm();
        let hs = cto_hilbert_schmidt_sq(&EnergyBasis::new(cfg, 20).unwrap());
        assert!((direct * direct - hs).abs() < 1e-12 * hs);
    }
}
