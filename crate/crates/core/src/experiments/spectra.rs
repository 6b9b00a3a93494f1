//! Diagonalized operators and eigenstate selection.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{EnergyBasis, SystemConfig, WaveFunction};
use crate::operators::{
    cto_matrix, ctoa_matrix, eig_hermitian, CacheStatus, EigenCache, EigenSystem, HermitianMatrix, OperatorKind,
};
use crate::specfun::{find_ctoa_roots, RootTable};

/// Operator matrix in the energy basis.
pub fn operator_matrix(kind: OperatorKind, basis: &EnergyBasis) -> Result<HermitianMatrix> {
    match kind {
        OperatorKind::CtoaTat => Ok(ctoa_matrix(basis)),
        OperatorKind::CtoPtt => cto_matrix(basis),
    }
}

/// A diagonalized truncated operator.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub kind: OperatorKind,
    pub basis: Arc<EnergyBasis>,
    pub system: EigenSystem,
    pub cache_status: Option<CacheStatus>,
}

impl Spectrum {
    pub fn compute(kind: OperatorKind, cfg: SystemConfig, half_width: usize, cache: Option<&EigenCache>) -> Result<Self> {
        let basis = EnergyBasis::shared(cfg, half_width)?;
        let solve = || eig_hermitian(&operator_matrix(kind, &basis)?);
        let (system, cache_status) = match cache {
            Some(c) => {
                let (s, st) = c.get_or_compute(kind, &cfg, half_width, solve)?;
                (s, Some(st))
            }
            None => (solve()?, None),
        };
        Ok(Self {
            kind,
            basis,
            system,
            cache_status,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.system.eigenvalues()
    }

    /// Number of strictly positive eigenvalues.
    pub fn positive_count(&self) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > 0.0).count()
    }

    /// Column index of the n-th largest positive eigenvalue (n ≥ 1).
    pub fn positive_index(&self, n: usize) -> Result<usize> {
        let count = self.positive_count();
        if n == 0 || n > count {
            return Err(Error::Input(format!("positive eigenvalue n = {n} not in 1..={count}")));
        }
        Ok(self.system.dim() - n)
    }

    /// n-th largest positive eigenvalue.
    pub fn tau(&self, n: usize) -> Result<f64> {
        Ok(self.eigenvalues()[self.positive_index(n)?])
    }

    /// Positive eigenvalues, largest first.
    pub fn positive_descending(&self) -> Vec<f64> {
        self.eigenvalues().iter().rev().take_while(|&&v| v > 0.0).copied().collect()
    }

    pub fn state(&self, index: usize) -> WaveFunction {
        WaveFunction::new(self.basis.clone(), self.system.eigenvector(index).to_vec())
            .expect("eigenvectors are finite and sized to the basis")
    }

    /// Eigenvalue nearest `target`, within `tolerance`.
    pub fn select_target(&self, target: f64, tolerance: f64) -> Result<usize> {
        let ev = self.eigenvalues();
        let mut order: Vec<usize> = (0..ev.len()).collect();
        order.sort_by(|&a, &b| (ev[a] - target).abs().total_cmp(&(ev[b] - target).abs()).then(a.cmp(&b)));
        let best = order[0];
        if (ev[best] - target).abs() <= tolerance {
            Ok(best)
        } else {
            Err(Error::Selection {
                target,
                tolerance,
                nearest: order.iter().take(5).map(|&i| ev[i]).collect(),
            })
        }
    }
}

/// The first `count` roots, widening the search range as needed.
pub fn roots_for(gamma: f64, count: usize) -> Result<RootTable> {
    let mut x_max = 10.0 + 4.0 * count as f64;
    loop {
        match find_ctoa_roots(gamma, count, x_max) {
            Err(Error::InsufficientRange { .. }) if x_max < 1e6 => x_max *= 2.0,
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_and_ordering() {
        let cfg = SystemConfig::atomic(0.3).unwrap();
        let s = Spectrum::compute(OperatorKind::CtoPtt, cfg, 4, None).unwrap();
        assert_eq!(s.positive_count(), 4);
        let taus = s.positive_descending();
        assert!(taus.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(s.tau(1).unwrap(), taus[0]);
        assert!(s.positive_index(5).is_err());
        let i = s.select_target(taus[2] + 1e-4, 1e-3).unwrap();
        assert_eq!(s.eigenvalues()[i], taus[2]);
        match s.select_target(100.0, 1e-3) {
            Err(Error::Selection { nearest, .. }) => assert_eq!(nearest.len(), 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn roots_widen() {
        let t = roots_for(0.4, 60).unwrap();
        assert_eq!(t.len(), 60);
    }
}
