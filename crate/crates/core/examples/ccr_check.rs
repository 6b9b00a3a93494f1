//! Commutator defects on canonical-domain samples: exact for the CTO,
//! shrinking with K for the CTOA.

use std::sync::Arc;

use chronos::experiments::spectra::operator_matrix;
use chronos::operators::{canonical_domain_sample, ccr_defect, OperatorKind};
use chronos::{EnergyBasis, SystemConfig};

fn main() -> chronos::Result<()> {
    let cfg = SystemConfig::atomic(0.3)?;
    for (kind, k) in [(OperatorKind::CtoPtt, 64), (OperatorKind::CtoaTat, 64), (OperatorKind::CtoaTat, 128)] {
        let basis: Arc<EnergyBasis> = EnergyBasis::shared(cfg, k)?;
        let t = operator_matrix(kind, &basis)?;
        let worst = (0..10)
            .map(|seed| {
                let wf = canonical_domain_sample(kind, &basis, seed)?;
                ccr_defect(&t, &basis, &wf, kind)
            })
            .collect::<chronos::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("{:<5} K = {k:<4} max defect {worst:.3e}", kind.tag());
    }
    Ok(())
}
