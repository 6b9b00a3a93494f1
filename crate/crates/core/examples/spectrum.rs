//! CTOA eigenvalues two ways (truncated matrix and Bessel roots), and the
//! ±τ pairing of the CTO spectrum.

use chronos::experiments::analysis::{ctoa_cross_check, spectral_pairing_error};
use chronos::experiments::Spectrum;
use chronos::operators::OperatorKind;
use chronos::SystemConfig;

fn main() -> chronos::Result<()> {
    let cfg = SystemConfig::atomic(std::f64::consts::PI / 6.0)?;
    let ctoa = Spectrum::compute(OperatorKind::CtoaTat, cfg, 128, None)?;
    println!("{:>3} {:>14} {:>14} {:>10}", "n", "roots", "matrix", "rel");
    for (n, (r, m)) in ctoa_cross_check(cfg, &ctoa, 8)?.into_iter().enumerate() {
        println!("{:>3} {r:>14.8} {m:>14.8} {:>10.2e}", n + 1, ((m - r) / r).abs());
    }

    let cto = Spectrum::compute(OperatorKind::CtoPtt, cfg, 128, None)?;
    let top = cto.positive_descending();
    println!("CTO: τ_1 = {:.6}, τ_2 = {:.6}, pairing error {:.1e}", top[0], top[1], spectral_pairing_error(cto.eigenvalues()));
    Ok(())
}
