//! Forward and backward evolution of a CTO eigenfunction: variance and the
//! number of density maxima over time.

use chronos::dynamics::{density_field, linspace, trajectory};
use chronos::experiments::analysis::variance_depth;
use chronos::experiments::Spectrum;
use chronos::operators::OperatorKind;
use chronos::{SpatialGrid, SystemConfig};

fn main() -> chronos::Result<()> {
    let cfg = SystemConfig::atomic(0.01)?;
    let spectrum = Spectrum::compute(OperatorKind::CtoPtt, cfg, 512, None)?;
    let idx = spectrum.select_target(0.03521, 1e-3)?;
    let tau = spectrum.eigenvalues()[idx];
    let wf = spectrum.state(idx);
    let grid = SpatialGrid::new(401, cfg.l())?;

    for (label, lo, hi) in [("forward", 0.0, 2.0 * tau), ("backward", -2.0 * tau, 0.0)] {
        let traj = trajectory(&wf, &linspace(lo, hi, 401))?;
        let center = if lo < 0.0 { -tau } else { tau };
        println!("{label}: variance depth near ±τ = {:.3}", variance_depth(&traj, center, 0.25 * tau));
        let slices = linspace(lo, hi, 9);
        let counts = density_field(&wf, &slices, &grid)?.peak_counts(0.05);
        for (t, c) in slices.iter().zip(counts) {
            println!("  t = {t:+.4}  maxima = {c}");
        }
    }
    Ok(())
}
