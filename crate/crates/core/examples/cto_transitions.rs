//! Peak times of CTO transition probabilities track the eigenvalue gap.

use chronos::experiments::{scan_fit, transition_scan, Direction, Spectrum};
use chronos::operators::OperatorKind;
use chronos::SystemConfig;

fn main() -> chronos::Result<()> {
    let cfg = SystemConfig::atomic(std::f64::consts::PI / 6.0)?;
    let spectrum = Spectrum::compute(OperatorKind::CtoPtt, cfg, 256, None)?;

    for (lo, hi) in [(2, 7), (60, 70)] {
        let pairs: Vec<_> = (lo..=hi).map(|n| (n, n - 1)).collect();
        let scan = transition_scan(&spectrum, &pairs, Direction::Forward)?;
        for r in &scan.rows {
            println!("({:>3},{:>3})  Δτ = {:.6}  t_max = {:.6}  p_max = {:.4}", r.n, r.n_prime, r.delta_tau, r.t_max, r.p_max);
        }
        let fit = scan_fit(&scan)?;
        println!("n ∈ [{lo}, {hi}]: slope {:.4} ± {:.4}, r² = {:.5}\n", fit.slope, fit.slope_stderr, fit.r_squared);
    }
    Ok(())
}
