//! CTOA transition peaks in both time directions stay small and do not
//! follow the eigenvalue gap.

use chronos::experiments::{transition_scan, Direction, Spectrum};
use chronos::operators::OperatorKind;
use chronos::SystemConfig;

fn main() -> chronos::Result<()> {
    let cfg = SystemConfig::atomic(0.01)?;
    let spectrum = Spectrum::compute(OperatorKind::CtoaTat, cfg, 256, None)?;
    let pairs: Vec<_> = (1..=10).map(|n| (n, n + 1)).collect();
    for direction in [Direction::Forward, Direction::Backward] {
        println!("{direction:?}");
        for r in transition_scan(&spectrum, &pairs, direction)?.rows {
            println!("  ({:>2},{:>2})  Δτ = {:+.5}  t_max = {:+.5}  p_max = {:.4}", r.n, r.n_prime, r.delta_tau, r.t_max, r.p_max);
        }
    }
    Ok(())
}
