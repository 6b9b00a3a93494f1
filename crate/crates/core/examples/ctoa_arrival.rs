//! An evolving CTOA eigenfunction narrows to its tightest spread around the
//! origin at t ≈ τ.

use chronos::experiments::analysis::{arrival, arrival_times};
use chronos::experiments::Spectrum;
use chronos::operators::OperatorKind;
use chronos::SystemConfig;

fn main() -> chronos::Result<()> {
    let cfg = SystemConfig::atomic(0.01)?;
    let spectrum = Spectrum::compute(OperatorKind::CtoaTat, cfg, 256, None)?;
    let idx = spectrum.select_target(0.02765, 1e-3)?;
    let tau = spectrum.eigenvalues()[idx];
    let (traj, summary) = arrival(&spectrum.state(idx), tau, &arrival_times(tau, None, 401))?;

    for i in (0..traj.len()).step_by(50) {
        println!("t = {:.5}  <q> = {:+.5}  var = {:.5}", traj.times[i], traj.mean_q[i], traj.var_q[i]);
    }
    println!("τ = {tau:.6}");
    println!("t_min = {:.6} (relative deviation {:.2e})", summary.t_min.unwrap_or(f64::NAN), summary.relative_deviation.unwrap_or(f64::NAN));
    println!("<q>(t_min) = {:.2e}", summary.mean_q_at_t_min.unwrap_or(f64::NAN));
    Ok(())
}
