//! First CTOA characteristic roots at γ = 0.01 and the eigenvalues they give.

use chronos::experiments::roots_for;
use chronos::SystemConfig;

fn main() -> chronos::Result<()> {
    let cfg = SystemConfig::atomic(0.01)?;
    let table = roots_for(cfg.gamma(), 12)?;
    println!("{:>3} {:>14} {:>14} {:>10}", "n", "r_n", "tau_n", "residual");
    for (n, (r, tau)) in table.roots.iter().zip(table.taus(&cfg)).enumerate() {
        println!("{:>3} {r:>14.8} {tau:>14.8} {:>10.2e}", n + 1, table.residuals[n]);
    }
    Ok(())
}
