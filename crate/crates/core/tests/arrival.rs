use chronos::dynamics::{linspace, trajectory, variance_minimum_time};
use chronos::experiments::{roots_for, Spectrum};
use chronos::operators::{AnalyticCtoaEigenfunction, OperatorKind, Sign};
use chronos::{EnergyBasis, SystemConfig};

/// `t_min/τ` from the projected Bessel eigenfunction and from the matrix
/// eigenvector, on a fine time grid.
fn both_routes(n: usize, half_width: usize) -> (f64, f64) {
    let cfg = SystemConfig::atomic(0.01).unwrap();
    let roots = roots_for(0.01, n + 2).unwrap();
    let basis = EnergyBasis::shared(cfg, half_width).unwrap();
    let f = AnalyticCtoaEigenfunction::new(n, Sign::Plus, &cfg, &roots).unwrap();
    let tau = f.eigenvalue();
    let wf = f.project(&basis).unwrap().wavefunction.normalized().unwrap();
    let analytic = variance_minimum_time(&trajectory(&wf, &linspace(0.0, 2.0 * tau, 2001)).unwrap())
        .unwrap()
        .unwrap();

    let s = Spectrum::compute(OperatorKind::CtoaTat, cfg, half_width, None).unwrap();
    let idx = s.select_target(tau, 1e-3).unwrap();
    let tau_m = s.eigenvalues()[idx];
    let matrix = variance_minimum_time(&trajectory(&s.state(idx), &linspace(0.0, 2.0 * tau_m, 2001)).unwrap())
        .unwrap()
        .unwrap();
    (analytic.t_min / tau, matrix.t_min / tau_m)
}

#[test]
fn arrival_time_agrees_across_routes() {
    for n in [5, 6] {
        let (a, m) = both_routes(n, 256);
        assert!((a - m).abs() < 2e-3, "n = {n}: analytic {a}, matrix {m}");
    }
}

#[test]
fn second_family_minimum_precedes_tau() {
    // τ ≈ 0.03758 reaches its narrowest spread about 7% before t = τ, at
    // K = 256 and K = 512 alike.
    let (a256, _) = both_routes(5, 256);
    let (a512, _) = both_routes(5, 512);
    assert!((a256 - a512).abs() < 1e-3);
    assert!((a512 - 0.927).abs() < 2e-3, "{a512}");
}
