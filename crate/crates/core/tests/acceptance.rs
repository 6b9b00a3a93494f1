//! One PASS/FAIL line per acceptance criterion. Criteria run sequentially
//! inside a single test so that the runtime budgets are not skewed by
//! parallel test threads.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use chronos::dynamics::{
    evolve, linspace, trajectory, transition_peak, variance_q, PositionObservables,
};
use chronos::experiments::analysis::{
    arrival, arrival_times, convergence_check, scan_fit, transition_scan, variance_depth, Direction,
};
use chronos::dynamics::transitions::DEFAULT_PEAK_SAMPLES;
use chronos::experiments::spectra::operator_matrix;
use chronos::experiments::{roots_for, Spectrum};
use chronos::model::basis_function_value;
use chronos::operators::{canonical_domain_sample, ccr_defect, eig_hermitian, OperatorKind};
use chronos::quadrature::QuadratureSpec;
use chronos::specfun::{bessel_j, bessel_j_derivative};
use chronos::{EnergyBasis, SpatialGrid, SystemConfig, WaveFunction};
use num_complex::Complex64;

struct Outcome {
    id: u8,
    pass: bool,
    /// Recorded criteria print a verdict but do not fail the run.
    hard: bool,
    detail: String,
}

fn report(id: u8, hard: bool, pass: bool, elapsed: Duration, detail: String) -> Outcome {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let kind = if hard { "" } else { " (recorded)" };
    println!("criterion {id:>2}: {verdict}{kind} [{:.2}s] {detail}", elapsed.as_secs_f64());
    Outcome { id, pass, hard, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = SystemConfig::atomic(0.01).unwrap();
    let taus = roots_for(0.01, 12).unwrap().taus(&cfg);
    let nearest = |x: f64| taus.iter().map(|t| (t - x).abs()).fold(f64::INFINITY, f64::min);
    let (d1, d2) = (nearest(0.02765), nearest(0.03758));
    let elapsed = start.elapsed();
    let pass = d1 <= 5e-5 && d2 <= 5e-5 && elapsed < Duration::from_secs(1);
    report(1, true, pass, elapsed, format!("|Δτ| = {d1:.2e} (0.02765), {d2:.2e} (0.03758)"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for gamma in [0.01, PI / 6.0] {
        let cfg = SystemConfig::atomic(gamma).unwrap();
        let basis = EnergyBasis::new(cfg, 512).unwrap();
        let ev = chronos::operators::eigvals_hermitian(&operator_matrix(OperatorKind::CtoaTat, &basis).unwrap()).unwrap();
        let mut by_size = ev.clone();
        by_size.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        let top = &by_size[..10];
        let roots = roots_for(gamma, 10).unwrap().taus(&cfg);
        let mut pos: Vec<f64> = top.iter().copied().filter(|v| *v > 0.0).collect();
        let mut neg: Vec<f64> = top.iter().map(|v| -v).filter(|v| *v > 0.0).collect();
        pos.sort_by(|a, b| b.total_cmp(a));
        neg.sort_by(|a, b| b.total_cmp(a));
        for side in [pos, neg] {
            for (m, r) in side.iter().zip(&roots) {
                worst = worst.max(((m - r) / r).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-3 && elapsed < Duration::from_secs(120);
    report(2, true, pass, elapsed, format!("max relative difference {worst:.2e} over γ ∈ {{0.01, π/6}}, K = 512"))
}

fn criterion_3(ctoa_depth: &mut f64) -> Outcome {
    let start = Instant::now();
    let cfg = SystemConfig::atomic(0.01).unwrap();
    let s = Spectrum::compute(OperatorKind::CtoaTat, cfg, 256, None).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for target in [0.02765, 0.03758] {
        let idx = s.select_target(target, 1e-3).unwrap();
        let tau = s.eigenvalues()[idx];
        let times = arrival_times(tau, None, 401);
        let (traj, sum) = arrival(&s.state(idx), tau, &times).unwrap();
        if target == 0.02765 {
            *ctoa_depth = variance_depth(&traj, tau, 0.25 * tau);
        }
        let dev = sum.relative_deviation.unwrap_or(f64::INFINITY);
        let q = sum.mean_q_at_t_min.unwrap_or(f64::INFINITY).abs();
        pass &= dev <= 0.05 && q <= 0.05 * cfg.l() && !sum.min_at_edge;
        parts.push(format!("τ = {tau:.5}: t_min/τ − 1 = {:+.4}, |<q>| = {q:.1e}", sum.t_min.unwrap_or(f64::NAN) / tau - 1.0));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    report(3, true, pass, elapsed, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let basis = EnergyBasis::shared(SystemConfig::atomic(PI / 6.0).unwrap(), 64).unwrap();
    let t = operator_matrix(OperatorKind::CtoPtt, &basis).unwrap();
    let worst = (0..100)
        .map(|seed| {
            let wf = canonical_domain_sample(OperatorKind::CtoPtt, &basis, seed).unwrap();
            ccr_defect(&t, &basis, &wf, OperatorKind::CtoPtt).unwrap()
        })
        .fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let pass = worst <= 1e-10 && elapsed < Duration::from_secs(5);
    report(4, true, pass, elapsed, format!("max defect {worst:.2e} over 100 samples, N = 129"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let basis = EnergyBasis::new(SystemConfig::atomic(PI / 6.0).unwrap(), 256).unwrap();
    let m = operator_matrix(OperatorKind::CtoPtt, &basis).unwrap();
    let scale = m.frobenius_norm();
    let ev = chronos::operators::eigvals_hermitian(&m).unwrap();
    let n = ev.len();
    let pairing = (0..n).map(|i| (ev[i] + ev[n - 1 - i]).abs()).fold(0.0, f64::max);
    let zeros = ev.iter().filter(|v| v.abs() <= 1e-10 * scale).count();
    let strictly_ordered = ev.windows(2).all(|w| w[1] > w[0]);
    let elapsed = start.elapsed();
    let pass = pairing <= 1e-10 * scale && zeros == 1 && strictly_ordered && elapsed < Duration::from_secs(60);
    report(
        5,
        true,
        pass,
        elapsed,
        format!("N = {n}: pairing error {:.2e}·‖T‖_F, {zeros} near-zero eigenvalue(s)", pairing / scale),
    )
}

fn criteria_6_and_7() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cfg = SystemConfig::atomic(PI / 6.0).unwrap();
    let s = Spectrum::compute(OperatorKind::CtoPtt, cfg, 1024, None).unwrap();
    let conv = convergence_check(&s, &[320]).unwrap();
    let pairs: Vec<_> = (300..=320).map(|n| (n, n - 1)).collect();
    let scan = transition_scan(&s, &pairs, Direction::Forward).unwrap();
    let fit = scan_fit(&scan).unwrap();
    let p_min = scan.rows.iter().map(|r| r.p_max).fold(f64::INFINITY, f64::min);
    let six_elapsed = start.elapsed();
    let pass = conv.max_relative_change < 1e-3 && (fit.slope - 1.0).abs() <= 0.05 && p_min >= 0.8;
    let six = report(
        6,
        true,
        pass,
        six_elapsed,
        format!(
            "K = 1024 (τ_320 changes {:.1e} at K = 2048): slope {:.4}, min p_max {p_min:.3}",
            conv.max_relative_change, fit.slope
        ),
    );

    let start = Instant::now();
    let pairs: Vec<_> = (2..=7).map(|n| (n, n - 1)).collect();
    let scan = transition_scan(&s, &pairs, Direction::Forward).unwrap();
    let fit = scan_fit(&scan).unwrap();
    let seven = report(
        7,
        true,
        fit.r_squared >= 0.9,
        start.elapsed(),
        format!("n ∈ [2, 7]: r² = {:.4}, slope {:.4} ± {:.4} (recorded)", fit.r_squared, fit.slope, fit.slope_stderr),
    );
    (six, seven)
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let s = Spectrum::compute(OperatorKind::CtoaTat, SystemConfig::atomic(0.01).unwrap(), 256, None).unwrap();
    let pairs: Vec<_> = (1..=10).map(|n| (n, n + 1)).collect();
    let mut p_max = 0.0f64;
    let (mut deviating, mut total) = (0, 0);
    for dir in [Direction::Forward, Direction::Backward] {
        for r in transition_scan(&s, &pairs, dir).unwrap().rows {
            p_max = p_max.max(r.p_max);
            total += 1;
            if (r.t_max.abs() - r.delta_tau.abs()).abs() > 0.2 * r.delta_tau.abs() {
                deviating += 1;
            }
        }
    }
    let pass = p_max <= 0.5 && 2 * deviating > total;
    report(8, true, pass, start.elapsed(), format!("max p_max {p_max:.3}; {deviating}/{total} pairs deviate > 20% from |Δτ|"))
}

/// Variance from the spatial density by composite Gauss–Legendre quadrature.
fn variance_by_quadrature(wf: &WaveFunction) -> f64 {
    let cfg = *wf.basis().config();
    let rule = QuadratureSpec::new(24, 4 * wf.basis().dim()).rule(-cfg.l(), cfg.l());
    let density = |q: f64| {
        wf.basis()
            .ks()
            .zip(wf.coeffs())
            .map(|(k, c)| c * basis_function_value(k, q, &cfg).unwrap())
            .sum::<Complex64>()
            .norm_sqr()
    };
    let m0: f64 = rule.integrate(density);
    let m1: f64 = rule.integrate(|q| q * density(q));
    let m2: f64 = rule.integrate(|q| q * q * density(q));
    m2 / m0 - (m1 / m0).powi(2)
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;

    let s = Spectrum::compute(OperatorKind::CtoaTat, SystemConfig::atomic(0.01).unwrap(), 256, None).unwrap();
    let idx = s.select_target(0.02765, 1e-3).unwrap();
    let traj = trajectory(&s.state(idx), &linspace(-1.0, 1.0, 201)).unwrap();
    let drift = traj.max_norm_drift();
    pass &= drift <= 1e-12;
    parts.push(format!("unitarity {drift:.1e}"));

    let mut worst_res = 0.0f64;
    for (kind, gamma, k) in [(OperatorKind::CtoaTat, 0.01, 128), (OperatorKind::CtoPtt, PI / 6.0, 128)] {
        let basis = EnergyBasis::new(SystemConfig::atomic(gamma).unwrap(), k).unwrap();
        let a = operator_matrix(kind, &basis).unwrap();
        let sys = eig_hermitian(&a).unwrap();
        let r = sys.residuals(&a).into_iter().fold(0.0, f64::max) / a.frobenius_norm();
        worst_res = worst_res.max(r);
    }
    pass &= worst_res <= 1e-10;
    parts.push(format!("eigen residual {worst_res:.1e}·‖A‖_F"));

    let basis = EnergyBasis::shared(SystemConfig::atomic(0.3).unwrap(), 24).unwrap();
    let coeffs = (0..basis.dim()).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos() / (1.0 + i as f64))).collect();
    let wf = WaveFunction::new(basis, coeffs).unwrap().normalized().unwrap();
    let mut var_diff = 0.0f64;
    for t in [0.0, 0.013, 0.2] {
        let psi = evolve(&wf, t);
        var_diff = var_diff.max((variance_q(&psi).unwrap() - variance_by_quadrature(&psi)).abs());
    }
    let obs = PositionObservables::new(s.basis.clone());
    let psi = evolve(&s.state(idx), 0.02);
    let fast = obs.variance_q(&psi).unwrap();
    var_diff = var_diff.max((fast - variance_by_quadrature(&psi)).abs());
    pass &= var_diff <= 1e-6;
    parts.push(format!("variance routes {var_diff:.1e}"));

    let mut bessel = 0.0f64;
    for nu in [0.25, 0.75, -0.25, -0.75] {
        for x in [0.3, 2.0, 8.9, 11.9, 12.1, 30.0] {
            let lhs = bessel_j(nu - 1.0, x).unwrap() + bessel_j(nu + 1.0, x).unwrap();
            let rhs = 2.0 * nu / x * bessel_j(nu, x).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(bessel_j(nu, x).unwrap().abs());
            bessel = bessel.max((lhs - rhs).abs() / scale);
            let w = bessel_j(nu, x).unwrap() * bessel_j_derivative(-nu, x).unwrap()
                - bessel_j_derivative(nu, x).unwrap() * bessel_j(-nu, x).unwrap();
            let exact = -2.0 * (nu * PI).sin() / (PI * x);
            bessel = bessel.max(((w - exact) / exact).abs());
        }
    }
    pass &= bessel <= 1e-9;
    parts.push(format!("Bessel {bessel:.1e}"));

    let two = EnergyBasis::shared(SystemConfig::atomic(0.4).unwrap(), 3).unwrap();
    let (ia, ib) = (two.index_of(0).unwrap(), two.index_of(2).unwrap());
    let mut from = vec![Complex64::new(0.0, 0.0); two.dim()];
    let mut to = from.clone();
    from[ia] = Complex64::new(1.0, 0.0);
    from[ib] = Complex64::new(1.0, 0.0);
    to[ia] = Complex64::new(1.0, 0.0);
    to[ib] = Complex64::new(-1.0, 0.0);
    let from = WaveFunction::new(two.clone(), from).unwrap().normalized().unwrap();
    let to = WaveFunction::new(two.clone(), to).unwrap().normalized().unwrap();
    let gap = two.energies()[ib] - two.energies()[ia];
    let exact = PI / gap.abs();
    let peak = transition_peak(&from, &to, (0.0, 1.7 * exact), DEFAULT_PEAK_SAMPLES).unwrap();
    let two_level = ((peak.t_max - exact) / exact).abs().max((peak.p_max - 1.0).abs());
    pass &= two_level <= 1e-6;
    parts.push(format!("two-level peak {two_level:.1e}"));

    report(9, true, pass, start.elapsed(), parts.join(", "))
}

fn criterion_10(ctoa_depth: f64) -> Outcome {
    let start = Instant::now();
    let cfg = SystemConfig::atomic(0.01).unwrap();
    let s = Spectrum::compute(OperatorKind::CtoPtt, cfg, 512, None).unwrap();
    let idx = s.select_target(0.03521, 1e-3).unwrap();
    let tau = s.eigenvalues()[idx];
    let wf = s.state(idx);
    let traj = trajectory(&wf, &linspace(-2.0 * tau, 0.0, 401)).unwrap();
    let depth = variance_depth(&traj, -tau, 0.25 * tau);
    let grid = SpatialGrid::new(401, cfg.l()).unwrap();
    let slices = linspace(-2.0 * tau, 0.0, 101);
    let counts = chronos::dynamics::density_field(&wf, &slices, &grid).unwrap().peak_counts(0.05);
    let near = (0..slices.len()).min_by(|&a, &b| (slices[a] + tau).abs().total_cmp(&(slices[b] + tau).abs())).unwrap();
    let pass = counts[near] >= 2 && depth < ctoa_depth;
    report(
        10,
        false,
        pass,
        start.elapsed(),
        format!(
            "τ = {tau:.5}: {} maxima at t = {:.5}; variance depth {depth:.3} vs CTOA {ctoa_depth:.3}",
            counts[near], slices[near]
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let mut ctoa_depth = f64::NAN;
    let mut outcomes = vec![criterion_1(), criterion_2(), criterion_3(&mut ctoa_depth), criterion_4(), criterion_5()];
    let (six, seven) = criteria_6_and_7();
    outcomes.extend([six, seven, criterion_8(), criterion_9(), criterion_10(ctoa_depth)]);
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| o.hard && !o.pass)
        .map(|o| format!("criterion {}: {}", o.id, o.detail))
        .collect();
    assert!(failed.is_empty(), "failed:\n{}", failed.join("\n"));
}
