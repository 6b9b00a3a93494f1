//! Scenario orchestration: compute, write CSV/SVG, record a manifest.

use serde::Serialize;
use serde_json::json;

use super::analysis::{
    arrival, arrival_times, convergence_check, ctoa_cross_check, scan_fit, spectral_pairing_error, transition_scan,
    variance_depth, Direction,
};
use super::config::{OutputFormat, Scenario, ScenarioConfig, Selection, SELECTION_TOLERANCE};
use super::spectra::{roots_for, Spectrum};
use super::svg;
use crate::dynamics::{density_field, linspace, trajectory, Trajectory, TransitionScan};
use crate::error::{Error, Result};
use crate::model::{EnergyBasis, SpatialGrid, SystemConfig};
use crate::operators::{canonical_domain_sample, ccr_defect, CacheStatus, EigenCache, OperatorKind};
use crate::output::{fmt_f64, Manifest, OutputDir};

/// Prominence threshold for density maxima, as a fraction of the slice peak.
pub const PEAK_PROMINENCE: f64 = 0.05;

/// Runs one scenario, writing every artefact under `cfg.out`.
///
/// `notices` are carried into the manifest alongside any raised here.
pub fn run_scenario(cfg: &ScenarioConfig, notices: &[String]) -> Result<Manifest> {
    let mut out = OutputDir::create(&cfg.out, cfg.scenario.name())?;
    for n in notices {
        out.notice(n.clone());
    }
    let system = SystemConfig::atomic(cfg.gamma)?;
    let cache = EigenCache::new(&cfg.cache);
    let mut resolved = cfg.clone();
    match cfg.scenario {
        Scenario::CtoaArrival => ctoa_arrival(cfg, system, &cache, &mut out, &mut resolved)?,
        Scenario::CtoEvolution => cto_evolution(cfg, system, &cache, &mut out, &mut resolved)?,
        Scenario::CtoTransitions => cto_transitions(cfg, system, &cache, &mut out)?,
        Scenario::CtoaTransitions => ctoa_transitions(cfg, system, &cache, &mut out)?,
        Scenario::Spectrum => spectrum(cfg, system, &cache, &mut out)?,
        Scenario::Roots => roots(cfg, system, &mut out)?,
        Scenario::CcrCheck => ccr_check(cfg, system, &mut out)?,
    }
    let text = serde_json::to_string_pretty(&resolved)? + "\n";
    out.write("resolved.json", text.as_bytes())?;
    out.finish()
}

fn csv<F>(write: F) -> Result<Vec<u8>>
where
    F: FnOnce(&mut Vec<u8>) -> Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn want_svg(cfg: &ScenarioConfig) -> bool {
    cfg.format == OutputFormat::CsvSvg
}

fn spectrum_for(kind: OperatorKind, cfg: &ScenarioConfig, system: SystemConfig, cache: &EigenCache, out: &mut OutputDir) -> Result<Spectrum> {
    let s = Spectrum::compute(kind, system, cfg.half_width, Some(cache))?;
    let status = match &s.cache_status {
        Some(CacheStatus::Hit) => "hit".to_owned(),
        Some(CacheStatus::Miss) | None => "miss".to_owned(),
        Some(CacheStatus::Bypassed) => "bypassed".to_owned(),
        Some(CacheStatus::Recomputed(why)) => {
            out.notice(format!("{} cache entry recomputed: {why}", kind.tag()));
            "recomputed".to_owned()
        }
    };
    out.summary(&format!("cache_{}", kind.tag()), status)?;
    Ok(s)
}

fn target(cfg: &ScenarioConfig) -> Result<f64> {
    match cfg.selection {
        Selection::Target { tau } => Ok(tau),
        Selection::Range { .. } => Err(Error::config(
            "target-tau",
            format!("{} selects its eigenfunction by --target-tau", cfg.scenario),
        )),
    }
}

fn range(cfg: &ScenarioConfig) -> Result<(usize, usize)> {
    match cfg.selection {
        Selection::Range { n_lo, n_hi } => Ok((n_lo, n_hi)),
        Selection::Target { .. } => Err(Error::config(
            "n-lo",
            format!("{} selects eigenvalues by --n-lo/--n-hi", cfg.scenario),
        )),
    }
}

fn write_trajectory(cfg: &ScenarioConfig, out: &mut OutputDir, name: &str, traj: &Trajectory, title: &str) -> Result<()> {
    for w in &traj.warnings {
        out.notice(format!("{name}: {w}"));
    }
    let bytes = csv(|b| traj.write_csv(b))?;
    out.write(&format!("{name}.csv"), &bytes)?;
    if want_svg(cfg) {
        let text = svg::trajectory_svg(std::str::from_utf8(&bytes).expect("ascii csv"), title)?;
        out.write(&format!("{name}.svg"), text.as_bytes())?;
    }
    Ok(())
}

fn write_scan(cfg: &ScenarioConfig, out: &mut OutputDir, name: &str, scan: &TransitionScan, title: &str) -> Result<()> {
    let fit = scan_fit(scan)?;
    let bytes = csv(|b| scan.write_csv(b))?;
    out.write(&format!("{name}.csv"), &bytes)?;
    if want_svg(cfg) {
        let text = svg::transition_scan_svg(std::str::from_utf8(&bytes).expect("ascii csv"), fit.slope, fit.intercept, title)?;
        out.write(&format!("{name}.svg"), text.as_bytes())?;
    }
    let flagged = scan.rows.iter().filter(|r| r.boundary_flag).count();
    if flagged > 0 {
        out.notice(format!("{name}: {flagged} peak(s) at the search-window boundary"));
    }
    out.summary(&format!("{name}_fit"), fit)?;
    out.summary(
        &format!("{name}_p_max_min"),
        scan.rows.iter().map(|r| r.p_max).fold(f64::INFINITY, f64::min),
    )?;
    out.summary(
        &format!("{name}_p_max_max"),
        scan.rows.iter().map(|r| r.p_max).fold(0.0, f64::max),
    )?;
    Ok(())
}

#[derive(Serialize)]
struct DensityPeaks {
    direction: Direction,
    t_near_tau: f64,
    count_near_tau: usize,
    max_count: usize,
}

fn ctoa_arrival(cfg: &ScenarioConfig, system: SystemConfig, cache: &EigenCache, out: &mut OutputDir, resolved: &mut ScenarioConfig) -> Result<()> {
    let tau_target = target(cfg)?;
    let s = spectrum_for(OperatorKind::CtoaTat, cfg, system, cache, out)?;
    let idx = s.select_target(tau_target, SELECTION_TOLERANCE)?;
    let tau = s.eigenvalues()[idx];
    let wf = s.state(idx);
    let times = arrival_times(tau, cfg.t_max, cfg.t_samples);
    resolved.t_max = Some(*times.last().expect("t_samples ≥ 3"));

    let (traj, summary) = arrival(&wf, tau, &times)?;
    write_trajectory(cfg, out, "trajectory", &traj, "CTOA eigenfunction: position variance")?;

    let grid = SpatialGrid::new(cfg.grid, system.l())?;
    let slices = linspace(0.0, times[times.len() - 1], cfg.density_slices);
    let field = density_field(&wf, &slices, &grid)?;
    write_density(cfg, out, "density", &field, "CTOA eigenfunction: position density")?;

    out.summary("tau", tau)?;
    out.summary("arrival", summary)?;
    Ok(())
}

fn write_density(
    cfg: &ScenarioConfig,
    out: &mut OutputDir,
    name: &str,
    field: &crate::dynamics::DensityField,
    title: &str,
) -> Result<()> {
    let bytes = csv(|b| field.write_csv(b))?;
    out.write(&format!("{name}.csv"), &bytes)?;
    if want_svg(cfg) {
        let text = svg::density_svg(std::str::from_utf8(&bytes).expect("ascii csv"), title)?;
        out.write(&format!("{name}.svg"), text.as_bytes())?;
    }
    Ok(())
}

fn cto_evolution(cfg: &ScenarioConfig, system: SystemConfig, cache: &EigenCache, out: &mut OutputDir, resolved: &mut ScenarioConfig) -> Result<()> {
    let tau_target = target(cfg)?;
    let s = spectrum_for(OperatorKind::CtoPtt, cfg, system, cache, out)?;
    let idx = s.select_target(tau_target, SELECTION_TOLERANCE)?;
    let tau = s.eigenvalues()[idx];
    let wf = s.state(idx);
    let span = cfg.t_max.unwrap_or(2.0 * tau.abs());
    resolved.t_max = Some(span);
    let grid = SpatialGrid::new(cfg.grid, system.l())?;
    out.summary("tau", tau)?;

    for (direction, sign) in [(Direction::Forward, 1.0), (Direction::Backward, -1.0)] {
        let name = match direction {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        };
        let window = if sign > 0.0 { (0.0, span) } else { (-span, 0.0) };
        let times = linspace(window.0, window.1, cfg.t_samples);
        let traj = trajectory(&wf, &times)?;
        write_trajectory(cfg, out, &format!("trajectory_{name}"), &traj, &format!("CTO eigenfunction ({name}): position variance"))?;
        out.summary(&format!("variance_depth_{name}"), variance_depth(&traj, sign * tau, 0.25 * tau.abs()))?;

        let slices = linspace(window.0, window.1, cfg.density_slices);
        let field = density_field(&wf, &slices, &grid)?;
        write_density(cfg, out, &format!("density_{name}"), &field, &format!("CTO eigenfunction ({name}): position density"))?;

        let counts = field.peak_counts(PEAK_PROMINENCE);
        let peaks = csv(|b| {
            use std::io::Write;
            writeln!(b, "t,maxima")?;
            for (t, c) in slices.iter().zip(&counts) {
                writeln!(b, "{},{c}", fmt_f64(*t))?;
            }
            Ok(())
        })?;
        out.write(&format!("peaks_{name}.csv"), &peaks)?;

        let near = nearest_index(&slices, sign * tau);
        out.summary(
            &format!("density_peaks_{name}"),
            DensityPeaks {
                direction,
                t_near_tau: slices[near],
                count_near_tau: counts[near],
                max_count: counts.iter().copied().max().unwrap_or(0),
            },
        )?;
    }
    Ok(())
}

fn nearest_index(xs: &[f64], x: f64) -> usize {
    (0..xs.len())
        .min_by(|&a, &b| (xs[a] - x).abs().total_cmp(&(xs[b] - x).abs()))
        .unwrap_or(0)
}

fn cto_transitions(cfg: &ScenarioConfig, system: SystemConfig, cache: &EigenCache, out: &mut OutputDir) -> Result<()> {
    let (lo, hi) = range(cfg)?;
    if lo < 2 {
        return Err(Error::config("n-lo", "pairs (n, n−1) need n ≥ 2"));
    }
    let s = spectrum_for(OperatorKind::CtoPtt, cfg, system, cache, out)?;
    let pairs: Vec<_> = (lo..=hi).map(|n| (n, n - 1)).collect();
    let scan = transition_scan(&s, &pairs, Direction::Forward)?;
    write_scan(cfg, out, "transitions", &scan, "CTO transitions: t_max vs Δτ")?;
    if cfg.convergence_check {
        let check = convergence_check(&s, &[hi])?;
        if !check.converged {
            out.notice(format!(
                "τ_{hi} changes by {:.3e} (relative) when K doubles; increase K",
                check.max_relative_change
            ));
        }
        out.summary("convergence", check)?;
    }
    Ok(())
}

fn ctoa_transitions(cfg: &ScenarioConfig, system: SystemConfig, cache: &EigenCache, out: &mut OutputDir) -> Result<()> {
    let (lo, hi) = range(cfg)?;
    let s = spectrum_for(OperatorKind::CtoaTat, cfg, system, cache, out)?;
    if hi + 1 > s.positive_count() {
        return Err(Error::config(
            "n-hi",
            format!("pairs (n, n+1) need n-hi < {} at K = {}", s.positive_count(), cfg.half_width),
        ));
    }
    let pairs: Vec<_> = (lo..=hi).map(|n| (n, n + 1)).collect();
    let mut deviating = 0;
    let mut total = 0;
    for (direction, name) in [(Direction::Forward, "forward"), (Direction::Backward, "backward")] {
        let scan = transition_scan(&s, &pairs, direction)?;
        write_scan(cfg, out, &format!("transitions_{name}"), &scan, &format!("CTOA transitions ({name}): t_max vs Δτ"))?;
        for r in &scan.rows {
            total += 1;
            if (r.t_max.abs() - r.delta_tau.abs()).abs() > 0.2 * r.delta_tau.abs() {
                deviating += 1;
            }
        }
    }
    out.summary("pairs_deviating_over_20pct", json!({ "count": deviating, "of": total }))?;
    Ok(())
}

fn spectrum(cfg: &ScenarioConfig, system: SystemConfig, cache: &EigenCache, out: &mut OutputDir) -> Result<()> {
    let (lo, hi) = range(cfg)?;
    let ctoa = spectrum_for(OperatorKind::CtoaTat, cfg, system, cache, out)?;
    let pairs = ctoa_cross_check(system, &ctoa, hi)?;
    let mut worst = 0.0f64;
    let bytes = csv(|b| {
        use std::io::Write;
        writeln!(b, "n,tau_roots,tau_matrix,rel_diff")?;
        for (n, (r, m)) in pairs.iter().enumerate().map(|(i, p)| (i + 1, p)).filter(|(n, _)| *n >= lo) {
            let rel = ((m - r) / r).abs();
            worst = worst.max(rel);
            writeln!(b, "{n},{},{},{}", fmt_f64(*r), fmt_f64(*m), fmt_f64(rel))?;
        }
        Ok(())
    })?;
    out.write("ctoa_spectrum.csv", &bytes)?;
    out.summary("ctoa_max_rel_diff", worst)?;

    let cto = spectrum_for(OperatorKind::CtoPtt, cfg, system, cache, out)?;
    let bytes = csv(|b| {
        use std::io::Write;
        writeln!(b, "index,tau")?;
        for (i, v) in cto.eigenvalues().iter().enumerate() {
            writeln!(b, "{i},{}", fmt_f64(*v))?;
        }
        Ok(())
    })?;
    out.write("cto_spectrum.csv", &bytes)?;
    out.summary("cto_pairing_error", spectral_pairing_error(cto.eigenvalues()))?;
    Ok(())
}

fn roots(cfg: &ScenarioConfig, system: SystemConfig, out: &mut OutputDir) -> Result<()> {
    let (_, hi) = range(cfg)?;
    let table = roots_for(cfg.gamma, hi)?;
    let bytes = csv(|b| table.write_csv(&system, b))?;
    out.write("roots.csv", &bytes)?;
    out.summary("count", table.len())?;
    out.summary("max_abs_residual", table.residuals.iter().map(|r| r.abs()).fold(0.0, f64::max))?;
    Ok(())
}

#[derive(Serialize)]
struct DefectStats {
    operator: &'static str,
    half_width: usize,
    samples: usize,
    max: f64,
    mean: f64,
}

fn ccr_check(cfg: &ScenarioConfig, system: SystemConfig, out: &mut OutputDir) -> Result<()> {
    let (lo, hi) = range(cfg)?;
    let k = cfg.half_width;
    let mut lines = String::from("operator,K,seed,defect\n");
    let mut stats = Vec::new();
    for (kind, half_width) in [(OperatorKind::CtoPtt, k), (OperatorKind::CtoaTat, k), (OperatorKind::CtoaTat, 2 * k)] {
        let basis = EnergyBasis::shared(system, half_width)?;
        let t = super::spectra::operator_matrix(kind, &basis)?;
        let mut defects = Vec::new();
        for i in lo..=hi {
            let seed = cfg.seed.wrapping_add(i as u64);
            let wf = canonical_domain_sample(kind, &basis, seed)?;
            let d = ccr_defect(&t, &basis, &wf, kind)?;
            lines.push_str(&format!("{},{half_width},{seed},{}\n", kind.tag(), fmt_f64(d)));
            defects.push(d);
        }
        stats.push(DefectStats {
            operator: kind.tag(),
            half_width,
            samples: defects.len(),
            max: defects.iter().copied().fold(0.0, f64::max),
            mean: defects.iter().sum::<f64>() / defects.len() as f64,
        });
    }
    out.write("ccr.csv", lines.as_bytes())?;
    out.summary("defects", stats)?;
    Ok(())
}
