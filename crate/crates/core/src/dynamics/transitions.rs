//! Transition probabilities between evolving states and the times at which
//! they peak.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::WaveFunction;
use crate::output::fmt_f64;

/// Coarse samples used when none are specified.
pub const DEFAULT_PEAK_SAMPLES: usize = 512;
/// Golden-section stopping width relative to the window.
pub const PEAK_RELATIVE_TOLERANCE: f64 = 1e-6;

/// `t ↦ ⟨b|U_t a⟩` with the products `b̄_k a_k` precomputed.
#[derive(Debug, Clone)]
pub struct TransitionAmplitude {
    weights: Vec<Complex64>,
    frequencies: Vec<f64>,
}

impl TransitionAmplitude {
    pub fn new(from: &WaveFunction, to: &WaveFunction) -> Result<Self> {
        from.check_same_basis(to)?;
        let hbar = from.basis().config().hbar();
        Ok(Self {
            weights: to
                .coeffs()
                .iter()
                .zip(from.coeffs())
                .map(|(b, a)| b.conj() * a)
                .collect(),
            frequencies: from.basis().energies().iter().map(|e| e / hbar).collect(),
        })
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(&self.frequencies)
            .map(|(w, &f)| w * Complex64::from_polar(1.0, -f * t))
            .sum()
    }

    pub fn probability(&self, t: f64) -> f64 {
        self.amplitude(t).norm_sqr().min(1.0)
    }
}

/// `|⟨b| U_t |a⟩|²`.
pub fn transition_probability(from: &WaveFunction, to: &WaveFunction, t: f64) -> Result<f64> {
    Ok(TransitionAmplitude::new(from, to)?.probability(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPeak {
    pub t_max: f64,
    pub p_max: f64,
    /// Window actually searched (after a possible widening).
    pub window: (f64, f64),
    /// The best coarse sample stayed on a window edge after widening.
    pub boundary_flag: bool,
}

/// Maximum of `P(t)` over a window: a uniform coarse scan, then
/// golden-section refinement between the neighbours of the best sample.
/// A peak on the window edge widens the window by its own width on that
/// side and retries once.
pub fn transition_peak(
    from: &WaveFunction,
    to: &WaveFunction,
    window: (f64, f64),
    samples: usize,
) -> Result<TransitionPeak> {
    let amp = TransitionAmplitude::new(from, to)?;
    peak_of(|t| amp.probability(t), window, samples)
}

pub fn peak_of<F: Fn(f64) -> f64>(f: F, window: (f64, f64), samples: usize) -> Result<TransitionPeak> {
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Input(format!("empty time window [{lo}, {hi}]")));
    }
    if samples < 64 {
        return Err(Error::Input(format!("{samples} coarse samples; at least 64 needed")));
    }
    let first = scan(&f, (lo, hi), samples);
    let (window, best, edge) = match first.1 {
        Edge::Lower => {
            let w = (lo - (hi - lo), hi);
            let (b, e) = scan(&f, w, 2 * samples - 1);
            (w, b, e)
        }
        Edge::Upper => {
            let w = (lo, hi + (hi - lo));
            let (b, e) = scan(&f, w, 2 * samples - 1);
            (w, b, e)
        }
        Edge::Interior => ((lo, hi), first.0, Edge::Interior),
    };
    let (a, b) = best;
    let tol = PEAK_RELATIVE_TOLERANCE * (window.1 - window.0);
    let t_max = golden_max(&f, a, b, tol);
    Ok(TransitionPeak {
        t_max,
        p_max: f(t_max),
        window,
        boundary_flag: edge != Edge::Interior,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Edge {
    Lower,
    Upper,
    Interior,
}

/// Bracket around the best sample and whether that sample is an endpoint.
fn scan<F: Fn(f64) -> f64>(f: &F, (lo, hi): (f64, f64), samples: usize) -> ((f64, f64), Edge) {
    let step = (hi - lo) / (samples - 1) as f64;
    let t = |i: usize| lo + step * i as f64;
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..samples {
        let v = f(t(i));
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    let edge = if best == 0 {
        Edge::Lower
    } else if best == samples - 1 {
        Edge::Upper
    } else {
        Edge::Interior
    };
    let a = t(best.saturating_sub(1));
    let b = t((best + 1).min(samples - 1));
    ((a, b), edge)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let m = 0.5 * (a + b);
    // never return something worse than the bracket ends
    [m, a, b].into_iter().fold(m, |best, t| if f(t) > f(best) { t } else { best })
}

/// One row of a transition scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRow {
    pub n: usize,
    pub n_prime: usize,
    /// `τ_{n'} − τ_n`.
    pub delta_tau: f64,
    pub t_max: f64,
    pub p_max: f64,
    pub boundary_flag: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransitionScan {
    pub rows: Vec<TransitionRow>,
}

impl TransitionScan {
    /// CSV with columns `n,n_prime,delta_tau,t_max,p_max,boundary_flag`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n,n_prime,delta_tau,t_max,p_max,boundary_flag")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.n,
                r.n_prime,
                fmt_f64(r.delta_tau),
                fmt_f64(r.t_max),
                fmt_f64(r.p_max),
                u8::from(r.boundary_flag)
            )?;
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.delta_tau, r.t_max)).collect()
    }
}
