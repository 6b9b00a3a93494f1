//! Position densities of evolving states and peak counting.

use std::io::Write;

use num_complex::Complex64;

use super::evolution::evolve;
use crate::error::{Error, Result};
use crate::model::{basis_function_unchecked, SpatialGrid, WaveFunction};
use crate::output::fmt_f64;

/// `|ψ(q, t)|²` on a time × position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub times: Vec<f64>,
    pub q: Vec<f64>,
    /// One row per time.
    pub values: Vec<Vec<f64>>,
}

impl DensityField {
    /// Long-form CSV with columns `t,q,density`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,q,density")?;
        for (t, row) in self.times.iter().zip(&self.values) {
            let ts = fmt_f64(*t);
            for (q, d) in self.q.iter().zip(row) {
                writeln!(w, "{ts},{},{}", fmt_f64(*q), fmt_f64(*d))?;
            }
        }
        Ok(())
    }

    /// Prominent local maxima per time slice.
    pub fn peak_counts(&self, fraction: f64) -> Vec<usize> {
        self.values.iter().map(|row| count_prominent_maxima(row, fraction)).collect()
    }
}

/// Densities of `U_t ψ` at each time, synthesized from a precomputed table
/// of basis-function values.
pub fn density_field(wf: &WaveFunction, times: &[f64], grid: &SpatialGrid) -> Result<DensityField> {
    if times.is_empty() {
        return Err(Error::Input("no times requested".into()));
    }
    let basis = wf.basis();
    let cfg = basis.config();
    let n = basis.dim();
    let table: Vec<Complex64> = grid
        .points()
        .iter()
        .flat_map(|&q| basis.ks().map(move |k| basis_function_unchecked(k, q, cfg)))
        .collect();
    let values = times
        .iter()
        .map(|&t| {
            let c = evolve(wf, t);
            table
                .chunks_exact(n)
                .map(|row| row.iter().zip(c.coeffs()).map(|(p, a)| p * a).sum::<Complex64>().norm_sqr())
                .collect()
        })
        .collect();
    Ok(DensityField {
        times: times.to_vec(),
        q: grid.points().to_vec(),
        values,
    })
}

/// Number of local maxima whose topographic prominence is at least
/// `fraction` of the largest value.
///
/// Prominence of a peak: its height above the higher of the two lowest
/// points separating it from taller terrain (or from the end of the data)
/// on either side. Maxima on the boundary count, with only their inner side
/// setting the base.
pub fn count_prominent_maxima(values: &[f64], fraction: f64) -> usize {
    let n = values.len();
    if n == 0 {
        return 0;
    }
    let top = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = fraction * top;
    let mut count = 0;
    let mut i = 0;
    while i < n {
        // collapse plateaus to their first index
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left_lower = i == 0 || values[i - 1] < values[i];
        let right_lower = j == n - 1 || values[j + 1] < values[i];
        let interior = n > 1;
        if left_lower && right_lower && interior {
            let peak = values[i];
            // a side with no samples (a maximum on the boundary) imposes no base
            let side_min = |side: &mut dyn Iterator<Item = &f64>| {
                side.take_while(|&&v| v <= peak).fold(None, |m: Option<f64>, &v| Some(m.map_or(v, |m| m.min(v))))
            };
            let left = side_min(&mut values[..i].iter().rev());
            let right = side_min(&mut values[j + 1..].iter());
            let base = match (left, right) {
                (Some(a), Some(b)) => a.max(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => peak,
            };
            if peak - base >= threshold {
                count += 1;
            }
        }
        i = j + 1;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{synthesize, EnergyBasis, SystemConfig};

    #[test]
    fn prominence_counting() {
        let two = [0.0, 1.0, 0.2, 0.9, 0.0];
        assert_eq!(count_prominent_maxima(&two, 0.05), 2);
        let ripple = [0.0, 1.0, 0.99, 0.995, 0.0];
        assert_eq!(count_prominent_maxima(&ripple, 0.05), 1);
        let plateau = [0.0, 1.0, 1.0, 0.0];
        assert_eq!(count_prominent_maxima(&plateau, 0.05), 1);
        let edge = [1.0, 0.5, 0.0, 0.3];
        assert_eq!(count_prominent_maxima(&edge, 0.05), 2);
        assert_eq!(count_prominent_maxima(&[], 0.05), 0);
        let gauss: Vec<f64> = (0..101).map(|i| (-(i as f64 - 50.0).powi(2) / 50.0).exp()).collect();
        assert_eq!(count_prominent_maxima(&gauss, 0.05), 1);
    }

    #[test]
    fn field_matches_synthesis() {
        let b = EnergyBasis::shared(SystemConfig::atomic(0.3).unwrap(), 5).unwrap();
        let c: Vec<Complex64> = (0..b.dim()).map(|i| Complex64::new(1.0, i as f64 * 0.1)).collect();
        let wf = WaveFunction::new(b, c).unwrap().normalized().unwrap();
        let grid = SpatialGrid::new(41, 1.0).unwrap();
        let field = density_field(&wf, &[0.0, 0.05], &grid).unwrap();
        let direct: Vec<f64> = synthesize(&evolve(&wf, 0.05), &grid).iter().map(|z| z.norm_sqr()).collect();
        for (a, b) in field.values[1].iter().zip(&direct) {
            assert!((a - b).abs() < 1e-13);
        }
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 2 * 41);
    }
}
