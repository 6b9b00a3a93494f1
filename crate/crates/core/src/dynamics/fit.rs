use crate::error::{Error, Result};

/// Ordinary least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard errors; zero with two points.
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
}

pub fn slope_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Input(format!("{n} points; a line needs at least 2")));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Input("all x values are equal; slope undefined".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    let (slope_stderr, intercept_stderr) = if n > 2 {
        let s2 = sse / (nf - 2.0);
        let se_slope = (s2 / sxx).sqrt();
        let se_icpt = (s2 * (1.0 / nf + mx * mx / sxx)).sqrt();
        (se_slope, se_icpt)
    } else {
        (0.0, 0.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
        intercept_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn exact_lines() {
        let f = slope_fit(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!((f.slope, f.intercept, f.r_squared), (1.0, 0.0, 1.0));
        let f = slope_fit(&[(0.0, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!((f.slope, f.intercept), (0.0, 1.0));
        assert!(slope_fit(&[(2.0, 1.0), (2.0, 3.0)]).is_err());
        assert!(slope_fit(&[(2.0, 1.0)]).is_err());
    }

    #[test]
    fn noisy_line_within_standard_error() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let pts: Vec<(f64, f64)> = (0..40)
                .map(|i| {
                    let x = i as f64 * 0.1;
                    (x, 2.5 * x - 1.0 + rng.gen_range(-0.2..0.2))
                })
                .collect();
            let f = slope_fit(&pts).unwrap();
            assert!((f.slope - 2.5).abs() < 4.0 * f.slope_stderr);
            assert!((f.intercept + 1.0).abs() < 4.0 * f.intercept_stderr);
            assert!(f.r_squared > 0.95);
        }
    }
}
