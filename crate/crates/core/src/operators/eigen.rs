//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix (after a diagonal unitary phase rescaling), implicit
//! QL iteration with Wilkinson-type shifts, and back-transformation.
//!
//! Matrices that are `i` times a real antisymmetric matrix (the CTO in the
//! energy basis) are reduced with real orthogonal reflectors, which quarters
//! the cost of the reduction.

use num_complex::Complex64;

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 100;

/// Spectral decomposition `A = V Λ V*`.
///
/// Eigenvalues ascend; ties keep the order in which the QL iteration
/// produced them. Each eigenvector's largest-magnitude component (first on
/// ties) is real and positive. Eigenvectors are stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Complex64>,
    residual_bound: Option<f64>,
}

impl EigenSystem {
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Vec<Complex64>) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.len() != n * n {
            return Err(Error::Input(format!(
                "{} eigenvector entries for dimension {n}",
                eigenvectors.len()
            )));
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
            residual_bound: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[Complex64] {
        let n = self.dim();
        &self.eigenvectors[i * n..(i + 1) * n]
    }

    /// Column-major eigenvector buffer.
    pub fn eigenvectors(&self) -> &[Complex64] {
        &self.eigenvectors
    }

    /// max_i ‖A v_i − λ_i v_i‖₂ as measured right after the solve; `None`
    /// for systems loaded from a cache.
    pub fn residual_bound(&self) -> Option<f64> {
        self.residual_bound
    }

    /// ‖A v_i − λ_i v_i‖₂ for every pair.
    pub fn residuals(&self, a: &HermitianMatrix) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let v = self.eigenvector(i);
                let av = a.matvec(v);
                let lambda = self.eigenvalues[i];
                av.iter()
                    .zip(v)
                    .map(|(x, y)| (x - y * lambda).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    /// max_{i,j} |⟨v_i, v_j⟩ − δ_ij|.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            let vi = self.eigenvector(i);
            for j in i..n {
                let d: Complex64 = vi.iter().zip(self.eigenvector(j)).map(|(a, b)| a.conj() * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).norm());
            }
        }
        worst
    }

    /// ‖V Λ V* − A‖_F.
    pub fn reconstruction_error(&self, a: &HermitianMatrix) -> f64 {
        let n = self.dim();
        let mut total = 0.0;
        for r in 0..n {
            for c in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let v = self.eigenvector(i);
                    s += v[r] * v[c].conj() * self.eigenvalues[i];
                }
                total += (s - a.get(r, c)).norm_sqr();
            }
        }
        total.sqrt()
    }
}

struct Reflector<T> {
    start: usize,
    tau: f64,
    v: Vec<T>,
}

enum Reflectors {
    Complex(Vec<Reflector<Complex64>>),
    Real(Vec<Reflector<f64>>),
}

struct Tridiagonal {
    diag: Vec<f64>,
    /// |subdiagonal|, padded with a trailing zero to length n.
    off: Vec<f64>,
    /// Diagonal unitary D making D* T D real.
    phases: Vec<Complex64>,
    reflectors: Reflectors,
    /// Real antisymmetric B with A = iB, kept for the skew path's residuals.
    skew: Option<Vec<f64>>,
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<EigenSystem> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    let tri = tridiagonalize(a);
    let mut d = tri.diag.clone();
    let mut e = tri.off.clone();
    let mut zt = vec![0.0; n * n];
    for i in 0..n {
        zt[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut e, Some(&mut zt))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n * n);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for &col in &order {
        eigenvalues.push(d[col]);
        let z = &zt[col * n..(col + 1) * n];
        for ((yi, zi), ph) in y.iter_mut().zip(z).zip(&tri.phases) {
            *yi = ph * zi;
        }
        back_transform(&tri.reflectors, &mut y);
        fix_phase(&mut y);
        eigenvectors.extend_from_slice(&y);
    }

    let mut sys = EigenSystem {
        eigenvalues,
        eigenvectors,
        residual_bound: None,
    };
    let worst = match &tri.skew {
        Some(b) => skew_residuals(b, &sys).into_iter().fold(0.0, f64::max),
        None => sys.residuals(a).into_iter().fold(0.0, f64::max),
    };
    sys.residual_bound = Some(worst);
    Ok(sys)
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(a: &HermitianMatrix) -> Result<Vec<f64>> {
    if a.dim() == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    let tri = tridiagonalize(a);
    let mut d = tri.diag;
    let mut e = tri.off;
    tql2(&mut d, &mut e, None)?;
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

fn tridiagonalize(a: &HermitianMatrix) -> Tridiagonal {
    if a.dim() > 1 && a.is_purely_imaginary() {
        tridiagonalize_skew(a)
    } else {
        tridiagonalize_complex(a)
    }
}

fn phases_from_subdiagonal(sub: &[Complex64]) -> (Vec<f64>, Vec<Complex64>) {
    let n = sub.len() + 1;
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut off = vec![0.0; n];
    for k in 0..sub.len() {
        let m = sub[k].norm();
        off[k] = m;
        phases[k + 1] = if m > 0.0 { phases[k] * (sub[k] / m) } else { phases[k] };
    }
    (off, phases)
}

fn tridiagonalize_complex(a: &HermitianMatrix) -> Tridiagonal {
    let n = a.dim();
    let mut w = a.as_slice().to_vec();
    let mut diag = vec![0.0; n];
    let mut sub = vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)];
    let mut reflectors = Vec::new();
    let mut p = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(1) {
        diag[k] = w[k * n + k].re;
        if k + 2 >= n {
            sub[k] = w[(k + 1) * n + k];
            continue;
        }
        let start = k + 1;
        let m = n - start;
        // column k below the diagonal, read from row k
        let x: Vec<Complex64> = w[k * n + start..k * n + n].iter().map(|z| z.conj()).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            sub[k] = x[0];
            continue;
        }
        let x0 = x[0];
        let x0_abs = x0.norm();
        let alpha = (x0_abs * x0_abs + tail).sqrt();
        let phase = if x0_abs > 0.0 { x0 / x0_abs } else { Complex64::new(1.0, 0.0) };
        let mut v = x;
        v[0] = x0 + phase * alpha;
        let tau = 1.0 / (alpha * (alpha + x0_abs));
        sub[k] = -phase * alpha;

        // p = tau * A22 v
        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &w[(start + i) * n + start..(start + i) * n + n];
            let s: Complex64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            *pi = s * tau;
        }
        let kk: f64 = 0.5 * tau * v.iter().zip(p.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
        let wv: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kk).collect();
        let wc: Vec<Complex64> = wv.iter().map(|z| z.conj()).collect();
        let vc: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        for i in 0..m {
            let vi = v[i];
            let wi = wv[i];
            let row = &mut w[(start + i) * n + start..(start + i) * n + n];
            for j in 0..m {
                row[j] -= vi * wc[j] + wi * vc[j];
            }
        }
        reflectors.push(Reflector { start, tau, v });
    }
    diag[n - 1] = w[(n - 1) * n + n - 1].re;
    let (off, phases) = phases_from_subdiagonal(&sub);
    Tridiagonal {
        diag,
        off,
        phases,
        reflectors: Reflectors::Complex(reflectors),
        skew: None,
    }
}

fn tridiagonalize_skew(a: &HermitianMatrix) -> Tridiagonal {
    let n = a.dim();
    let original: Vec<f64> = a.as_slice().iter().map(|z| z.im).collect();
    let mut b = original.clone();
    let mut sub = vec![0.0; n - 1];
    let mut reflectors = Vec::new();
    let mut p = vec![0.0; n];

    for k in 0..n - 1 {
        if k + 2 >= n {
            sub[k] = b[(k + 1) * n + k];
            continue;
        }
        let start = k + 1;
        let m = n - start;
        let x: Vec<f64> = b[k * n + start..k * n + n].iter().map(|z| -z).collect();
        let tail: f64 = x[1..].iter().map(|z| z * z).sum();
        if tail == 0.0 {
            sub[k] = x[0];
            continue;
        }
        let x0 = x[0];
        let alpha = (x0 * x0 + tail).sqrt();
        let s = if x0 >= 0.0 { 1.0 } else { -1.0 };
        let mut v = x;
        v[0] = x0 + s * alpha;
        let tau = 1.0 / (alpha * (alpha + x0.abs()));
        sub[k] = -s * alpha;

        let p = &mut p[..m];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &b[(start + i) * n + start..(start + i) * n + n];
            *pi = tau * row.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
        }
        // B22 ← B22 + v pᵀ − p vᵀ
        for i in 0..m {
            let vi = v[i];
            let pi = p[i];
            let row = &mut b[(start + i) * n + start..(start + i) * n + n];
            for j in 0..m {
                row[j] += vi * p[j] - pi * v[j];
            }
        }
        reflectors.push(Reflector { start, tau, v });
    }
    // Q* (iB) Q has subdiagonal i·sub and zero diagonal
    let sub_c: Vec<Complex64> = sub.iter().map(|&s| Complex64::new(0.0, s)).collect();
    let (off, phases) = phases_from_subdiagonal(&sub_c);
    Tridiagonal {
        diag: vec![0.0; n],
        off,
        phases,
        reflectors: Reflectors::Real(reflectors),
        skew: Some(original),
    }
}

/// y ← H_0 H_1 ⋯ H_{last} y.
fn back_transform(reflectors: &Reflectors, y: &mut [Complex64]) {
    match reflectors {
        Reflectors::Complex(rs) => {
            for r in rs.iter().rev() {
                let ys = &mut y[r.start..];
                let dot: Complex64 = r.v.iter().zip(ys.iter()).map(|(v, y)| v.conj() * y).sum();
                let f = dot * r.tau;
                for (yi, vi) in ys.iter_mut().zip(&r.v) {
                    *yi -= vi * f;
                }
            }
        }
        Reflectors::Real(rs) => {
            for r in rs.iter().rev() {
                let ys = &mut y[r.start..];
                let mut re = 0.0;
                let mut im = 0.0;
                for (v, y) in r.v.iter().zip(ys.iter()) {
                    re += v * y.re;
                    im += v * y.im;
                }
                let (fr, fi) = (re * r.tau, im * r.tau);
                for (yi, vi) in ys.iter_mut().zip(&r.v) {
                    yi.re -= vi * fr;
                    yi.im -= vi * fi;
                }
            }
        }
    }
}

fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    let pivot = v[best];
    let mag = pivot.norm();
    if mag == 0.0 {
        return;
    }
    let rot = pivot.conj() / mag;
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex64::new(mag, 0.0);
}

fn skew_residuals(b: &[f64], sys: &EigenSystem) -> Vec<f64> {
    let n = sys.dim();
    (0..n)
        .map(|i| {
            let v = sys.eigenvector(i);
            let lambda = sys.eigenvalues[i];
            let mut total = 0.0;
            for r in 0..n {
                let row = &b[r * n..(r + 1) * n];
                let mut re = 0.0;
                let mut im = 0.0;
                for (bij, z) in row.iter().zip(v) {
                    re += bij * z.re;
                    im += bij * z.im;
                }
                // (iB v)_r = i(re + i im) = -im + i re
                let av = Complex64::new(-im, re);
                total += (av - v[r] * lambda).norm_sqr();
            }
            total.sqrt()
        })
        .collect()
}

/// Implicit QL on a real symmetric tridiagonal matrix (`d` diagonal, `e[i]`
/// coupling i and i+1, `e[n-1] = 0`). With `zt`, rotations are accumulated
/// into the rows of `zt`, which hold the eigenvectors on exit.
fn tql2(d: &mut [f64], e: &mut [f64], mut zt: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::NoConvergence {
                        iterations: iter - 1,
                        worst: e[l].abs(),
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = zt.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let zi = &mut lo[i * n..];
                        let zi1 = &mut hi[..n];
                        for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
