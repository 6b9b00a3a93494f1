use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense Hermitian matrix in row-major order. Conjugate symmetry holds
/// exactly: entries are only ever written in mirrored pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Builds from the upper triangle `i ≤ j`; the diagonal keeps only the
    /// real part of `f(i, i)`.
    pub fn from_upper<F>(dim: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(f(i, i).re, 0.0);
            for j in i + 1..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v.conj();
            }
        }
        Self { dim, data }
    }

    /// Validates exact conjugate symmetry of a row-major buffer.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Input(format!(
                "{} entries for a {dim}×{dim} matrix",
                data.len()
            )));
        }
        for i in 0..dim {
            for j in i..dim {
                if data[j * dim + i] != data[i * dim + j].conj() {
                    return Err(Error::Input(format!("entry ({i}, {j}) breaks Hermitian symmetry")));
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// True when every entry has zero real part, i.e. the matrix is `i`
    /// times a real antisymmetric matrix.
    pub fn is_purely_imaginary(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0)
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| self.get(j, i) == self.get(i, j).conj()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }
}
