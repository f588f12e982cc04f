//! Dense square complex matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A dense `dim x dim` complex matrix stored row-major.
///
/// Entries are always finite; constructors that take external data reject
/// NaN and infinities.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive"));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix("entry count is not dim * dim"));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry"));
        }
        Ok(ComplexMatrix { dim, data })
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_parts(dim: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::InvalidMatrix("real and imaginary parts differ in length"));
        }
        let data = re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Self::new(dim, data)
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(dim: usize, re: &[f64]) -> Result<Self> {
        Self::new(dim, re.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Fills entry `(i, j)` with `f(i, j)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    /// `(A + A*) / 2`, Hermitian by construction.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5)
    }

    /// `(A - A*) / (2i)`, Hermitian by construction.
    pub fn skew_part(&self) -> Self {
        let n = self.dim;
        // (z - conj(w)) / (2i) = -i (z - conj(w)) / 2
        Self::from_fn(n, |i, j| {
            (self.data[i * n + j] - self.data[j * n + i].conj()) * Complex64::new(0.0, -0.5)
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    /// `i * self`.
    pub fn times_i(&self) -> Self {
        self.scale_complex(I)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        self.zip_with(other, |a, b| alpha * a + beta * b)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &aik) in row.iter().enumerate() {
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(brow) {
                    *d += aik * b;
                }
            }
        }
        ComplexMatrix { dim: n, data: out }
    }

    /// `self* self`, Hermitian by construction.
    pub fn gram(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                if i == j {
                    acc.im = 0.0;
                }
                out.data[i * n + j] = acc;
                out.data[j * n + i] = acc.conj();
            }
        }
        out
    }

    /// `self^2`.
    pub fn square(&self) -> Self {
        self.matmul(self)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Real part of the Frobenius inner product `tr(self* other)`.
    pub fn frobenius_dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// `||self - other||_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        libm::sqrt(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum(),
        )
    }

    /// `||self - self*||_F`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        libm::sqrt(acc)
    }

    /// Hermitian test with the relative tolerance `1e-10 * max(1, ||H||_F)`.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.frobenius_norm().max(1.0)
    }

    /// `e^{i theta} self`.
    pub fn rotate(&self, theta: f64) -> Self {
        self.scale_complex(Complex64::new(libm::cos(theta), libm::sin(theta)))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).collect()
    }
}

/// Relative tolerance used by every Hermitian precondition.
pub const HERMITIAN_TOL: f64 = 1e-10;

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.dim && j < self.dim, "index out of bounds");
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Complex64) -> ComplexMatrix {
        self.scale_complex(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}
