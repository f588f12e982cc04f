//! Hermitian eigenvalue problems and the matrix functions built on them.
//!
//! Two independent routes are provided:
//!
//! * cyclic complex Jacobi rotations ([`eigh`], [`eig_hermitian`]), which also
//!   deliver eigenvectors and back [`psd_sqrt`] and [`matrix_abs`];
//! * Householder reduction to real tridiagonal form followed by implicit QL
//!   with Wilkinson shifts ([`max_eigenvalue`], [`spectral_norm`]), which is
//!   eigenvalue-only and several times faster. The radius solver and the
//!   brute-force oracle call it millions of times.


use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HERMITIAN_TOL};

const MAX_SWEEPS: usize = 100;
const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues of a Hermitian matrix, ascending, with optional eigenvectors
/// stored as the columns of a unitary matrix.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<ComplexMatrix>,
}

impl HermitianSpectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `max |lambda|`, the operator norm of the underlying matrix.
    pub fn abs_max(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `V diag(f(lambda)) V*`. Requires eigenvectors.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = self
            .eigenvectors
            .as_ref()
            .expect("spectrum was computed without eigenvectors");
        let n = v.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &w) in weights.iter().enumerate() {
                    if w != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                if i == j {
                    acc.im = 0.0;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        out
    }
}

fn require_hermitian(h: &ComplexMatrix) -> Result<()> {
    let scale = h.frobenius_norm().max(1.0);
    let defect = h.hermitian_defect();
    if defect <= HERMITIAN_TOL * scale {
        Ok(())
    } else {
        Err(Error::NotHermitian {
            deviation: defect / scale,
        })
    }
}

/// Eigenvalues of a Hermitian matrix (ascending) by cyclic Jacobi rotations.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianSpectrum> {
    require_hermitian(h)?;
    jacobi(h, false)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic Jacobi rotations.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianSpectrum> {
    require_hermitian(h)?;
    jacobi(h, true)
}

/// Cyclic Jacobi on the complex Hermitian matrix. Each rotation first removes
/// the phase of the pivot with a diagonal unitary, then applies the classical
/// real symmetric rotation.
fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> Result<HermitianSpectrum> {
    let n = h.dim();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    // Work on the Hermitian part so the lower triangle mirrors the upper one.
    for i in 0..n {
        a[i * n + i].im = 0.0;
        for j in (i + 1)..n {
            let z = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(n))
    } else {
        None
    };

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].norm_sqr())
            .sum();
        if off == 0.0 || off <= (f64::EPSILON * f64::EPSILON * 0.25) * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = a[p * n + q];
                let abs = libm::hypot(hpq.re, hpq.im);
                if abs == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // e^{-i phi}
                let phase_conj = Complex64::new(hpq.re / abs, -hpq.im / abs);
                let theta = (aqq - app) / (2.0 * abs);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = libm::sqrt(theta * theta + 1.0);
                    if theta >= 0.0 {
                        1.0 / (theta + s)
                    } else {
                        -1.0 / (-theta + s)
                    }
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                let s_phase = phase_conj * s;
                let c_phase = phase_conj * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = akp * c - s_phase * akq;
                    let new_kq = akp * s + c_phase * akq;
                    a[k * n + p] = new_kp;
                    a[k * n + q] = new_kq;
                    a[p * n + k] = new_kp.conj();
                    a[q * n + k] = new_kq.conj();
                }
                a[p * n + p] = Complex64::new(app - t * abs, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * abs, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - s_phase * vkq;
                        v[(k, q)] = vkp * s + c_phase * vkq;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            evaluations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = v.map(|v| ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]));
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Reusable buffers for eigenvalue-only solves through tridiagonal reduction.
#[derive(Clone, Debug, Default)]
pub(crate) struct TridiagonalSolver {
    work: Vec<Complex64>,
    reflector: Vec<Complex64>,
    product: Vec<Complex64>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagonalSolver {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    /// Eigenvalues of the Hermitian matrix stored row-major in `h`, unsorted.
    /// Only the Hermitian structure of `h` is assumed; nothing is checked.
    pub(crate) fn eigenvalues(&mut self, h: &[Complex64], n: usize) -> Result<&[f64]> {
        self.tridiagonalize(h, n);
        ql_implicit(&mut self.diag, &mut self.off)?;
        Ok(&self.diag)
    }

    pub(crate) fn max_eigenvalue(&mut self, h: &[Complex64], n: usize) -> Result<f64> {
        let vals = self.eigenvalues(h, n)?;
        Ok(vals.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Householder reduction. Leaves the real diagonal in `diag` and the
    /// moduli of the subdiagonal in `off` (the phases can be removed by a
    /// diagonal unitary similarity, so they do not affect the spectrum).
    fn tridiagonalize(&mut self, h: &[Complex64], n: usize) {
        self.work.clear();
        self.work.extend_from_slice(h);
        self.diag.clear();
        self.diag.resize(n, 0.0);
        self.off.clear();
        self.off.resize(n, 0.0);
        self.reflector.resize(n, Complex64::new(0.0, 0.0));
        self.product.resize(n, Complex64::new(0.0, 0.0));
        let a = &mut self.work;
        let v = &mut self.reflector;
        let u = &mut self.product;

        for k in 0..n.saturating_sub(2) {
            let col_norm_sq: f64 = ((k + 1)..n).map(|i| a[i * n + k].norm_sqr()).sum();
            let col_norm = libm::sqrt(col_norm_sq);
            self.off[k] = col_norm;
            if col_norm == 0.0 {
                continue;
            }
            let x0 = a[(k + 1) * n + k];
            let x0_abs = libm::hypot(x0.re, x0.im);
            let phase = if x0_abs == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                x0 / x0_abs
            };
            // v = x - alpha e1 with alpha = -phase * |x|, so |v_0| = |x0| + |x|.
            for i in (k + 1)..n {
                v[i] = a[i * n + k];
            }
            v[k + 1] += phase * col_norm;
            let v_norm = libm::sqrt(((k + 1)..n).map(|i| v[i].norm_sqr()).sum());
            for vi in &mut v[(k + 1)..n] {
                *vi /= v_norm;
            }
            // u = B v over the trailing block, beta = v* u.
            let mut beta = 0.0;
            for i in (k + 1)..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in (k + 1)..n {
                    acc += a[i * n + j] * v[j];
                }
                u[i] = acc;
                beta += (v[i].conj() * acc).re;
            }
            // w = u - beta v;  B <- B - 2 (v w* + w v*)
            for i in (k + 1)..n {
                u[i] -= v[i] * beta;
            }
            for i in (k + 1)..n {
                let vi2 = v[i] * 2.0;
                let wi2 = u[i] * 2.0;
                for j in (k + 1)..n {
                    a[i * n + j] -= vi2 * u[j].conj() + wi2 * v[j].conj();
                }
            }
        }
        for i in 0..n {
            self.diag[i] = a[i * n + i].re;
        }
        if n >= 2 {
            let z = a[(n - 1) * n + (n - 2)];
            self.off[n - 2] = libm::hypot(z.re, z.im);
        }
        self.off[n - 1] = 0.0;
    }
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix;
/// `off[i]` couples `i` and `i + 1`. Eigenvalues overwrite `diag`.
fn ql_implicit(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NonConvergence {
                    evaluations: iterations,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = libm::hypot(f, g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Largest eigenvalue of a Hermitian matrix (tridiagonal route).
pub fn max_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    require_hermitian(h)?;
    TridiagonalSolver::new().max_eigenvalue(h.as_slice(), h.dim())
}

/// Sorted eigenvalues via the tridiagonal route, for cross-checking Jacobi.
pub fn eigenvalues_tridiagonal(h: &ComplexMatrix) -> Result<Vec<f64>> {
    require_hermitian(h)?;
    let mut solver = TridiagonalSolver::new();
    let mut vals = solver.eigenvalues(h.as_slice(), h.dim())?.to_vec();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Largest singular value, `sqrt(lambda_max(A* A))`.
pub fn spectral_norm(a: &ComplexMatrix) -> f64 {
    let g = a.gram();
    let lmax = TridiagonalSolver::new()
        .max_eigenvalue(g.as_slice(), g.dim())
        // A* A is Hermitian PSD; QL on it does not fail in practice, but fall
        // back to Jacobi rather than panic.
        .or_else(|_| jacobi(&g, false).map(|s| s.max()))
        .unwrap_or(f64::NAN);
    libm::sqrt(lmax.max(0.0))
}

/// PSD square root. Eigenvalues in `[-tol, 0)` with
/// `tol = 1e-10 max(1, ||H||)` are clamped to zero, and so are positive
/// eigenvalues at rounding level, whose roots would otherwise be noise of
/// order `sqrt(eps)`.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eigh(h)?;
    let tol = 1e-10 * spec.abs_max().max(1.0);
    if spec.min() < -tol {
        return Err(Error::NotPsd {
            min_eigenvalue: spec.min(),
        });
    }
    let noise = 16.0 * h.dim() as f64 * f64::EPSILON * spec.abs_max();
    Ok(spec.apply(|l| if l <= noise { 0.0 } else { libm::sqrt(l) }))
}

/// Operator absolute value `|X| = (X* X)^{1/2}`.
pub fn matrix_abs(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_sqrt(&x.gram())
}

/// `|G|^p` for Hermitian `G`, computed from one eigendecomposition.
pub fn hermitian_abs_pow(g: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let spec = eigh(g)?;
    Ok(spec.apply(|l| {
        let a = l.abs();
        if a == 0.0 {
            0.0
        } else {
            libm::pow(a, p)
        }
    }))
}

/// `lambda_min(H) >= -tol * max(1, ||H||)`.
pub fn is_psd(h: &ComplexMatrix, tol: f64) -> Result<bool> {
    let spec = eig_hermitian(h)?;
    Ok(spec.min() >= -tol * spec.abs_max().max(1.0))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    require_hermitian(h)?;
    let mut solver = TridiagonalSolver::new();
    Ok(solver
        .eigenvalues(h.as_slice(), h.dim())?
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// Inverse square root of a Hermitian positive definite matrix.
pub(crate) fn inverse_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eigh(h)?;
    if spec.min() <= 0.0 {
        return Err(Error::NotPsd {
            min_eigenvalue: spec.min(),
        });
    }
    Ok(spec.apply(|l| 1.0 / libm::sqrt(l)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(n: usize, v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(n, v).unwrap()
    }

    fn sample_hermitian(n: usize, salt: f64) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(n, |i, j| {
            let x = (i * 7 + j * 13) as f64 + salt;
            c(libm::sin(x * 1.3), libm::cos(x * 0.7 + 0.2))
        });
        a.hermitian_part()
    }

    #[test]
    fn eigenvalue_examples() {
        let d = real(2, &[1.0, 0.0, 0.0, -2.0]);
        assert_eq!(eig_hermitian(&d).unwrap().eigenvalues, alloc::vec![-2.0, 1.0]);

        let s = real(2, &[0.0, 0.5, 0.5, 0.0]);
        let e = eig_hermitian(&s).unwrap().eigenvalues;
        assert!((e[0] + 0.5).abs() < 1e-15 && (e[1] - 0.5).abs() < 1e-15);

        let m = real(2, &[2.0, 1.0, 1.0, 2.0]);
        let e = eig_hermitian(&m).unwrap().eigenvalues;
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let j = real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eig_hermitian(&j), Err(Error::NotHermitian { .. })));
        assert!(matches!(max_eigenvalue(&j), Err(Error::NotHermitian { .. })));
        assert!(matches!(is_psd(&j, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn jacobi_reconstructs() {
        for n in [1, 2, 3, 5, 8, 13] {
            let h = sample_hermitian(n, n as f64);
            let spec = eigh(&h).unwrap();
            let back = spec.apply(|l| l);
            assert!(back.distance(&h) <= 1e-10 * h.frobenius_norm().max(1.0));
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let v = spec.eigenvectors.unwrap();
            let should_be_id = v.adjoint().matmul(&v);
            assert!(should_be_id.distance(&ComplexMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn tridiagonal_route_agrees_with_jacobi() {
        for n in [1, 2, 3, 4, 6, 8, 16] {
            for salt in 0..5 {
                let h = sample_hermitian(n, salt as f64 * 0.37);
                let jac = eig_hermitian(&h).unwrap().eigenvalues;
                let tri = eigenvalues_tridiagonal(&h).unwrap();
                for (a, b) in jac.iter().zip(&tri) {
                    assert!((a - b).abs() < 1e-12 * h.frobenius_norm().max(1.0), "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn tridiagonal_handles_already_reduced_and_diagonal_input() {
        let d = ComplexMatrix::from_diagonal(&[c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(eigenvalues_tridiagonal(&d).unwrap(), alloc::vec![-1.0, 0.0, 2.0, 3.0]);
        let z = ComplexMatrix::zeros(3);
        assert_eq!(max_eigenvalue(&z).unwrap(), 0.0);
    }

    #[test]
    fn spectral_norm_examples() {
        let j = real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!((spectral_norm(&j) - 1.0).abs() < 1e-15);
        let d = real(2, &[1.0, 0.0, 0.0, -2.0]);
        assert!((spectral_norm(&d) - 2.0).abs() < 1e-15);
        let m = ComplexMatrix::from_diagonal(&[c(1.0, 1.0), c(2.0, 2.0)]);
        assert!((spectral_norm(&m) - 2.0 * core::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(3)), 0.0);
    }

    #[test]
    fn norm_bridge_for_hermitian() {
        for salt in 0..10 {
            let h = sample_hermitian(5, salt as f64);
            let spec = eig_hermitian(&h).unwrap();
            assert!((spectral_norm(&h) - spec.abs_max()).abs() < 1e-9);
        }
    }

    #[test]
    fn psd_sqrt_examples() {
        let id = ComplexMatrix::identity(3);
        assert!(psd_sqrt(&id).unwrap().distance(&id) < 1e-15);

        let d = real(2, &[4.0, 0.0, 0.0, 9.0]);
        assert!(psd_sqrt(&d).unwrap().distance(&real(2, &[2.0, 0.0, 0.0, 3.0])) < 1e-14);

        let m = real(2, &[2.0, 1.0, 1.0, 2.0]);
        let s = psd_sqrt(&m).unwrap();
        assert!(s.square().distance(&m) <= 1e-8 * m.frobenius_norm());
        let e = eig_hermitian(&s).unwrap().eigenvalues;
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - libm::sqrt(3.0)).abs() < 1e-14);
    }

    #[test]
    fn psd_sqrt_clamps_and_rejects() {
        let tiny_neg = real(2, &[1.0, 0.0, 0.0, -1e-12]);
        let s = psd_sqrt(&tiny_neg).unwrap();
        assert_eq!(s[(1, 1)], c(0.0, 0.0));
        let neg = real(2, &[1.0, 0.0, 0.0, -1e-3]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn matrix_abs_examples() {
        let j = real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matrix_abs(&j).unwrap().distance(&real(2, &[0.0, 0.0, 0.0, 1.0])) < 1e-15);

        let p = real(2, &[2.0, 1.0, 1.0, 2.0]);
        assert!(matrix_abs(&p).unwrap().distance(&p) < 1e-12);

        let x = ComplexMatrix::from_fn(3, |i, j| c(i as f64 - j as f64, 0.5 * (i + j) as f64));
        let ax = matrix_abs(&x).unwrap();
        let a3x = matrix_abs(&x.scale(3.0)).unwrap();
        assert!(a3x.distance(&ax.scale(3.0)) < 1e-10);
        assert!((spectral_norm(&ax) - spectral_norm(&x)).abs() < 1e-10);
    }

    #[test]
    fn is_psd_examples() {
        assert!(is_psd(&ComplexMatrix::identity(2), 1e-10).unwrap());
        assert!(!is_psd(&real(2, &[1.0, 0.0, 0.0, -1.0]), 1e-10).unwrap());
        assert!(is_psd(&ComplexMatrix::zeros(2), 1e-10).unwrap());
    }

    #[test]
    fn hermitian_abs_pow_matches_matrix_abs() {
        let h = sample_hermitian(4, 2.5);
        let a = hermitian_abs_pow(&h, 1.0).unwrap();
        assert!(a.distance(&matrix_abs(&h).unwrap()) < 1e-7);
        let r = hermitian_abs_pow(&h, 0.5).unwrap();
        assert!(r.square().distance(&a) < 1e-10);
    }
}
