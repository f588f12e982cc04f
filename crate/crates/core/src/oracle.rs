//! Brute-force evidence that shares no refinement logic with the certified
//! solver: a dense angular grid, random Rayleigh quotients, and point clouds
//! in the numerical range.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::radius::grid_padding;
use crate::rng::GaussianStream;
use crate::spectral::{spectral_norm, TridiagonalSolver};

const RAYLEIGH_STREAM: u16 = 0x0a11;

/// Points `<Ax, x>` for pseudo-random unit vectors `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeSample {
    pub points: Vec<Complex64>,
    pub count: usize,
    pub seed: u64,
}

/// Evaluates `lambda_max(Re(e^{i theta} A))` on `n` equally spaced angles and
/// pads the best value by the Lipschitz constant times the half spacing.
pub fn radius_grid(a: &ComplexMatrix, n: usize) -> Result<(f64, f64)> {
    if n < 8 {
        return Err(Error::InvalidArgument("radius_grid needs at least 8 points"));
    }
    let norm = spectral_norm(a);
    if norm == 0.0 {
        return Ok((0.0, 0.0));
    }
    let dim = a.dim();
    let adj = a.adjoint();
    let mut solver = TridiagonalSolver::new();
    let mut h = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut lower = f64::NEG_INFINITY;
    for j in 0..n {
        // (e^{i theta} A + e^{-i theta} A*) / 2, formed directly.
        let theta = TAU * j as f64 / n as f64;
        let phase = Complex64::new(0.5 * libm::cos(theta), 0.5 * libm::sin(theta));
        for r in 0..dim {
            for c in 0..dim {
                h[r * dim + c] = phase * a[(r, c)] + phase.conj() * adj[(r, c)];
            }
        }
        lower = lower.max(solver.max_eigenvalue(&h, dim)?);
    }
    Ok((lower, lower + grid_padding(norm, n)))
}

fn unit_vector(stream: &mut GaussianStream, dim: usize) -> Vec<Complex64> {
    loop {
        let x: Vec<Complex64> = (0..dim).map(|_| stream.complex_normal()).collect();
        let norm = libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm > 0.0 {
            return x.into_iter().map(|z| z / norm).collect();
        }
    }
}

fn rayleigh(a: &ComplexMatrix, x: &[Complex64]) -> Complex64 {
    let n = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for c in 0..n {
            row += a[(r, c)] * x[c];
        }
        acc += x[r].conj() * row;
    }
    acc
}

/// `<Ax, x>` for `k` unit vectors drawn from the stream keyed by `seed`.
/// The first `k` vectors do not depend on `k`, so larger samples extend
/// smaller ones.
pub fn range_points(a: &ComplexMatrix, k: usize, seed: u64) -> Result<RangeSample> {
    if k == 0 {
        return Err(Error::InvalidArgument("range_points needs k >= 1"));
    }
    let mut stream = GaussianStream::new(seed, RAYLEIGH_STREAM, 0);
    let points = (0..k)
        .map(|_| rayleigh(a, &unit_vector(&mut stream, a.dim())))
        .collect();
    Ok(RangeSample {
        points,
        count: k,
        seed,
    })
}

/// `max |<Ax, x>|` over `k` random unit vectors; a lower bound for `omega(A)`.
pub fn rayleigh_sample(a: &ComplexMatrix, k: usize, seed: u64) -> Result<f64> {
    Ok(range_points(a, k, seed)?
        .points
        .iter()
        .map(|z| libm::hypot(z.re, z.im))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radius::numerical_radius;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn grid_examples() {
        let (lo, hi) = radius_grid(&jordan(), 100_000).unwrap();
        assert!((lo - 0.5).abs() < 1e-4 && lo <= 0.5 + 1e-15);
        assert!(hi - lo <= core::f64::consts::PI * 1e-5 + 1e-18);
        assert!(hi >= 0.5);

        let d = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -2.0]).unwrap();
        let (lo, hi) = radius_grid(&d, 1024).unwrap();
        assert!(lo <= 2.0 + 1e-14 && 2.0 <= hi);

        assert_eq!(radius_grid(&ComplexMatrix::zeros(3), 16).unwrap(), (0.0, 0.0));
        assert!(radius_grid(&jordan(), 7).is_err());
    }

    #[test]
    fn grid_refinement_is_monotone() {
        let a = ComplexMatrix::from_fn(3, |i, j| c(libm::sin((i + 2 * j) as f64), (i * j) as f64 * 0.3));
        let (l1, _) = radius_grid(&a, 64).unwrap();
        let (l2, _) = radius_grid(&a, 640).unwrap();
        assert!(l2 >= l1 - 1e-12);
    }

    #[test]
    fn rayleigh_examples() {
        let id = ComplexMatrix::identity(3);
        assert!((rayleigh_sample(&id, 10, 5).unwrap() - 1.0).abs() < 1e-14);
        let v = rayleigh_sample(&jordan(), 100_000, 1).unwrap();
        assert!(v > 0.49 && v <= 0.5 + 1e-15, "{v}");
        let a = ComplexMatrix::from_fn(4, |i, j| c(i as f64 - j as f64, 0.5 * (i + j) as f64));
        let est = numerical_radius(&a, 1e-8).unwrap();
        assert!(rayleigh_sample(&a, 2000, 3).unwrap() <= est.upper + 1e-9);
        assert_eq!(rayleigh_sample(&a, 50, 9), rayleigh_sample(&a, 50, 9));
    }

    #[test]
    fn range_point_examples() {
        let id = ComplexMatrix::identity(2);
        for z in range_points(&id, 20, 0).unwrap().points {
            assert!((z - c(1.0, 0.0)).l1_norm() < 1e-14);
        }
        let d = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(1.0, 1.0)]);
        let s = range_points(&d, 1000, 4).unwrap();
        assert_eq!(s.count, 1000);
        for z in &s.points {
            assert!((z.re - 1.0).abs() < 1e-12);
            assert!(z.im >= -1e-12 && z.im <= 1.0 + 1e-12);
        }
        assert!(range_points(&d, 0, 0).is_err());
    }
}
