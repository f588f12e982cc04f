//! Certified numerical radius, weighted numerical radius and weighted norm.
//!
//! The numerical radius is the maximum of the support curve
//! `g(theta) = lambda_max(Re(e^{i theta} A))` over one period. The solver
//! samples `g` on a uniform grid, then repeatedly bisects the angular interval
//! with the largest certified upper bound until the gap between the best
//! sampled value and the largest remaining bound is below the tolerance.
//!
//! Each interval `[a, b]` is bounded two ways and the smaller bound is kept:
//!
//! * Lipschitz: `|g(x) - g(y)| <= ||A|| |x - y|`, so
//!   `max g <= (g(a) + g(b)) / 2 + ||A|| (b - a) / 2`;
//! * support lines: the numerical range lies in the wedge cut out by the two
//!   tangent lines `Re(e^{i a} z) <= g(a)` and `Re(e^{i b} z) <= g(b)`, so
//!   `g` on `[a, b]` is at most the support value of the wedge vertex.
//!
//! The second bound shrinks quadratically with the interval width, which is
//! what keeps certified solves at `tol = 1e-8` to a few hundred eigenvalue
//! evaluations.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::matrix::ComplexMatrix;
use crate::spectral::{spectral_norm, TridiagonalSolver};
use crate::weighted::{weighted_sum, Weight};

/// Initial uniform grid size.
pub const INITIAL_GRID: usize = 64;
/// Maximum eigenvalue evaluations per radius computation.
pub const EVALUATION_BUDGET: usize = 1_000_000;

/// A certified enclosure `lower <= omega <= upper` of a radius-type quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Angle in `[0, 2 pi)` at which `lower` was attained.
    pub argmax_angle: f64,
    /// Number of Hermitian eigenvalue solves spent.
    pub evaluations: usize,
}

impl RadiusEstimate {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lower, self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `theta -> lambda_max(cos(theta) Re A - sin(theta) Im A)`, which is the
/// largest eigenvalue of the Hermitian part of `e^{i theta} A`.
pub(crate) struct SupportCurve {
    re: ComplexMatrix,
    im: ComplexMatrix,
    buf: Vec<Complex64>,
    solver: TridiagonalSolver,
    pub(crate) evaluations: usize,
}

impl SupportCurve {
    pub(crate) fn new(a: &ComplexMatrix) -> Self {
        let n = a.dim();
        SupportCurve {
            re: a.hermitian_part(),
            im: a.skew_part(),
            buf: alloc::vec![Complex64::new(0.0, 0.0); n * n],
            solver: TridiagonalSolver::new(),
            evaluations: 0,
        }
    }

    pub(crate) fn eval(&mut self, theta: f64) -> Result<f64> {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        for ((dst, &h), &k) in self
            .buf
            .iter_mut()
            .zip(self.re.as_slice())
            .zip(self.im.as_slice())
        {
            *dst = h * c - k * s;
        }
        self.evaluations += 1;
        self.solver.max_eigenvalue(&self.buf, self.re.dim())
    }
}

#[derive(Clone, Copy, Debug)]
struct Bracket {
    a: f64,
    b: f64,
    ga: f64,
    gb: f64,
    bound: f64,
}

impl PartialEq for Bracket {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Bracket {}

impl PartialOrd for Bracket {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bracket {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Upper bound for `max g` over `[a, b]` given the endpoint values,
/// `b - a < pi`.
fn bracket_bound(a: f64, b: f64, ga: f64, gb: f64, lipschitz: f64) -> f64 {
    let half = 0.5 * (b - a);
    let by_lipschitz = 0.5 * (ga + gb) + lipschitz * half;

    // Wedge vertex w in coordinates rotated by the mid angle:
    // Re(e^{-i half} w) = ga, Re(e^{i half} w) = gb.
    let p = (ga + gb) / (2.0 * libm::cos(half));
    let q = (ga - gb) / (2.0 * libm::sin(half));
    // max over phi in [-half, half] of p cos(phi) - q sin(phi).
    let phi_star = libm::atan2(-q, p);
    let by_wedge = if phi_star.abs() <= half {
        libm::hypot(p, q)
    } else {
        ga.max(gb)
    };
    by_lipschitz.min(by_wedge)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Certified enclosure of `omega(A) = max_theta lambda_max(Re(e^{i theta} A))`
/// with `upper - lower <= tol`.
pub fn numerical_radius(a: &ComplexMatrix, tol: f64) -> Result<RadiusEstimate> {
    check_tol(tol)?;
    let norm = spectral_norm(a);
    if norm == 0.0 {
        return Ok(RadiusEstimate {
            lower: 0.0,
            upper: 0.0,
            argmax_angle: 0.0,
            evaluations: 0,
        });
    }
    // Eigenvalues carry absolute error of a few ulps of ||A|| per dimension.
    let guard = 32.0 * (a.dim() as f64 + 1.0) * f64::EPSILON * norm;
    let lipschitz = norm;

    let mut curve = SupportCurve::new(a);
    let step = TAU / INITIAL_GRID as f64;
    let mut values = Vec::with_capacity(INITIAL_GRID + 1);
    for j in 0..INITIAL_GRID {
        values.push(curve.eval(j as f64 * step)?);
    }
    values.push(values[0]);

    let (mut best, mut best_angle) = (f64::NEG_INFINITY, 0.0);
    for (j, &g) in values[..INITIAL_GRID].iter().enumerate() {
        if g > best {
            best = g;
            best_angle = j as f64 * step;
        }
    }

    let mut heap = BinaryHeap::with_capacity(4 * INITIAL_GRID);
    for j in 0..INITIAL_GRID {
        let (lo, hi) = (j as f64 * step, (j + 1) as f64 * step);
        let (ga, gb) = (values[j], values[j + 1]);
        heap.push(Bracket {
            a: lo,
            b: hi,
            ga,
            gb,
            bound: bracket_bound(lo, hi, ga, gb, lipschitz) + guard,
        });
    }

    loop {
        let top = *heap.peek().expect("bracket heap is never empty");
        if top.bound - best <= tol || top.b - top.a <= 1e-13 {
            let upper = top.bound.max(best);
            if upper - best > tol {
                return Err(Error::NonConvergence {
                    evaluations: curve.evaluations,
                });
            }
            return Ok(RadiusEstimate {
                lower: best,
                upper,
                argmax_angle: normalize_angle(best_angle),
                evaluations: curve.evaluations,
            });
        }
        if curve.evaluations >= EVALUATION_BUDGET {
            return Err(Error::NonConvergence {
                evaluations: curve.evaluations,
            });
        }
        heap.pop();
        let mid = 0.5 * (top.a + top.b);
        let gm = curve.eval(mid)?;
        if gm > best {
            best = gm;
            best_angle = mid;
        }
        for (lo, hi, ga, gb) in [(top.a, mid, top.ga, gm), (mid, top.b, gm, top.gb)] {
            heap.push(Bracket {
                a: lo,
                b: hi,
                ga,
                gb,
                bound: bracket_bound(lo, hi, ga, gb, lipschitz) + guard,
            });
        }
    }
}

fn normalize_angle(theta: f64) -> f64 {
    let r = theta % TAU;
    if r < 0.0 {
        r + TAU
    } else if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `omega_t(A) = omega((1 - 2t) A* + A)`.
pub fn weighted_radius(a: &ComplexMatrix, w: Weight, tol: f64) -> Result<RadiusEstimate> {
    numerical_radius(&weighted_sum(a, w), tol)
}

/// `||A||_t = ||(1 - 2t) A* + A||`.
pub fn weighted_norm(a: &ComplexMatrix, w: Weight) -> f64 {
    spectral_norm(&weighted_sum(a, w))
}

/// `sup_theta omega_r(e^{i theta} A) / (2R)` with `r = min(t, 1 - t)` and
/// `R = max(t, 1 - t)`; equal to `omega(A)` for every weight.
///
/// A 64-point grid with loose inner tolerance locates candidate peaks; the
/// three best local maxima are then refined by golden-section search with
/// inner tolerance `tol / 10`. The result is the best refined value.
pub fn rotated_weighted_sup(a: &ComplexMatrix, w: Weight, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let norm = spectral_norm(a);
    if norm == 0.0 {
        return Ok(0.0);
    }
    let inner = Weight::new(w.lesser())?;
    let denom = 2.0 * w.greater();
    let value = |theta: f64, inner_tol: f64| -> Result<f64> {
        Ok(weighted_radius(&a.rotate(theta), inner, inner_tol)?.midpoint() / denom)
    };

    const GRID: usize = 64;
    const PEAKS: usize = 3;
    let coarse_tol = tol.max(1e-6 * norm);
    let fine_tol = tol / 10.0;
    let step = TAU / GRID as f64;
    let coarse: Vec<f64> = (0..GRID)
        .map(|j| value(j as f64 * step, coarse_tol))
        .collect::<Result<_>>()?;

    let mut peaks: Vec<usize> = (0..GRID)
        .filter(|&j| {
            let prev = coarse[(j + GRID - 1) % GRID];
            let next = coarse[(j + 1) % GRID];
            coarse[j] >= prev && coarse[j] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| coarse[j].total_cmp(&coarse[i]).then(i.cmp(&j)));
    peaks.truncate(PEAKS);

    let mut best = f64::NEG_INFINITY;
    for j in peaks {
        let centre = j as f64 * step;
        let (found, _) = golden_section_max(
            |theta| value(theta, fine_tol),
            centre - step,
            centre + step,
            1e-6,
        )?;
        best = best.max(found);
    }
    Ok(best)
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`; returns the best
/// value seen and its abscissa.
fn golden_section_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let (mut best, mut best_x) = if f1 >= f2 { (f1, x1) } else { (f2, x2) };
    while hi - lo > width {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
            if f1 > best {
                best = f1;
                best_x = x1;
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
            if f2 > best {
                best = f2;
                best_x = x2;
            }
        }
    }
    Ok((best, best_x))
}

/// `|omega_t(A) - 2 omega((1 - t) Re A + i t Im A)|`.
pub fn half_identity_residual(a: &ComplexMatrix, w: Weight, tol: f64) -> Result<f64> {
    let lhs = weighted_radius(a, w, tol)?.midpoint();
    let t = w.t();
    let inner = a
        .hermitian_part()
        .lin_comb(Complex64::new(1.0 - t, 0.0), &a.skew_part(), Complex64::new(0.0, t));
    let rhs = 2.0 * numerical_radius(&inner, tol)?.midpoint();
    Ok((lhs - rhs).abs())
}

/// Half-width of the Lipschitz padding used by the brute-force grid oracle.
pub(crate) fn grid_padding(norm: f64, n: usize) -> f64 {
    norm * PI / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eig_hermitian;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
    }

    fn diag12() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -2.0]).unwrap()
    }

    /// Dense grid maximum of the support curve via Jacobi eigenvalues; an
    /// independent lower bound for omega.
    fn grid_lower(a: &ComplexMatrix, n: usize) -> f64 {
        (0..n)
            .map(|j| {
                let h = a.rotate(TAU * j as f64 / n as f64).hermitian_part();
                eig_hermitian(&h).unwrap().max()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert_eq!(numerical_radius(&jordan(), 0.0), Err(Error::InvalidTolerance(0.0)));
        assert!(numerical_radius(&jordan(), -1.0).is_err());
        assert!(numerical_radius(&jordan(), f64::NAN).is_err());
    }

    #[test]
    fn radius_examples() {
        let est = numerical_radius(&jordan(), 1e-8).unwrap();
        assert!(est.contains(0.5), "{est:?}");
        assert!(est.width() <= 1e-8);

        let est = numerical_radius(&diag12(), 1e-8).unwrap();
        assert!(est.contains(2.0) || (est.midpoint() - 2.0).abs() < 1e-12, "{est:?}");

        let est = numerical_radius(&ComplexMatrix::zeros(3), 1e-8).unwrap();
        assert_eq!((est.lower, est.upper, est.evaluations), (0.0, 0.0, 0));
    }

    #[test]
    fn lower_is_attained_at_argmax() {
        let a = ComplexMatrix::from_fn(4, |i, j| c(libm::sin((i * 4 + j) as f64), libm::cos((i + 3 * j) as f64)));
        let est = numerical_radius(&a, 1e-8).unwrap();
        let h = a.rotate(est.argmax_angle).hermitian_part();
        let g = eig_hermitian(&h).unwrap().max();
        assert!((g - est.lower).abs() < 1e-12);
        assert!((0.0..TAU).contains(&est.argmax_angle));
        assert!(est.width() <= 1e-8);
        let oracle = grid_lower(&a, 20000);
        assert!(oracle <= est.upper + 1e-12);
        assert!(est.lower <= oracle + spectral_norm(&a) * PI / 20000.0);
    }

    #[test]
    fn weighted_radius_examples() {
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let w = Weight::new(t).unwrap();
            let expected = (1.0 + (1.0 - 2.0 * t).abs()) / 2.0;
            let est = weighted_radius(&jordan(), w, 1e-9).unwrap();
            assert!((est.midpoint() - expected).abs() < 1e-8, "t={t}: {est:?}");
        }
        let est = weighted_radius(&diag12(), Weight::new(0.25).unwrap(), 1e-9).unwrap();
        assert!((est.midpoint() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn weighted_norm_examples() {
        for t in [0.0, 0.3, 0.5, 1.0] {
            let w = Weight::new(t).unwrap();
            assert!((weighted_norm(&jordan(), w) - 1.0).abs() < 1e-14);
            let m = ComplexMatrix::from_diagonal(&[c(1.0, 1.0), c(2.0, 2.0)]);
            let expected = 4.0 * libm::sqrt((1.0 - t) * (1.0 - t) + t * t);
            assert!((weighted_norm(&m, w) - expected).abs() < 1e-13);
        }
        let a = ComplexMatrix::from_fn(3, |i, j| c(i as f64, j as f64 - 1.0));
        assert!((weighted_norm(&a, Weight::HALF) - spectral_norm(&a)).abs() < 1e-14);
    }

    #[test]
    fn rotated_sup_examples() {
        let got = rotated_weighted_sup(&diag12(), Weight::new(0.25).unwrap(), 1e-8).unwrap();
        assert!((got - 2.0).abs() < 1e-8, "{got}");
        let got = rotated_weighted_sup(&jordan(), Weight::HALF, 1e-8).unwrap();
        assert!((got - 0.5).abs() < 1e-8, "{got}");
        let a = ComplexMatrix::from_fn(4, |i, j| c(libm::cos((2 * i + j) as f64), libm::sin((i * j) as f64 + 0.5)));
        let omega = numerical_radius(&a, 1e-8).unwrap();
        let got = rotated_weighted_sup(&a, Weight::new(0.3).unwrap(), 1e-8).unwrap();
        assert!((got - omega.midpoint()).abs() <= 2e-8, "{got} vs {omega:?}");
    }

    #[test]
    fn half_identity_examples() {
        let a = ComplexMatrix::from_fn(3, |i, j| c((i + j) as f64 * 0.3, i as f64 - j as f64));
        assert!(half_identity_residual(&a, Weight::HALF, 1e-8).unwrap() <= 2e-8);
        assert!(half_identity_residual(&jordan(), Weight::new(0.25).unwrap(), 1e-8).unwrap() <= 2e-8);
        let h = ComplexMatrix::new(2, alloc::vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        assert!(half_identity_residual(&h, Weight::new(0.8).unwrap(), 1e-8).unwrap() <= 2e-8);
    }

    #[test]
    fn bracket_bound_is_an_upper_bound_on_a_disk() {
        // W(J) is the disk of radius 1/2, so g is constant 1/2.
        let b = bracket_bound(0.0, 0.1, 0.5, 0.5, 1.0);
        assert!(b >= 0.5 && b - 0.5 < 1e-3);
    }
}
