//! Adaptive Simpson quadrature over scalars and matrices, plus the two
//! integrals the catalog needs: `int omega_t(A) dt` and the matrix integral
//! of `|(Re_t A)^2 - Re_t(A^2)|^{1/2}`.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::radius::{weighted_radius, RadiusEstimate};
use crate::spectral::{eigh, hermitian_abs_pow};
use crate::weighted::{loewner_gap, Weight};

pub const DEFAULT_MAX_DEPTH: u32 = 30;
/// Integrand evaluations allowed per integral.
pub const EVALUATION_BUDGET: usize = 10_000;
/// Gap eigenvalues below this multiple of `||A||_F^2` are treated as zero.
const GAP_NOISE_FLOOR: f64 = 1e-13;

/// Values that adaptive Simpson can combine.
pub trait QuadValue: Clone {
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: f64) -> Self;
    /// Distance used for the local error estimate.
    fn dist(&self, other: &Self) -> f64;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, c: f64) -> Self {
        self * c
    }

    fn dist(&self, other: &Self) -> f64 {
        (self - other).abs()
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl QuadValue for ComplexMatrix {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, c: f64) -> Self {
        ComplexMatrix::scale(self, c)
    }

    fn dist(&self, other: &Self) -> f64 {
        self.distance(other)
    }

    fn is_finite(&self) -> bool {
        ComplexMatrix::is_finite(self)
    }
}

fn simpson<V: QuadValue>(h: f64, fa: &V, fm: &V, fb: &V) -> V {
    fa.add(&fm.scale(4.0)).add(fb).scale(h / 6.0)
}

struct Integrator<F> {
    f: F,
    evaluations: usize,
    max_depth: u32,
}

impl<V: QuadValue, F: FnMut(f64) -> Result<V>> Integrator<F> {
    fn eval(&mut self, x: f64) -> Result<V> {
        if self.evaluations >= EVALUATION_BUDGET {
            return Err(Error::NonConvergence {
                evaluations: self.evaluations,
            });
        }
        self.evaluations += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::InvalidArgument("integrand is not finite"));
        }
        Ok(v)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: V, fm: V, fb: V, whole: V, tol: f64, depth: u32) -> Result<V> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = simpson(m - a, &fa, &flm, &fm);
        let right = simpson(b - m, &fm, &frm, &fb);
        let both = left.add(&right);
        let err = both.dist(&whole);
        // Always split the top level once so a lucky coarse match cannot end
        // the search after three points.
        if depth > 0 && err <= 15.0 * tol {
            // Richardson correction.
            return Ok(both.add(&both.add(&whole.scale(-1.0)).scale(1.0 / 15.0)));
        }
        if depth >= self.max_depth {
            return Err(Error::DepthExceeded { depth });
        }
        let l = self.refine(a, m, fa, flm, fm.clone(), left, tol / 2.0, depth + 1)?;
        let r = self.refine(m, b, fm, frm, fb, right, tol / 2.0, depth + 1)?;
        Ok(l.add(&r))
    }
}

/// Adaptive Simpson estimate of `int_a^b f` with local error control `tol`.
pub fn adaptive_simpson<V, F>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<V>
where
    V: QuadValue,
    F: FnMut(f64) -> Result<V>,
{
    if a >= b || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument("integration bounds must satisfy a < b"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let mut it = Integrator {
        f,
        evaluations: 0,
        max_depth,
    };
    let m = 0.5 * (a + b);
    let fa = it.eval(a)?;
    let fm = it.eval(m)?;
    let fb = it.eval(b)?;
    let whole = simpson(b - a, &fa, &fm, &fb);
    it.refine(a, b, fa, fm, fb, whole, tol, 0)
}

/// Integral of the midpoints of certified enclosures, with an error budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    /// Quadrature tolerance plus `(b - a)` times the widest enclosure seen.
    pub error: f64,
}

/// Integrates `t -> f(t).midpoint()` and tracks the widest enclosure.
pub fn integrate_enclosures(
    mut f: impl FnMut(f64) -> Result<RadiusEstimate>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<IntegralEstimate> {
    let mut widest: f64 = 0.0;
    let value = adaptive_simpson(
        |t| {
            let est = f(t)?;
            widest = widest.max(est.width());
            Ok(est.midpoint())
        },
        a,
        b,
        tol,
        DEFAULT_MAX_DEPTH,
    )?;
    Ok(IntegralEstimate {
        value,
        error: tol + (b - a) * widest,
    })
}

/// `int_a^b omega_t(A) dt` with inner radius tolerance `tol / 10`.
pub fn integral_weighted_radius_estimate(
    a: &ComplexMatrix,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<IntegralEstimate> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) {
        return Err(Error::InvalidArgument("integration range must lie in [0, 1]"));
    }
    integrate_enclosures(|t| weighted_radius(a, Weight::new(t)?, tol / 10.0), lo, hi, tol)
}

/// `int_a^b omega_t(A) dt`.
pub fn integral_weighted_radius(a: &ComplexMatrix, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    Ok(integral_weighted_radius_estimate(a, lo, hi, tol)?.value)
}

/// Result of [`sqrt_gap_integral`].
#[derive(Clone, Debug, PartialEq)]
pub struct SqrtGapIntegral {
    /// `int_0^1 |(Re_t A)^2 - Re_t(A^2)|^{1/2} dt`.
    pub m: ComplexMatrix,
    /// Least-squares `c` in `M ~ c |Im A|`; zero when undefined.
    pub c: f64,
    /// False when `Im A` vanishes and no proportionality constant exists.
    pub defined: bool,
    /// `||M - c |Im A|||_F`.
    pub residual: f64,
    /// `|| |Im A| ||_F`.
    pub scale: f64,
}

/// Matrix integral of the square-root Loewner gap under `t = sin^2(phi)`,
/// and its least-squares proportionality constant against `|Im A|`.
pub fn sqrt_gap_integral(a: &ComplexMatrix, tol: f64) -> Result<SqrtGapIntegral> {
    // Rounding leaves eigenvalues of order eps ||A||^2 in an exactly zero
    // gap; their square roots would be pure noise, so they are dropped.
    let f = a.frobenius_norm();
    let floor = GAP_NOISE_FLOOR * f * f;
    let integrand = |phi: f64| -> Result<ComplexMatrix> {
        let s = libm::sin(phi);
        let t = (s * s).clamp(0.0, 1.0);
        let gap = loewner_gap(a, Weight::new(t)?).hermitian_part();
        let root = eigh(&gap)?.apply(|l| if l.abs() <= floor { 0.0 } else { libm::sqrt(l.abs()) });
        Ok(root.scale(libm::sin(2.0 * phi)))
    };
    let m: ComplexMatrix = adaptive_simpson(
        integrand,
        0.0,
        core::f64::consts::FRAC_PI_2,
        tol,
        DEFAULT_MAX_DEPTH,
    )?;
    let abs_im = hermitian_abs_pow(&a.skew_part(), 1.0)?;
    let scale = abs_im.frobenius_norm();
    if scale <= 1e-12 * a.frobenius_norm().max(1.0) {
        let residual = m.frobenius_norm();
        return Ok(SqrtGapIntegral {
            m,
            c: 0.0,
            defined: false,
            residual,
            scale,
        });
    }
    let c = m.frobenius_dot(&abs_im) / (scale * scale);
    let residual = m.distance(&abs_im.scale(c));
    Ok(SqrtGapIntegral {
        m,
        c,
        defined: true,
        residual,
        scale,
    })
}

/// `int_0^1 2 sqrt(t (1 - t)) dt` by the same substitution and quadrature.
pub fn sqrt_weight_constant(tol: f64) -> Result<f64> {
    adaptive_simpson(
        |phi: f64| {
            let s = libm::sin(phi);
            let t = s * s;
            Ok(2.0 * libm::sqrt((t * (1.0 - t)).max(0.0)) * libm::sin(2.0 * phi))
        },
        0.0,
        core::f64::consts::FRAC_PI_2,
        tol,
        DEFAULT_MAX_DEPTH,
    )
}
