//! Weighted real and imaginary parts and the algebraic identities they obey.
//!
//! For a weight `t` in `[0, 1]`:
//!
//! ```text
//! Re_t A = (1 - t) A* + t A
//! Im_t A = ((1 - t) A - t A*) / i
//! Re_t A + i Im_t A = (1 - 2t) A* + A
//! ```
//!
//! The identities are checked in cleared-denominator form, so the endpoints
//! `t = 0` and `t = 1` are admissible.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral;

/// A weight `t` in `[0, 1]` with `lesser = min(t, 1 - t)` and
/// `greater = max(t, 1 - t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weight {
    t: f64,
    lesser: f64,
    greater: f64,
}

impl Weight {
    pub fn new(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidWeight(t));
        }
        let s = 1.0 - t;
        Ok(Weight {
            t,
            lesser: t.min(s),
            greater: t.max(s),
        })
    }

    pub const HALF: Weight = Weight {
        t: 0.5,
        lesser: 0.5,
        greater: 0.5,
    };

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    /// `min(t, 1 - t)`, at most one half.
    #[inline]
    pub fn lesser(&self) -> f64 {
        self.lesser
    }

    /// `max(t, 1 - t)`, at least one half.
    #[inline]
    pub fn greater(&self) -> f64 {
        self.greater
    }

    /// The weight `1 - t`.
    pub fn complement(&self) -> Weight {
        Weight {
            t: 1.0 - self.t,
            lesser: self.lesser,
            greater: self.greater,
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(1 - t) A* + t A`. Not Hermitian unless `t = 1/2` or `A` is.
pub fn re_t(a: &ComplexMatrix, w: Weight) -> ComplexMatrix {
    a.adjoint().lin_comb(c(1.0 - w.t), a, c(w.t))
}

/// `((1 - t) A - t A*) / i`.
pub fn im_t(a: &ComplexMatrix, w: Weight) -> ComplexMatrix {
    // Division by i is multiplication by -i.
    let minus_i = Complex64::new(0.0, -1.0);
    a.lin_comb(minus_i * (1.0 - w.t), &a.adjoint(), minus_i * (-w.t))
}

/// `(1 - 2t) A* + A`, the operator whose numerical radius and norm define
/// `omega_t(A)` and `||A||_t`.
pub fn weighted_sum(a: &ComplexMatrix, w: Weight) -> ComplexMatrix {
    a.adjoint().lin_comb(c(1.0 - 2.0 * w.t), a, c(1.0))
}

/// Acceptance threshold for identity residuals: `1e-10 max(1, ||A||_F^2)`.
pub fn identity_threshold(a: &ComplexMatrix) -> f64 {
    let f = a.frobenius_norm();
    1e-10 * (f * f).max(1.0)
}

/// `(Re_t A)^2 - Re_t(A^2)`, which equals `4t(1-t) (Im A)^2`.
pub fn loewner_gap(a: &ComplexMatrix, w: Weight) -> ComplexMatrix {
    let part = re_t(a, w);
    &part.square() - &re_t(&a.square(), w)
}

/// `||(Re_t A)^2 - Re_t(A^2) - 4t(1-t)(Im A)^2||_F`.
pub fn prop12_residual(a: &ComplexMatrix, w: Weight) -> f64 {
    let im = a.skew_part();
    let k = 4.0 * w.t * (1.0 - w.t);
    loewner_gap(a, w).distance(&im.square().scale(k))
}

/// `||(Im_t A)^2 + Re_{1-t}(A^2) - 4t(1-t)(Re A)^2||_F`.
pub fn dual_residual(a: &ComplexMatrix, w: Weight) -> f64 {
    let im_t = im_t(a, w);
    let lhs = &im_t.square() + &re_t(&a.square(), w.complement());
    let re = a.hermitian_part();
    let k = 4.0 * w.t * (1.0 - w.t);
    lhs.distance(&re.square().scale(k))
}

/// Smallest eigenvalue of the Hermitian part of the Loewner gap. The gap is
/// Hermitian up to rounding; the defect is checked before symmetrising.
pub fn loewner_gap_min_eigenvalue(a: &ComplexMatrix, w: Weight) -> Result<(f64, f64)> {
    let g = loewner_gap(a, w);
    let spec = spectral::eig_hermitian(&g)?;
    Ok((spec.min(), spec.abs_max()))
}
