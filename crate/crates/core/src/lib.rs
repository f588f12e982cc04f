//! Weighted numerical radius and weighted operator norms of finite complex
//! matrices, with certified enclosures and a catalog of machine-checkable
//! operator inequalities.
//!
//! For `0 <= t <= 1` the weighted numerical radius is
//! `omega_t(A) = omega((1 - 2t) A* + A)` and the weighted norm is
//! `||A||_t = ||(1 - 2t) A* + A||`. At `t = 1/2` both reduce to the ordinary
//! numerical radius and operator norm.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and the
//! command-line driver live in the `wradius` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod interval;
mod rng;

pub mod catalog;
pub mod ensembles;
pub mod matrix;
pub mod oracle;
pub mod quadrature;
pub mod radius;
pub mod spectral;
pub mod weighted;

pub use catalog::{
    check, evaluate_sample, run_suite, CheckId, CheckRecord, CheckSummary, SuiteReport, Verdict,
    DEFAULT_LAMBDA_GRID, DEFAULT_T_GRID,
};
pub use ensembles::{gen, random_unitary, sector_angle, EnsembleSpec, Family};
pub use error::{Error, Result};
pub use interval::Interval;
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use radius::{
    half_identity_residual, numerical_radius, rotated_weighted_sup, weighted_norm,
    weighted_radius, RadiusEstimate,
};
pub use spectral::{
    eig_hermitian, eigh, is_psd, matrix_abs, max_eigenvalue, psd_sqrt, spectral_norm,
    HermitianSpectrum,
};
pub use weighted::{im_t, re_t, weighted_sum, Weight};
