//! Deterministic random matrix families and the sector-angle measurement.
//!
//! Sample `i` of a spec is drawn from its own ChaCha8 stream keyed by
//! `(seed, family tag, i)`, so samples can be generated in any order and are
//! bit-identical across runs.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::GaussianStream;
use crate::spectral::{eig_hermitian, inverse_sqrt, psd_sqrt, spectral_norm, min_eigenvalue};

pub const DEFAULT_CONDITIONING_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    General,
    SelfAdjoint,
    Positive,
    AccretiveDissipative,
    Sectorial,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::General,
        Family::SelfAdjoint,
        Family::Positive,
        Family::AccretiveDissipative,
        Family::Sectorial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::General => "general",
            Family::SelfAdjoint => "selfadjoint",
            Family::Positive => "positive",
            Family::AccretiveDissipative => "accretive_dissipative",
            Family::Sectorial => "sectorial",
        }
    }

    fn stream_tag(self) -> u16 {
        match self {
            Family::General => 1,
            Family::SelfAdjoint => 2,
            Family::Positive => 3,
            Family::AccretiveDissipative => 4,
            Family::Sectorial => 5,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or(Error::InvalidArgument("unknown ensemble family"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleSpec {
    pub family: Family,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    /// Target sector half-angle; present exactly for the sectorial family.
    pub sector_alpha: Option<f64>,
    pub conditioning_floor: f64,
}

impl EnsembleSpec {
    /// A spec for a non-sectorial family with the default floor.
    pub fn new(family: Family, dim: usize, count: usize, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec {
            family,
            dim,
            count,
            seed,
            sector_alpha: None,
            conditioning_floor: DEFAULT_CONDITIONING_FLOOR,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sectorial(alpha: f64, dim: usize, count: usize, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec {
            family: Family::Sectorial,
            dim,
            count,
            seed,
            sector_alpha: Some(alpha),
            conditioning_floor: DEFAULT_CONDITIONING_FLOOR,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_floor(mut self, floor: f64) -> Result<Self> {
        self.conditioning_floor = floor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidArgument("ensemble dimension must be at least 1"));
        }
        if self.count == 0 {
            return Err(Error::InvalidArgument("ensemble count must be at least 1"));
        }
        if !(self.conditioning_floor > 0.0 && self.conditioning_floor.is_finite()) {
            return Err(Error::InvalidArgument("conditioning floor must be positive"));
        }
        match (self.family, self.sector_alpha) {
            (Family::Sectorial, Some(a)) if (0.0..FRAC_PI_2).contains(&a) => Ok(()),
            (Family::Sectorial, Some(_)) => {
                Err(Error::InvalidArgument("sector angle must lie in [0, pi/2)"))
            }
            (Family::Sectorial, None) => {
                Err(Error::InvalidArgument("sectorial family needs a sector angle"))
            }
            (_, Some(_)) => Err(Error::InvalidArgument(
                "sector angle is only meaningful for the sectorial family",
            )),
            (_, None) => Ok(()),
        }
    }
}

fn ginibre(stream: &mut GaussianStream, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| stream.complex_normal())
}

fn positive_definite(stream: &mut GaussianStream, n: usize, floor: f64) -> ComplexMatrix {
    let g = ginibre(stream, n).gram();
    &g + &ComplexMatrix::identity(n).scale(floor)
}

/// Sample `index` of the ensemble.
pub fn gen(spec: &EnsembleSpec, index: usize) -> Result<ComplexMatrix> {
    spec.validate()?;
    if index >= spec.count {
        return Err(Error::IndexOutOfRange {
            index,
            count: spec.count,
        });
    }
    let n = spec.dim;
    let floor = spec.conditioning_floor;
    let mut stream = GaussianStream::new(spec.seed, spec.family.stream_tag(), index as u64);
    let s = &mut stream;
    Ok(match spec.family {
        Family::General => ginibre(s, n),
        Family::SelfAdjoint => ginibre(s, n).hermitian_part(),
        Family::Positive => positive_definite(s, n, floor),
        Family::AccretiveDissipative => {
            let p = positive_definite(s, n, floor);
            let q = positive_definite(s, n, floor);
            p.lin_comb(Complex64::new(1.0, 0.0), &q, Complex64::new(0.0, 1.0))
        }
        Family::Sectorial => {
            let alpha = spec.sector_alpha.unwrap_or(0.0);
            let p = positive_definite(s, n, floor);
            let h = ginibre(s, n).hermitian_part();
            let hn = spectral_norm(&h);
            let h = if hn > 0.0 { h.scale(1.0 / hn) } else { h };
            let root = psd_sqrt(&p)?;
            // P^{1/2} H P^{1/2}, symmetrised so that Re A = P exactly.
            let congruent = root.matmul(&h).matmul(&root).hermitian_part();
            p.lin_comb(
                Complex64::new(1.0, 0.0),
                &congruent,
                Complex64::new(0.0, libm::tan(alpha)),
            )
        }
    })
}

/// Smallest `theta` with `W(A)` inside the closed sector
/// `{|Im z| <= tan(theta) Re z}`: `atan(||P^{-1/2} Im A P^{-1/2}||)` with
/// `P = Re A`.
pub fn sector_angle(a: &ComplexMatrix) -> Result<f64> {
    let p = a.hermitian_part();
    let lmin = min_eigenvalue(&p)?;
    if lmin <= 1e-10 * spectral_norm(a) {
        return Err(Error::NotAccretive {
            min_eigenvalue: lmin,
        });
    }
    let w = inverse_sqrt(&p)?;
    let c = w.matmul(&a.skew_part()).matmul(&w).hermitian_part();
    Ok(libm::atan(eig_hermitian(&c)?.abs_max()))
}

/// Haar-like random unitary: Gram-Schmidt (applied twice) on the columns of
/// a complex Gaussian matrix.
pub fn random_unitary(dim: usize, seed: u64, index: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1"));
    }
    const UNITARY_TAG: u16 = 0x0b;
    let mut stream = GaussianStream::new(seed, UNITARY_TAG, index);
    loop {
        let g = ginibre(&mut stream, dim);
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|c| (0..dim).map(|r| g[(r, c)]).collect())
            .collect();
        let mut ok = true;
        for k in 0..dim {
            for _pass in 0..2 {
                for j in 0..k {
                    let proj: Complex64 = (0..dim).map(|r| cols[j][r].conj() * cols[k][r]).sum();
                    let (done, rest) = cols.split_at_mut(k);
                    for (x, y) in rest[0].iter_mut().zip(&done[j]) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = libm::sqrt(cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>());
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for z in &mut cols[k] {
                *z /= norm;
            }
        }
        if ok {
            return Ok(ComplexMatrix::from_fn(dim, |r, c| cols[c][r]));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::is_psd;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("ginibre".parse::<Family>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::new(Family::General, 0, 1, 0).is_err());
        assert!(EnsembleSpec::new(Family::General, 2, 0, 0).is_err());
        assert!(EnsembleSpec::new(Family::Sectorial, 2, 1, 0).is_err());
        assert!(EnsembleSpec::sectorial(FRAC_PI_2, 2, 1, 0).is_err());
        assert!(EnsembleSpec::sectorial(-0.1, 2, 1, 0).is_err());
        assert!(EnsembleSpec::new(Family::General, 2, 1, 0).unwrap().with_floor(0.0).is_err());
        let mut spec = EnsembleSpec::new(Family::General, 2, 1, 0).unwrap();
        spec.sector_alpha = Some(0.2);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn index_out_of_range() {
        let spec = EnsembleSpec::new(Family::General, 3, 2, 1).unwrap();
        assert_eq!(gen(&spec, 2), Err(Error::IndexOutOfRange { index: 2, count: 2 }));
    }

    #[test]
    fn generation_is_deterministic_and_order_free() {
        let spec = EnsembleSpec::new(Family::General, 4, 5, 42).unwrap();
        let forward: Vec<_> = (0..5).map(|i| gen(&spec, i).unwrap()).collect();
        let backward: Vec<_> = (0..5).rev().map(|i| gen(&spec, i).unwrap()).collect();
        for i in 0..5 {
            assert_eq!(forward[i], backward[4 - i]);
        }
        assert_ne!(forward[0], forward[1]);
    }

    #[test]
    fn family_contracts() {
        let floor = DEFAULT_CONDITIONING_FLOOR;
        let sa = EnsembleSpec::new(Family::SelfAdjoint, 5, 3, 7).unwrap();
        let pos = EnsembleSpec::new(Family::Positive, 5, 3, 7).unwrap();
        let ad = EnsembleSpec::new(Family::AccretiveDissipative, 5, 3, 7).unwrap();
        for i in 0..3 {
            let x = gen(&sa, i).unwrap();
            assert!(x.distance(&x.adjoint()) <= 1e-12);
            let p = gen(&pos, i).unwrap();
            assert!(min_eigenvalue(&p).unwrap() >= floor - 1e-10);
            let a = gen(&ad, i).unwrap();
            assert!(min_eigenvalue(&a.hermitian_part()).unwrap() >= floor - 1e-10);
            assert!(min_eigenvalue(&a.skew_part()).unwrap() >= floor - 1e-10);
            let half = ComplexMatrix::identity(5).scale(floor / 2.0);
            assert!(is_psd(&(&a.hermitian_part() - &half), 0.0).unwrap());
            assert!(is_psd(&(&a.skew_part() - &half), 0.0).unwrap());
        }
    }

    #[test]
    fn sectorial_angle_is_attained() {
        for alpha in [0.0, 0.1, 0.3, 0.5, 1.2] {
            let spec = EnsembleSpec::sectorial(alpha, 4, 3, 11).unwrap();
            for i in 0..3 {
                let a = gen(&spec, i).unwrap();
                let theta = sector_angle(&a).unwrap();
                assert!(theta <= alpha + 1e-8, "alpha {alpha}: {theta}");
                assert!((theta - alpha).abs() <= 1e-8, "alpha {alpha}: {theta}");
            }
        }
    }

    #[test]
    fn sector_angle_examples() {
        let p = ComplexMatrix::from_real(2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        assert_eq!(sector_angle(&p).unwrap(), 0.0);
        let d = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(1.0, 1.0)]);
        assert!((sector_angle(&d).unwrap() - core::f64::consts::FRAC_PI_4).abs() < 1e-14);
        let w = ComplexMatrix::from_diagonal(&[c(1.0, libm::tan(0.3)), c(1.0, -libm::tan(0.3))]);
        assert!((sector_angle(&w).unwrap() - 0.3).abs() < 1e-14);
        let j = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(sector_angle(&j), Err(Error::NotAccretive { .. })));
    }

    #[test]
    fn unitary_is_unitary() {
        for n in [1, 2, 5, 8] {
            let u = random_unitary(n, 3, n as u64).unwrap();
            assert!(u.gram().distance(&ComplexMatrix::identity(n)) < 1e-13);
        }
        assert_eq!(random_unitary(4, 1, 2).unwrap(), random_unitary(4, 1, 2).unwrap());
    }
}
