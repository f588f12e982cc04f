//! Randomised invariants for the numerical kernels.

use proptest::prelude::*;
use wradius_core::catalog::Verdict;
use wradius_core::ensembles::{gen, random_unitary, sector_angle, EnsembleSpec, Family};
use wradius_core::oracle::{radius_grid, range_points, rayleigh_sample};
use wradius_core::quadrature::adaptive_simpson;
use wradius_core::spectral::{eig_hermitian, psd_sqrt, spectral_norm};
use wradius_core::weighted::{
    dual_residual, identity_threshold, im_t, loewner_gap_min_eigenvalue, prop12_residual, re_t,
    weighted_sum, Weight,
};
use wradius_core::{
    evaluate_sample, numerical_radius, weighted_norm, weighted_radius, CheckId, Complex64,
    ComplexMatrix, DEFAULT_LAMBDA_GRID, DEFAULT_T_GRID,
};

const TOL: f64 = 1e-8;

fn matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (2..=max_dim).prop_flat_map(|n| {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n).prop_map(move |v| {
            ComplexMatrix::new(n, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
                .unwrap()
        })
    })
}

fn weight() -> impl Strategy<Value = Weight> {
    prop_oneof![
        Just(0.0),
        Just(0.5),
        Just(1.0),
        0.0..=1.0f64,
    ]
    .prop_map(|t| Weight::new(t).unwrap())
}

fn conjugate(u: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    u.adjoint().matmul(a).matmul(u)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cartesian_decomposition(a in matrix(8)) {
        let back = a.hermitian_part().lin_comb(
            Complex64::new(1.0, 0.0),
            &a.skew_part(),
            Complex64::new(0.0, 1.0),
        );
        prop_assert!(back.distance(&a) <= 1e-12 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn hermitian_norm_is_extreme_eigenvalue(a in matrix(8)) {
        let h = a.hermitian_part();
        let spec = eig_hermitian(&h).unwrap();
        let by_eig = spec.min().abs().max(spec.max().abs());
        prop_assert!((spectral_norm(&h) - by_eig).abs() <= 1e-9);
    }

    #[test]
    fn spectral_norm_is_unitarily_invariant(a in matrix(8), seed in any::<u64>()) {
        let u = random_unitary(a.dim(), seed, 0).unwrap();
        prop_assert!((spectral_norm(&conjugate(&u, &a)) - spectral_norm(&a)).abs() <= 1e-9);
    }

    #[test]
    fn psd_sqrt_fixes_projections(n in 2usize..8, rank in 0usize..8, seed in any::<u64>()) {
        let rank = rank.min(n);
        let u = random_unitary(n, seed, 1).unwrap();
        let d: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(if i < rank { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let p = u.matmul(&ComplexMatrix::from_diagonal(&d)).matmul(&u.adjoint()).hermitian_part();
        prop_assert!(psd_sqrt(&p).unwrap().distance(&p) <= 1e-9);
    }

    #[test]
    fn weighted_parts_recompose(a in matrix(8), w in weight()) {
        let back = re_t(&a, w).lin_comb(Complex64::new(1.0, 0.0), &im_t(&a, w), Complex64::new(0.0, 1.0));
        prop_assert!(back.distance(&weighted_sum(&a, w)) <= 1e-12 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn identities_hold(a in matrix(8), w in weight()) {
        let thr = identity_threshold(&a);
        prop_assert!(prop12_residual(&a, w) <= thr);
        prop_assert!(dual_residual(&a, w) <= thr);
        let (lmin, scale) = loewner_gap_min_eigenvalue(&a, w).unwrap();
        prop_assert!(lmin >= -1e-9 * scale.max(1.0));
    }

    #[test]
    fn weighted_part_endpoints(a in matrix(6)) {
        let (w0, w1) = (Weight::new(0.0).unwrap(), Weight::new(1.0).unwrap());
        let minus_i = Complex64::new(0.0, -1.0);
        prop_assert_eq!(re_t(&a, w0), a.adjoint());
        prop_assert_eq!(re_t(&a, w1), a.clone());
        prop_assert!(im_t(&a, w0).distance(&a.scale_complex(minus_i)) <= 1e-15);
        prop_assert!(im_t(&a, w1).distance(&a.adjoint().scale_complex(-minus_i)) <= 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solver_agrees_with_grid_oracle(a in matrix(8)) {
        let est = numerical_radius(&a, TOL).unwrap();
        prop_assert!(est.width() <= TOL);
        let (lo, hi) = radius_grid(&a, 4096).unwrap();
        prop_assert!(lo <= est.upper + 1e-9, "grid lower {lo} above {est:?}");
        prop_assert!(est.lower <= hi + 1e-9, "grid upper {hi} below {est:?}");
        prop_assert!(rayleigh_sample(&a, 500, 7).unwrap() <= hi + 1e-9);
    }

    #[test]
    fn equivalence_band(a in matrix(8)) {
        let est = numerical_radius(&a, TOL).unwrap();
        let norm = spectral_norm(&a);
        prop_assert!(norm / 2.0 - TOL <= est.upper);
        prop_assert!(est.lower <= norm + TOL);
    }

    #[test]
    fn weighted_radius_invariances(a in matrix(6), w in weight(), c in 0.0..4.0f64, seed in any::<u64>()) {
        let base = weighted_radius(&a, w, TOL).unwrap();
        let scaled = weighted_radius(&a.scale(c), w, TOL).unwrap();
        prop_assert!((scaled.midpoint() - c * base.midpoint()).abs() <= 2.0 * TOL * c.max(1.0));
        let adj = weighted_radius(&a.adjoint(), w, TOL).unwrap();
        prop_assert!((adj.midpoint() - base.midpoint()).abs() <= 2.0 * TOL);
        let u = random_unitary(a.dim(), seed, 2).unwrap();
        let conj = weighted_radius(&conjugate(&u, &a), w, TOL).unwrap();
        prop_assert!((conj.midpoint() - base.midpoint()).abs() <= 2.0 * TOL);
    }

    #[test]
    fn weighted_endpoints_and_convexity(a in matrix(5)) {
        let w = |t: f64| weighted_radius(&a, Weight::new(t).unwrap(), TOL).unwrap().midpoint();
        prop_assert!((w(0.0) - 2.0 * spectral_norm(&a.hermitian_part())).abs() <= 2.0 * TOL);
        prop_assert!((w(1.0) - 2.0 * spectral_norm(&a.skew_part())).abs() <= 2.0 * TOL);
        prop_assert!((weighted_norm(&a, Weight::HALF) - spectral_norm(&a)).abs() <= 1e-12);
        let vals: Vec<f64> = (0..=20).map(|k| w(k as f64 / 20.0)).collect();
        for k in 1..20 {
            prop_assert!(vals[k] <= 0.5 * (vals[k - 1] + vals[k + 1]) + 4.0 * TOL);
        }
    }

    #[test]
    fn simpson_is_exact_on_cubics(c in prop::array::uniform4(-5.0..5.0f64), a in -2.0..0.0f64, len in 0.1..3.0f64) {
        let b = a + len;
        let p = |x: f64| c[0] + x * (c[1] + x * (c[2] + x * c[3]));
        let anti = |x: f64| x * (c[0] + x * (c[1] / 2.0 + x * (c[2] / 3.0 + x * c[3] / 4.0)));
        let exact = anti(b) - anti(a);
        let got: f64 = adaptive_simpson(|x| Ok(p(x)), a, b, 1e-10, 30).unwrap();
        prop_assert!((got - exact).abs() <= 1e-14 * exact.abs().max(1.0) * 10.0);
    }

    #[test]
    fn range_points_stay_in_measured_sector(seed in any::<u64>(), family in prop_oneof![
        Just(Family::Positive), Just(Family::AccretiveDissipative), Just(Family::Sectorial)
    ]) {
        let spec = if family == Family::Sectorial {
            EnsembleSpec::sectorial(0.4, 4, 1, seed).unwrap()
        } else {
            EnsembleSpec::new(family, 4, 1, seed).unwrap()
        };
        let a = gen(&spec, 0).unwrap();
        let theta = sector_angle(&a).unwrap();
        let slope = theta.tan();
        let norm = spectral_norm(&a);
        for z in range_points(&a, 400, seed).unwrap().points {
            prop_assert!(z.re > -1e-9);
            prop_assert!(z.im.abs() <= slope * z.re + 1e-9 * norm);
            prop_assert!((z.re * z.re + z.im * z.im).sqrt() <= norm + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn catalog_never_fails(a in matrix(5)) {
        let recs = evaluate_sample(&a, 0, CheckId::ALL, &DEFAULT_T_GRID, &DEFAULT_LAMBDA_GRID, TOL).unwrap();
        for r in recs {
            prop_assert!(r.verdict != Verdict::Fail, "{:?}", r);
            prop_assert!(r.verdict != Verdict::Skipped || !r.note.is_empty());
        }
    }
}
