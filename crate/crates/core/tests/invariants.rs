use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use psh_core::exhaustion::ExhaustionSpec;
use psh_core::factorization::AnalyticExpr;
use psh_core::geometry::{integrate, integrate_boundary_arc, ConformalMap, Tolerance};
use psh_core::hardy::taylor_coefficients;
use psh_core::potential::{green_function, poisson_kernel_angle};
use psh_core::scalar::{format_complex, parse_complex};

fn disk_point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_is_linear(a in -3.0..3.0f64, b in -3.0..3.0f64, k in 0.5..4.0f64) {
        let tol = Tolerance::new(1e-13, 1e-11);
        let f = |x: f64| (k * x).sin();
        let g = |x: f64| x.sqrt();
        let lhs = integrate(|x| a * f(x) + b * g(x), 0.0, 2.0, &tol).value;
        let rhs = a * integrate(f, 0.0, 2.0, &tol).value + b * integrate(g, 0.0, 2.0, &tol).value;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn quadrature_is_monotone(c in 0.0..2.0f64) {
        let tol = Tolerance::new(1e-13, 1e-11);
        let lo = integrate(|x: f64| x * x, 0.0, 1.0, &tol).value;
        let hi = integrate(|x: f64| x * x + c, 0.0, 1.0, &tol).value;
        prop_assert!(hi >= lo);
        prop_assert!((lo - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn green_function_is_symmetric_and_negative(z in disk_point(0.95), w in disk_point(0.95)) {
        prop_assume!((z - w).norm() > 1e-6);
        let a = green_function(z, w).unwrap();
        let b = green_function(w, z).unwrap();
        prop_assert!(a < 0.0);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn poisson_kernel_has_unit_mean(z in disk_point(0.9)) {
        let r = integrate_boundary_arc(|t| poisson_kernel_angle(z, t), &Tolerance::new(1e-13, 1e-11), &[]);
        prop_assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn automorphism_round_trip(a in disk_point(0.9), z in disk_point(0.99)) {
        let m = ConformalMap::automorphism(a).unwrap();
        let back = m.inverse(m.forward(z));
        prop_assert!((back - z).norm() < 1e-10);
        prop_assert!(m.forward(z).norm() < 1.0);
    }

    #[test]
    fn blaschke_is_unimodular_on_the_circle(
        zeros in proptest::collection::vec(disk_point(0.9), 1..4),
        t in 0.0..TAU,
    ) {
        let b = AnalyticExpr::blaschke(zeros.clone()).unwrap();
        prop_assert!((b.boundary_trace(t).norm() - 1.0).abs() < 1e-10);
        for a in zeros {
            prop_assert!(b.eval(a).norm() < 1e-10);
        }
    }

    #[test]
    fn expression_canonical_round_trip(c0 in -3.0..3.0f64, c1 in -3.0..3.0f64, beta in -1.0..2.0f64, z in disk_point(0.9)) {
        let e = AnalyticExpr::poly(&[Complex64::new(c0, 0.0), Complex64::new(c1, 0.0)])
            .times(AnalyticExpr::parse("1-z").unwrap().pow(beta));
        let again = AnalyticExpr::parse(&e.canonical()).unwrap();
        prop_assert!((e.eval(z) - again.eval(z)).norm() <= 1e-12 * (1.0 + e.eval(z).norm()));
    }

    #[test]
    fn taylor_coefficients_recover_polynomials(coeffs in proptest::collection::vec(-2.0..2.0f64, 1..6)) {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let got = taylor_coefficients(&AnalyticExpr::poly(&c), c.len() + 2);
        for (k, a) in got.iter().enumerate() {
            let want = c.get(k).copied().unwrap_or_default();
            prop_assert!((a - want).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_format_round_trip(re in -1e3..1e3f64, im in -1e3..1e3f64) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)), Some(z));
    }

    #[test]
    fn exhaustion_canonical_round_trip(m in 0.51..1.0f64, x in -0.5..0.5f64, y in -0.5..0.5f64) {
        for s in [format!("um:{m}"), format!("green:{}", format_complex(Complex64::new(x, y))), "log".to_string()] {
            let u = ExhaustionSpec::parse(&s).unwrap();
            let again = ExhaustionSpec::parse(&u.canonical()).unwrap();
            prop_assert_eq!(u.canonical(), again.canonical());
        }
    }
}
