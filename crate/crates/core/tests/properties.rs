mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn legendre_orthogonality(r in 1usize..=8, a in -5.0f64..5.0, k in 1e-3f64..3.0) {
        prop_assert_eq!(orthogonality(r, a, k), Ok(()));
    }

    #[test]
    fn dg_reproduces_low_degree_polynomials(r in 1usize..=5, c in prop::collection::vec(-3.0f64..3.0, 5), n in 1usize..12) {
        prop_assert_eq!(degree_exactness(r, &c, n), Ok(()));
    }

    #[test]
    fn lowest_order_is_implicit_euler(
        (diag, off, u0) in (2usize..12).prop_flat_map(|m| (
            prop::collection::vec(0.1f64..50.0, m),
            prop::collection::vec(-20.0f64..20.0, m - 1),
            prop::collection::vec(-1.0f64..1.0, m),
        )),
        n in 1usize..20,
    ) {
        prop_assert_eq!(implicit_euler(&diag, &off, &u0, n), Ok(()));
    }

    #[test]
    fn reconstruction_is_continuous_and_exact(r in 1usize..=5, lambda in 0.0f64..20.0, omega in 0.0f64..10.0, n in 1usize..16) {
        prop_assert_eq!(reconstruction_identity(&scalar_solution(r, lambda, omega, n)), Ok(()));
    }

    #[test]
    fn projector_interpolates_and_reproduces(r in 1usize..=5, c in prop::collection::vec(-3.0f64..3.0, 5), n in 1usize..10) {
        prop_assert_eq!(projector(r, &c, n), Ok(()));
    }

    #[test]
    fn contour_scalar_oracles(a in 0.1f64..5.0, t0 in 0.01f64..0.5) {
        let worst = bromwich_oracles(a, t0).unwrap();
        prop_assert!(worst <= 1e-10, "worst {:e}", worst);
    }
}

#[test]
fn g_h_and_radau() {
    for r in 1..=12 {
        assert_eq!(g_h_closed_forms(r), Ok(()));
        assert_eq!(radau_residuals(r), Ok(()));
    }
}

#[test]
fn jump_indicator_tracks_error() {
    let worst = indicator_agreement().unwrap();
    assert!(worst <= 0.15, "{worst}");
}

#[test]
fn radau_point_superconvergence() {
    for r in [2usize, 3] {
        for rate in radau_rates(r, &[8, 16, 32]) {
            assert!((rate - (r as f64 + 1.0)).abs() <= 0.3, "r={r}: {rate}");
        }
    }
}

#[test]
fn error_profile_dominates() {
    let worst = profile_dominance().unwrap();
    assert!(worst <= 0.2, "{worst}");
}
