use num_complex::Complex64;
use proptest::prelude::*;

use twoatom::dynamics::{
    concurrence_series, concurrence_wootters, concurrence_xstate, density_matrix, evolve, l1_coherence,
};
use twoatom::rates::{self, closed_form, collective_rates, series};
use twoatom::{Boundary, GeometryConfig, InitialState, PolarizationAxis, RateSet};

fn pol() -> impl Strategy<Value = PolarizationAxis> {
    prop_oneof![
        Just(PolarizationAxis::X),
        Just(PolarizationAxis::Y),
        Just(PolarizationAxis::Z)
    ]
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn rate_set() -> impl Strategy<Value = RateSet> {
    (0.0..3.0f64, -1.0..=1.0f64, -10.0..10.0f64)
        .prop_map(|(g11, frac, v)| RateSet::new(g11, frac * g11, Some(v)).unwrap())
}

fn initial_state() -> impl Strategy<Value = InitialState> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("non-zero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-6)
        .prop_map(|(a, b, c, d)| {
            let n = (a * a + b * b + c * c + d * d).sqrt();
            InitialState::new(Complex64::new(a / n, b / n), Complex64::new(c / n, d / n)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn collective_rates_non_negative(p in pol(), r in log_uniform(1e-3, 50.0), z in log_uniform(1e-3, 50.0)) {
        let s = collective_rates(p, &GeometryConfig::with_mirror(r, z).unwrap()).unwrap();
        prop_assert!(s.gamma_plus() >= -1e-12);
        prop_assert!(s.gamma_minus() >= -1e-12);
        prop_assert!(s.gamma11() >= 0.0);
    }

    #[test]
    fn free_space_recovered_far_from_mirror(p in pol(), z in 1e3..1e5f64) {
        let g = rates::gamma11(p, Boundary::Mirror(z)).unwrap();
        prop_assert!((g - 1.0).abs() <= 3e-3);
    }

    #[test]
    fn series_and_closed_form_overlap(x in 5e-3..5e-2f64) {
        let t = (series::transverse(x), closed_form::transverse(x));
        let l = (series::longitudinal(x), closed_form::longitudinal(x));
        prop_assert!((t.0 / t.1 - 1.0).abs() < 1e-9);
        prop_assert!((l.0 / l.1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coincidence_limit(p in pol(), z in log_uniform(1e-2, 1e3)) {
        let s = collective_rates(p, &GeometryConfig::with_mirror(1e-3, z).unwrap()).unwrap();
        prop_assert!((s.gamma12() / s.gamma11() - 1.0).abs() <= 1e-4);
    }

    #[test]
    fn evolved_state_is_a_valid_density_matrix(init in initial_state(), rates in rate_set(), t in 0.0..50.0f64) {
        let s = evolve(&init, &rates, t).unwrap();
        prop_assert!(s.p_photon() >= -1e-12 && s.p_photon() <= 1.0);
        let rho = density_matrix(&s);
        prop_assert!((rho.trace() - 1.0).norm() <= 1e-12);
        prop_assert!(rho.hermiticity_error() <= 1e-12);
        prop_assert!(rho.eigenvalues()[0] >= -1e-12);
    }

    #[test]
    fn wootters_matches_xstate(init in initial_state(), rates in rate_set(), t in 0.0..20.0f64) {
        let s = evolve(&init, &rates, t).unwrap();
        let rho = density_matrix(&s);
        let c = concurrence_xstate(&s);
        prop_assert!((concurrence_wootters(&rho).unwrap() - c).abs() <= 1e-10);
        prop_assert!((l1_coherence(&rho) - c).abs() <= 1e-12);
    }

    #[test]
    fn symmetric_mode_decays_purely(phase in 0.0..6.3f64, rates in rate_set(), t in 0.0..20.0f64) {
        let a = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phase);
        let init = InitialState::new(a, a).unwrap();
        let s = evolve(&init, &rates, t).unwrap();
        let ratio = s.b1().norm_sqr() / a.norm_sqr();
        prop_assert!((ratio - (-rates.gamma_plus() * t).exp()).abs() <= 1e-12);
    }

    #[test]
    fn bell_concurrence_ignores_shift(rates in rate_set(), t in 0.0..20.0f64) {
        let still = RateSet::new(rates.gamma11(), rates.gamma12(), Some(0.0)).unwrap();
        let moving = RateSet::new(rates.gamma11(), rates.gamma12(), Some(10.0)).unwrap();
        for init in [InitialState::psi_plus(), InitialState::psi_minus()] {
            let a = concurrence_xstate(&evolve(&init, &still, t).unwrap());
            let b = concurrence_xstate(&evolve(&init, &moving, t).unwrap());
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn bell_concurrence_never_increases(init in initial_state(), rates in rate_set()) {
        let grid: Vec<f64> = (0..50).map(|k| 0.2 * k as f64).collect();
        let c = concurrence_series(&init, &rates, &grid).unwrap();
        // the two modes can beat against each other for general inputs,
        // but not for the Bell states
        let bell = concurrence_series(&InitialState::psi_plus(), &rates, &grid).unwrap();
        prop_assert!(bell.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-15));
        prop_assert!(c.iter().all(|&(_, v)| (0.0..=1.0).contains(&v)));
    }
}
