use nlho_gcs::dynamics::{evolve, state_autocorrelation};
use nlho_gcs::gcs::build_state;
use nlho_gcs::spectrum::SpectrumTable;
use nlho_gcs::{ModelParams64, SeriesStart, StateOptions64};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams64> {
    (0.5..3.0f64, -0.1..0.1f64)
        .prop_map(|(beta, lp)| ModelParams64::with_lambda_prime(beta, lp).unwrap())
}

fn start() -> impl Strategy<Value = SeriesStart> {
    prop_oneof![Just(SeriesStart::Vacuum), Just(SeriesStart::FirstExcited)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn states_have_unit_norm(p in params(), j in 0.01..0.3f64, gamma in -10.0..10.0f64, s in start()) {
        let state = build_state(&p, j, gamma, &StateOptions64::with_start(s)).unwrap();
        prop_assert!((state.coefficients().norm_sqr() - 1.0).abs() < 1e-12);
        let total: f64 = state.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(state.tail_mass() < 1e-10);
    }

    #[test]
    fn probabilities_do_not_depend_on_gamma(p in params(), j in 0.01..0.3f64, g1 in -10.0..10.0f64, g2 in -10.0..10.0f64) {
        let o = StateOptions64::default();
        let a = build_state(&p, j, g1, &o).unwrap();
        let b = build_state(&p, j, g2, &o).unwrap();
        for (x, y) in a.probabilities().iter().zip(b.probabilities()) {
            prop_assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn evolution_shifts_gamma(p in params(), j in 0.01..0.3f64, gamma in -5.0..5.0f64, t in -5.0..5.0f64) {
        let o = StateOptions64::default();
        let evolved = evolve(&build_state(&p, j, gamma, &o).unwrap(), t);
        let direct = build_state(&p, j, gamma + p.beta() * t, &o).unwrap();
        prop_assert!(evolved.coefficients().max_abs_diff(direct.coefficients()).unwrap() < 1e-12);
        prop_assert!((evolved.coefficients().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_composes(p in params(), j in 0.01..0.3f64, t1 in -3.0..3.0f64, t2 in -3.0..3.0f64) {
        let s = build_state(&p, j, 0.0, &StateOptions64::default()).unwrap();
        let twice = evolve(&evolve(&s, t1), t2);
        let once = evolve(&s, t1 + t2);
        prop_assert!(twice.coefficients().max_abs_diff(once.coefficients()).unwrap() < 1e-12);
    }

    #[test]
    fn autocorrelation_is_a_probability(p in params(), j in 0.01..0.3f64, t in -50.0..50.0f64) {
        let s = build_state(&p, j, 0.0, &StateOptions64::default()).unwrap();
        let a = state_autocorrelation(&s, t);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn spectrum_increases_below_cutoff(p in params(), n_max in 1usize..60) {
        let table = SpectrumTable::new(p, n_max);
        for w in table.entries.windows(2) {
            prop_assert!(w[1].energy > w[0].energy);
            prop_assert!(w[1].level > 0.0);
        }
    }
}
