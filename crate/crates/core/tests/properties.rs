use jcm_core::{
    atomic_inversion, build_initial_state, concurrence_lower_bound, entropy_report, propagate,
    spectral_decompose, ModelParams,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (
        0.5f64..8.0,
        0.0f64..0.1,
        0.0f64..=1.0,
        0.0f64..=1.0,
        0.0f64..=1.0,
        0.0f64..std::f64::consts::TAU,
    )
        .prop_map(|(mean, gamma_bar, lambda, p11, q11, bell_phase)| ModelParams {
            gamma_bar,
            lambda,
            p11,
            q11,
            bell_phase,
            ..ModelParams::with_mean_photons(mean)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semigroup(p in params(), t1 in 0.0f64..20.0, t2 in 0.0f64..20.0) {
        let s = build_initial_state(&p).unwrap();
        let direct = propagate(&s, &p, t1 + t2).unwrap();
        let split = propagate(&propagate(&s, &p, t1).unwrap(), &p, t2).unwrap();
        for n in 0..=s.n_max() {
            prop_assert!((direct.a[n] - split.a[n]).abs() < 1e-10);
            prop_assert!((direct.b[n] - split.b[n]).abs() < 1e-10);
        }
        for n in 0..s.n_blocks() {
            prop_assert!((direct.c[n] - split.c[n]).norm() < 1e-10);
        }
    }

    #[test]
    fn trace_and_positivity(p in params(), tau in 0.0f64..100.0) {
        let s = build_initial_state(&p).unwrap();
        let t = propagate(&s, &p, tau).unwrap();
        prop_assert!((t.trace() - s.trace()).abs() < 1e-12);
        prop_assert!(t.min_eigenvalue() >= -1e-12);
        prop_assert!(atomic_inversion(&t).abs() <= 1.0 + 1e-12);
        let clb = concurrence_lower_bound(&t);
        prop_assert!((0.0..=1.0).contains(&clb));
    }

    #[test]
    fn entropy_bounds(p in params(), tau in 0.0f64..60.0) {
        let s = propagate(&build_initial_state(&p).unwrap(), &p, tau).unwrap();
        let d = spectral_decompose(&s);
        prop_assert!((d.trace() - s.trace()).abs() < 1e-12);
        let r = entropy_report(&s, &d);
        let tol = 1e-10;
        prop_assert!(r.s_atom <= std::f64::consts::LN_2 + tol);
        prop_assert!(r.mutual >= -tol);
        prop_assert!(r.deficit >= -tol);
        prop_assert!(r.deficit <= r.mutual + tol);
        prop_assert!((r.s_atom - r.s_rad).abs() <= r.s_joint + tol);
    }
}
