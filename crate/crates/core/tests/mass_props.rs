use pdm_core::reference::{KratzerParams, MorseParams, Reference};
use pdm_core::{CorrectionSign, MassProfile, TargetProblem};
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = MassProfile> {
    prop_oneof![
        Just(MassProfile::Uniform),
        (0.2f64..8.0, 0.2f64..4.0).prop_map(|(a, q)| MassProfile::lorentzian(a, q).unwrap()),
        (0.2f64..8.0, 0.2f64..4.0).prop_map(|(a, b)| MassProfile::squared_lorentzian(a, b).unwrap()),
        (0.1f64..3.0).prop_map(|q| MassProfile::exponential(q).unwrap()),
    ]
}

proptest! {
    #[test]
    fn mapping_round_trip(p in profile(), x in -6.0f64..6.0) {
        let y = p.mapping(x).unwrap();
        let back = p.inverse_mapping(y).unwrap();
        prop_assert!((back - x).abs() <= 1e-9 * (1.0 + x.abs()), "{} {} -> {} -> {}", p, x, y, back);
    }

    #[test]
    fn mapping_is_increasing_with_slope_sqrt_m(p in profile(), x in -5.0f64..5.0) {
        let h = 1e-5;
        let (lo, hi) = (p.mapping(x - h).unwrap(), p.mapping(x + h).unwrap());
        prop_assert!(hi > lo);
        let slope = (hi - lo) / (2.0 * h);
        let want = p.mass(x).unwrap().sqrt();
        prop_assert!((slope - want).abs() <= 1e-6 * (1.0 + want), "slope {} vs √m {}", slope, want);
    }

    #[test]
    fn mass_derivatives_match_finite_differences(p in profile(), x in -4.0f64..4.0) {
        let h = 1e-5;
        let fd1 = (p.mass(x + h).unwrap() - p.mass(x - h).unwrap()) / (2.0 * h);
        let fd2 = (p.dmass(x + h).unwrap() - p.dmass(x - h).unwrap()) / (2.0 * h);
        let (d1, d2) = (p.dmass(x).unwrap(), p.d2mass(x).unwrap());
        prop_assert!((fd1 - d1).abs() <= 1e-6 * (1.0 + d1.abs()));
        prop_assert!((fd2 - d2).abs() <= 1e-6 * (1.0 + d2.abs()));
        prop_assert!(p.mass(x).unwrap() > 0.0);
    }

    #[test]
    fn profile_spec_round_trips(p in profile()) {
        let parsed: MassProfile = p.to_string().parse().unwrap();
        prop_assert_eq!(parsed, p);
    }

    #[test]
    fn correction_sign_flips_the_term(a in 0.5f64..6.0, q in 0.5f64..3.0, x in -3.0f64..3.0) {
        let r = Reference::Kratzer(KratzerParams::new(4.0, 1.0, 0).unwrap());
        let tp = TargetProblem::new(r, MassProfile::lorentzian(a, q).unwrap()).unwrap();
        let minus = tp.with_correction_sign(CorrectionSign::Minus);
        prop_assert_eq!(tp.correction(x), -minus.correction(x));
        // the lorentzian correction is -(2q + x²)/(8a²(q + x²)) times s
        let want = -(2.0 * q + x * x) / (8.0 * a * a * (q + x * x));
        prop_assert!((tp.correction(x) - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn kratzer_energies_increase_below_de(de in 0.1f64..40.0, ye in 0.2f64..3.0, ell in 0u32..4, n in 0usize..30) {
        let p = KratzerParams::new(de, ye, ell).unwrap();
        let (e0, e1) = (p.energy(n), p.energy(n + 1));
        prop_assert!(e0 < e1 && e1 < de);
    }

    #[test]
    fn morse_l0_matches_textbook(d in 1.0f64..40.0, a in 0.3f64..2.0, n in 0usize..6) {
        let p = MorseParams::new(d, a, 1.0, 0).unwrap();
        prop_assume!(n < p.bound_state_count());
        let w = a * (2.0 * d).sqrt();
        let nh = n as f64 + 0.5;
        let textbook = -d + w * nh - (w * nh).powi(2) / (4.0 * d);
        prop_assert!((p.energy(n).unwrap() - textbook).abs() <= 1e-12 * d);
    }
}
