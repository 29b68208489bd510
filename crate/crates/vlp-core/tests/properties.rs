//! Property tests of the geometric and estimation invariants.

use proptest::prelude::*;
use vlp_core::channel::NoiseCoefficients;
use vlp_core::estimation::{
    ml_los, rml_los, rml_nlos_from_mean, LosCoefficient, NlosCoefficient, SufficientStats,
};
use vlp_core::geometry::{normal_from_tilt, reflection_point, steering_normal, tilt_angles_from_normal, OirsElement};
use vlp_core::Vec3;

fn walls() -> impl Strategy<Value = Vec3> {
    prop_oneof![
        Just(Vec3::EY),
        Just(-Vec3::EY),
        Just(Vec3::EX),
        Just(-Vec3::EX),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// The steering normal is unit and bisects its two arms.
    #[test]
    fn steering_normal_bisects(
        qx in 0.1f64..4.9, qy in 0.1f64..4.9, qz in 1.0f64..3.0,
        ux in 0.1f64..4.9, uy in 0.1f64..4.9,
        wx in 0.5f64..4.5, wz in 0.5f64..2.5,
    ) {
        let w = Vec3::new(wx, 0.0, wz);
        let q = Vec3::new(qx, qy.max(0.2), qz);
        let u = Vec3::new(ux, uy.max(0.2), 0.0);
        prop_assume!((q - w).norm() > 1e-3 && (u - w).norm() > 1e-3);
        let o = steering_normal(q, w, u).unwrap();
        prop_assert!(o.is_unit(1e-12));
        let a1 = o.angle_to(q - w);
        let a2 = o.angle_to(u - w);
        prop_assert!((a1 - a2).abs() < 1e-10, "angles {a1} vs {a2}");
    }

    /// Tilt angles and the normal they describe are mutually inverse.
    #[test]
    fn tilt_round_trip(
        alpha in -1.39f64..1.39, // +-80 degrees
        beta in -1.39f64..1.39,
        wall in walls(),
    ) {
        let o = normal_from_tilt(alpha, beta, wall);
        prop_assert!(o.is_unit(1e-12));
        let t = tilt_angles_from_normal(o, wall).unwrap();
        prop_assert!((t.alpha - alpha).abs() < 1e-10);
        prop_assert!((t.beta - beta).abs() < 1e-10);
    }

    /// Any accepted reflection point sits on the mirror plane and obeys the
    /// specular law.
    #[test]
    fn reflection_specular_law(
        alpha in -0.5f64..0.5,
        beta in -0.5f64..0.5,
        ux in 0.5f64..4.5, uy in 0.5f64..4.5,
    ) {
        let mut el = OirsElement::at_rest(Vec3::new(2.5, 0.0, 1.5), 2.0, 2.0, Vec3::EY, 0.95);
        el.alpha = alpha;
        el.beta = beta;
        let q = Vec3::new(2.5, 2.5, 3.0);
        let u = Vec3::new(ux, uy, 0.0);
        if let Ok(r) = reflection_point(q, u, &el) {
            let o = el.normal();
            prop_assert!((r - el.center).dot(o).abs() < 1e-12);
            let inc = (q - r).angle_to(o);
            let out = (u - r).angle_to(o);
            prop_assert!((inc - out).abs() < 1e-10);
        }
    }

    /// Estimates are functions of the sufficient statistics only: sample
    /// order never matters.
    #[test]
    fn estimators_permutation_invariant(
        raw in prop::collection::vec(0.2f64..3.0, 2..12),
        shift in 0usize..11,
    ) {
        let scale = 1e-6;
        let samples: Vec<f64> = raw.iter().map(|x| x * scale).collect();
        let mut rotated = samples.clone();
        rotated.rotate_left(shift % samples.len());
        let xi = LosCoefficient { xi: 3e-6 };
        let coeffs = NoiseCoefficients { a: 3.4e-18, b: 1.602e-12 };
        let m = 0.6460587703487338;
        let s_a = SufficientStats::from_samples(&samples);
        let s_b = SufficientStats::from_samples(&rotated);
        let ml_a = ml_los(&s_a, &xi, &coeffs, m).unwrap().value;
        let ml_b = ml_los(&s_b, &xi, &coeffs, m).unwrap().value;
        // identical up to floating-point summation order in the stats
        prop_assert!((ml_a - ml_b).abs() <= 1e-12 * ml_a);
        let r_a = rml_los(&s_a, &xi, m).unwrap().value;
        let r_b = rml_los(&s_b, &xi, m).unwrap().value;
        prop_assert!((r_a - r_b).abs() <= 1e-12 * r_a);
    }

    /// The closed-form cubic root really solves the stationarity equation.
    #[test]
    fn cubic_root_is_stationary(
        log_omega in -6.5f64..-4.0,
        s in 1.0f64..4.5,
        log_t1 in -9.0f64..-6.0,
    ) {
        let coeff = NlosCoefficient { omega: 10f64.powf(log_omega), s_n: s };
        let t1 = 10f64.powf(log_t1);
        let d = rml_nlos_from_mean(t1, &coeff).unwrap();
        prop_assert!(d > 0.0);
        let resid = t1 * (s + d) * (s + d) * d - coeff.omega;
        prop_assert!(resid.abs() < 1e-9 * coeff.omega, "residual {resid:e}");
    }
}
