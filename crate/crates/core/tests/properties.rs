use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use casimir_core::lifshitz::eta_f;
use casimir_core::model::{AtomModel, CavityConfig, PlasmaMirror, Transition, UnitConvert, UnitSystem};
use casimir_core::optics::{
    reflection_imaginary, reflection_real_evanescent, Mode, Polarization, RealEvanescentMode,
};
use casimir_core::polder::{cp_energy, cp_retarded, london_energy, london_sum};
use casimir_core::quadrature::QuadratureSpec;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

fn polarization() -> impl Strategy<Value = Polarization> {
    prop_oneof![Just(Polarization::TE), Just(Polarization::TM)]
}

fn atom() -> impl Strategy<Value = AtomModel> {
    prop::collection::vec((log_uniform(0.1, 10.0), log_uniform(0.01, 10.0)), 1..4).prop_map(|ts| {
        AtomModel::new(ts.into_iter().map(|(e, w)| Transition::new(e, w).unwrap()).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn imaginary_axis_reflection_is_passive(
        omega_p in log_uniform(1e-3, 1e3),
        xi in log_uniform(1e-6, 1e6),
        k in log_uniform(1e-6, 1e6),
        p in polarization(),
    ) {
        let mirror = PlasmaMirror::new(omega_p).unwrap();
        let r = reflection_imaginary(&Mode::new(xi, k, p).unwrap(), &mirror).unwrap();
        prop_assert!(r.abs() <= 1.0);
        prop_assert!(r.is_finite());
    }

    #[test]
    fn evanescent_te_reflection_is_bounded(
        omega_p in log_uniform(1e-3, 1e3),
        k in log_uniform(1e-4, 1e4),
        fraction in 1e-4f64..0.9999,
    ) {
        let mirror = PlasmaMirror::new(omega_p).unwrap();
        let mode = RealEvanescentMode::new(fraction * k, k, Polarization::TE).unwrap();
        prop_assert!(reflection_real_evanescent(&mode, &mirror).unwrap().abs() <= 1.0);
    }

    #[test]
    fn si_round_trip(
        omega_p in log_uniform(1e14, 1e17),
        separation in log_uniform(1e-9, 1e-5),
        area in log_uniform(1e-12, 1e-4),
    ) {
        let cavity = CavityConfig::identical(PlasmaMirror::new(omega_p).unwrap(), separation, area).unwrap();
        let (natural, scale) = cavity.to_natural(UnitSystem::Si).unwrap();
        let back = natural.to_si(&scale).unwrap();
        prop_assert!(((back.separation() - separation) / separation).abs() < 1e-14);
        prop_assert!(((back.area() - area) / area).abs() < 1e-14);
        prop_assert!(((back.mirror1().omega_p() - omega_p) / omega_p).abs() < 1e-14);
    }

    #[test]
    fn atom_round_trip(a in atom()) {
        let si = a.to_si(&casimir_core::model::Scale::new(1e-7).unwrap()).unwrap();
        let (natural, scale) = si.to_natural(UnitSystem::Si).unwrap();
        let back = natural.to_si(&scale).unwrap();
        for (x, y) in back.transitions().iter().zip(si.transitions()) {
            prop_assert!(((x.energy - y.energy) / y.energy).abs() < 1e-14);
            prop_assert!(((x.weight - y.weight) / y.weight).abs() < 1e-14);
        }
    }

    #[test]
    fn pole_identity(a in log_uniform(1e-3, 1e3), b in log_uniform(1e-3, 1e3)) {
        // alpha(i kappa) = A / (E^2 + kappa^2); int A A' / ((a^2+y^2)(b^2+y^2)) dy = (pi/2) A A' / (ab(a+b))
        let spec = QuadratureSpec::with_rel_tol(1e-12);
        let (x, y) = (AtomModel::single(a, 1.0).unwrap(), AtomModel::single(b, 1.0).unwrap());
        let quadrature = london_energy(&x, &y, 1.0, &spec).unwrap().value;
        let closed = -3.0 / PI * (PI / 2.0) / (a + b);
        prop_assert!(((quadrature - closed) / closed).abs() < 1e-10, "{} vs {}", quadrature, closed);
    }

    #[test]
    fn cp_is_symmetric_and_bounded_by_retarded(a in atom(), b in atom(), l in log_uniform(1e-2, 1e2)) {
        let spec = QuadratureSpec::with_rel_tol(1e-10);
        let ab = cp_energy(&a, &b, l, &spec).unwrap().value;
        let ba = cp_energy(&b, &a, l, &spec).unwrap().value;
        prop_assert!(((ab - ba) / ab).abs() < 1e-12);
        let ratio = ab / cp_retarded(&a, &b, l).unwrap();
        prop_assert!(ratio > 0.0 && ratio <= 1.0 + 1e-12, "ratio {}", ratio);
    }

    #[test]
    fn cp_magnitude_decreases_with_distance(a in atom(), l in log_uniform(1e-2, 1e2), step in 1.01f64..3.0) {
        let spec = QuadratureSpec::with_rel_tol(1e-10);
        let near = cp_energy(&a, &a, l, &spec).unwrap().value;
        let far = cp_energy(&a, &a, l * step, &spec).unwrap().value;
        prop_assert!(near < far && far < 0.0);
    }

    #[test]
    fn limit_scaling_degrees(a in atom(), b in atom(), l in log_uniform(1e-2, 1e2), s in log_uniform(0.1, 10.0)) {
        let retarded = cp_retarded(&a, &b, s * l).unwrap() / cp_retarded(&a, &b, l).unwrap();
        let london = london_sum(&a, &b, s * l).unwrap() / london_sum(&a, &b, l).unwrap();
        prop_assert!((retarded / s.powi(-7) - 1.0).abs() < 1e-13);
        prop_assert!((london / s.powi(-6) - 1.0).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduction_depends_only_on_reduced_distance(x in log_uniform(1e-2, 1e2), lambda_p in log_uniform(1e-3, 1e3)) {
        let spec = QuadratureSpec::with_rel_tol(1e-10);
        let reference = eta_f(&CavityConfig::reduced(x).unwrap(), &spec).unwrap().value;
        let mirror = PlasmaMirror::from_lambda_p(lambda_p).unwrap();
        let scaled = CavityConfig::identical(mirror, x * lambda_p, 3.0).unwrap();
        let value = eta_f(&scaled, &spec).unwrap().value;
        assert_relative_eq!(value, reference, max_relative = 1e-9);
        prop_assert!(value > 0.0 && value < 1.0);
    }
}
