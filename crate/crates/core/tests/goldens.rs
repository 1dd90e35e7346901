//! Reduction factors frozen from an independent 20-digit evaluation of the
//! Lifshitz integrals in (xi, k) coordinates with textbook Fresnel forms.

use approx::assert_relative_eq;
use casimir_core::lifshitz::{eta_e, eta_f};
use casimir_core::model::CavityConfig;
use casimir_core::quadrature::QuadratureSpec;

const GOLDENS: [(f64, f64, f64); 3] = [
    (0.1, 0.104_720_831_093_437_7, 0.142_810_194_661_518_3),
    (1.0, 0.523_844_784_210_226_1, 0.604_079_541_589_209_6),
    (10.0, 0.920_860_511_886_860_4, 0.939_816_466_253_818_7),
];

#[test]
fn reduction_factors_match_reference() {
    let spec = QuadratureSpec::with_rel_tol(1e-12);
    for (x, force, energy) in GOLDENS {
        let cavity = CavityConfig::reduced(x).unwrap();
        let f = eta_f(&cavity, &spec).unwrap();
        let e = eta_e(&cavity, &spec).unwrap();
        assert!(f.converged && e.converged);
        assert_relative_eq!(f.value, force, max_relative = 1e-11);
        assert_relative_eq!(e.value, energy, max_relative = 1e-11);
    }
}

#[test]
fn reduction_factors_at_loose_tolerance() {
    let spec = QuadratureSpec::with_rel_tol(1e-6);
    for (x, force, energy) in GOLDENS {
        let cavity = CavityConfig::reduced(x).unwrap();
        assert_relative_eq!(eta_f(&cavity, &spec).unwrap().value, force, max_relative = 1e-6);
        assert_relative_eq!(eta_e(&cavity, &spec).unwrap().value, energy, max_relative = 1e-6);
    }
}
