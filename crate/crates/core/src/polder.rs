//! Casimir-Polder interaction between two atoms, with its retarded and
//! London limits.
//!
//! Polarizabilities are the dissipation-free sums
//! `alpha[i kappa] = sum_n E_n A_n / (E_n^2 + kappa^2)`. For two different
//! atoms the square of the polarizability is replaced by the product.

use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::model::AtomModel;
use crate::quadrature::{integrate_semi_infinite, QuadResult, QuadratureSpec, Transform};

/// `int_0^inf (u^4 + 2u^3 + 5u^2 + 6u + 3) e^{-2u} du`.
pub const RETARDED_INTEGRAL: f64 = 23.0 / 4.0;

fn retardation_polynomial(k: f64) -> f64 {
    (((k + 2.0) * k + 5.0) * k + 6.0) * k + 3.0
}

fn normalized_product(atom1: &AtomModel, atom2: &AtomModel) -> Option<f64> {
    let norm = atom1.static_polarizability() * atom2.static_polarizability();
    (norm > 0.0).then_some(norm)
}

/// Integral of `alpha1 alpha2 / (alpha1[0] alpha2[0]) P(K) e^{-2K}` over
/// `K = kappa L`.
fn retarded_shape(atom1: &AtomModel, atom2: &AtomModel, separation: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let a0 = atom1.static_polarizability();
    let b0 = atom2.static_polarizability();
    let energy_scale = atom1.min_energy().min(atom2.min_energy());
    // put both the polarizability roll-off and the e^{-2K} decay near y ~ 1
    let scale = (energy_scale * separation).min(1.0);
    let spec = spec.with_transform(Transform::Algebraic);
    let r = integrate_semi_infinite(
        |y| {
            let k = scale * y;
            let kappa = k / separation;
            let ratio = (atom1.polarizability(kappa) / a0) * (atom2.polarizability(kappa) / b0);
            ratio * retardation_polynomial(k) * (-2.0 * k).exp()
        },
        &spec,
    )?;
    Ok(r.scaled(scale))
}

/// Full Casimir-Polder energy,
/// `-1/(pi L^2) int dkappa alpha1 alpha2 (kappa^4 + 2kappa^3/L + 5kappa^2/L^2 + 6kappa/L^3 + 3/L^4) e^{-2 kappa L}`.
pub fn cp_energy(atom1: &AtomModel, atom2: &AtomModel, separation: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    require_positive("separation", separation)?;
    spec.validate()?;
    let Some(norm) = normalized_product(atom1, atom2) else {
        return Ok(QuadResult::analytic(0.0));
    };
    let shape = retarded_shape(atom1, atom2, separation, spec)?;
    Ok(shape.scaled(-norm / (PI * separation.powi(7))))
}

/// Large-distance limit, `-(23/4) alpha1[0] alpha2[0] / (pi L^7)`.
pub fn cp_retarded(atom1: &AtomModel, atom2: &AtomModel, separation: f64) -> Result<f64> {
    require_positive("separation", separation)?;
    let norm = atom1.static_polarizability() * atom2.static_polarizability();
    Ok(-RETARDED_INTEGRAL * norm / (PI * separation.powi(7)))
}

/// Non-retarded limit by quadrature, `-3/(pi L^6) int dkappa alpha1 alpha2`.
pub fn london_energy(atom1: &AtomModel, atom2: &AtomModel, separation: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    require_positive("separation", separation)?;
    spec.validate()?;
    let Some(norm) = normalized_product(atom1, atom2) else {
        return Ok(QuadResult::analytic(0.0));
    };
    let a0 = atom1.static_polarizability();
    let b0 = atom2.static_polarizability();
    let scale = atom1.min_energy().min(atom2.min_energy());
    let spec = spec.with_transform(Transform::Algebraic);
    let r = integrate_semi_infinite(
        |y| {
            let kappa = scale * y;
            (atom1.polarizability(kappa) / a0) * (atom2.polarizability(kappa) / b0)
        },
        &spec,
    )?;
    Ok(r.scaled(-3.0 * norm * scale / (PI * separation.powi(6))))
}

/// Closed form of the London energy, `-3/(2 L^6) sum A_n A'_m / (E_n + E'_m)`.
pub fn london_sum(atom1: &AtomModel, atom2: &AtomModel, separation: f64) -> Result<f64> {
    require_positive("separation", separation)?;
    let mut sum = 0.0;
    for t in atom1.transitions() {
        for u in atom2.transitions() {
            sum += t.weight * u.weight / (t.energy + u.energy);
        }
    }
    Ok(-1.5 * sum / separation.powi(6))
}

/// Ratio of the Casimir-Polder energy to its retarded limit for two identical
/// atoms; tends to 1 at large `L` and grows linearly at small `L`.
pub fn eta_cp(atom: &AtomModel, separation: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    eta_cp_pair(atom, atom, separation, spec)
}

/// `cp_energy / cp_retarded` for two possibly different atoms.
pub fn eta_cp_pair(atom1: &AtomModel, atom2: &AtomModel, separation: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    require_positive("separation", separation)?;
    spec.validate()?;
    if normalized_product(atom1, atom2).is_none() {
        return Err(Error::invalid("atom", "static polarizability must be positive"));
    }
    Ok(retarded_shape(atom1, atom2, separation, spec)?.scaled(1.0 / RETARDED_INTEGRAL))
}
