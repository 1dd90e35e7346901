//! Casimir force and energy between two plane mirrors from the round-trip
//! (loop) function on the imaginary-frequency axis, in natural units.
//!
//! Per unit area and per polarization,
//!
//! ```text
//! F / A = 1/(4 pi^2) int_0^inf dxi int_xi^inf dkappa  kappa * 2 kappa rho / (1 - rho)
//! E / A = 1/(4 pi^2) int_0^inf dxi int_xi^inf dkappa  kappa * ln(1 - rho)
//! rho   = r1 r2 exp(-2 kappa L)
//! ```
//!
//! Force is positive for attraction; energy is negative for binding.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CavityConfig, SphereConfig};
use crate::optics::{amplitude, Polarization};
use crate::quadrature::{
    integrate_2d_lifshitz, try_integrate_interval, QuadResult, QuadratureSpec, LOOP_STABILITY_LIMIT,
};

/// Contributions of each polarization to a force or energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationSplit {
    pub te: f64,
    pub tm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    pub force: f64,
    pub per_unit_area: f64,
    pub by_polarization: Option<PolarizationSplit>,
    pub quad: QuadResult,
}

impl ForceResult {
    fn from_pressure(pressure: QuadResult, area: f64, split: Option<PolarizationSplit>) -> Self {
        ForceResult {
            force: pressure.value * area,
            per_unit_area: pressure.value,
            by_polarization: split,
            quad: pressure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub energy: f64,
    pub per_unit_area: f64,
    pub by_polarization: Option<PolarizationSplit>,
    pub quad: QuadResult,
}

impl EnergyResult {
    pub(crate) fn from_density(density: QuadResult, area: f64, split: Option<PolarizationSplit>) -> Self {
        EnergyResult {
            energy: density.value * area,
            per_unit_area: density.value,
            by_polarization: split,
            quad: density,
        }
    }
}

/// Value of the open loop function together with `1 - rho` evaluated without
/// cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopValue {
    pub rho: f64,
    pub one_minus_rho: f64,
}

impl LoopValue {
    /// `rho / (1 - rho)`; fails when `rho` reaches the stability limit.
    pub fn closed_loop(&self) -> Result<f64> {
        if self.rho.is_nan() || self.rho >= LOOP_STABILITY_LIMIT {
            return Err(Error::Instability { rho: self.rho });
        }
        Ok(self.rho / self.one_minus_rho)
    }

    pub fn log_one_minus(&self) -> Result<f64> {
        if self.rho.is_nan() || self.rho >= LOOP_STABILITY_LIMIT {
            return Err(Error::Instability { rho: self.rho });
        }
        Ok(self.one_minus_rho.ln())
    }
}

/// Round-trip amplitude `rho = r1 r2 exp(-2 kappa L)` of a cavity.
#[derive(Debug, Clone, Copy)]
pub struct LoopFunction {
    omega_p1: f64,
    omega_p2: f64,
    separation: f64,
    perfect: bool,
}

impl LoopFunction {
    pub fn new(cavity: &CavityConfig) -> Self {
        LoopFunction {
            omega_p1: cavity.mirror1().omega_p(),
            omega_p2: cavity.mirror2().omega_p(),
            separation: cavity.separation(),
            perfect: cavity.is_perfect(),
        }
    }

    pub fn reflection_product(&self, p: Polarization, xi: f64, kappa: f64) -> f64 {
        if self.perfect {
            1.0
        } else {
            amplitude(p, xi, kappa, self.omega_p1) * amplitude(p, xi, kappa, self.omega_p2)
        }
    }

    pub fn evaluate(&self, p: Polarization, xi: f64, kappa: f64) -> LoopValue {
        let rr = self.reflection_product(p, xi, kappa);
        let arg = -2.0 * kappa * self.separation;
        LoopValue {
            rho: rr * arg.exp(),
            one_minus_rho: (1.0 - rr) - rr * arg.exp_m1(),
        }
    }

    pub fn rho(&self, p: Polarization, xi: f64, kappa: f64) -> f64 {
        self.evaluate(p, xi, kappa).rho
    }
}

const WEDGE_NORM: f64 = 1.0 / (4.0 * PI * PI);

/// Wedge integral of `g`, which scales like `L^-power`. The integrand is
/// made dimensionless first so that `spec.abs_tol` means the same thing at
/// every separation.
fn wedge<G>(g: G, separation: f64, power: i32, spec: &QuadratureSpec) -> Result<QuadResult>
where
    G: Fn(f64, f64) -> Result<f64>,
{
    let s = separation.powi(power);
    Ok(integrate_2d_lifshitz(|xi, kappa| Ok(g(xi, kappa)? * s), separation, spec)?.scaled(WEDGE_NORM / s))
}

fn pressure_for(cavity: &CavityConfig, p: Polarization, spec: &QuadratureSpec) -> Result<QuadResult> {
    let lf = LoopFunction::new(cavity);
    let g = |xi: f64, kappa: f64| Ok(2.0 * kappa * kappa * lf.evaluate(p, xi, kappa).closed_loop()?);
    wedge(g, cavity.separation(), 2, spec)
}

fn energy_density_for(
    cavity: &CavityConfig,
    p: Polarization,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    let lf = LoopFunction::new(cavity);
    let g = |xi: f64, kappa: f64| Ok(kappa * lf.evaluate(p, xi, kappa).log_one_minus()?);
    wedge(g, cavity.separation(), 1, spec)
}

/// TE plus TM. A polarization that carries a small share of the total may
/// miss its own relative target while the sum still meets it.
fn sum_polarizations(te: QuadResult, tm: QuadResult, spec: &QuadratureSpec) -> QuadResult {
    let total = te.combine(tm);
    QuadResult {
        converged: total.converged || total.error_estimate <= spec.rel_tol * total.value.abs(),
        ..total
    }
}

/// `pi^2 A / (240 L^4)`.
pub fn casimir_force_ideal(cavity: &CavityConfig) -> ForceResult {
    let pressure = PI * PI / (240.0 * cavity.separation().powi(4));
    ForceResult::from_pressure(QuadResult::analytic(pressure), cavity.area(), None)
}

/// `-pi^2 A / (720 L^3)`.
pub fn casimir_energy_ideal(cavity: &CavityConfig) -> EnergyResult {
    let density = -PI * PI / (720.0 * cavity.separation().powi(3));
    EnergyResult::from_density(QuadResult::analytic(density), cavity.area(), None)
}

pub fn casimir_force(cavity: &CavityConfig, spec: &QuadratureSpec) -> Result<ForceResult> {
    spec.validate()?;
    let te = pressure_for(cavity, Polarization::TE, spec)?;
    let tm = pressure_for(cavity, Polarization::TM, spec)?;
    let area = cavity.area();
    let split = PolarizationSplit {
        te: te.value * area,
        tm: tm.value * area,
    };
    Ok(ForceResult::from_pressure(sum_polarizations(te, tm, spec), area, Some(split)))
}

pub fn casimir_energy(cavity: &CavityConfig, spec: &QuadratureSpec) -> Result<EnergyResult> {
    spec.validate()?;
    let te = energy_density_for(cavity, Polarization::TE, spec)?;
    let tm = energy_density_for(cavity, Polarization::TM, spec)?;
    let area = cavity.area();
    let split = PolarizationSplit {
        te: te.value * area,
        tm: tm.value * area,
    };
    Ok(EnergyResult::from_density(sum_polarizations(te, tm, spec), area, Some(split)))
}

/// Hard cap on the number of round trips summed at a single mode by
/// [`casimir_energy_series`].
pub const MAX_ROUND_TRIPS: usize = 10_000_000;

/// `ln(1 - rho)` as `-sum_n rho^n / n`, stopped once the geometric bound on
/// the remainder drops below `rel` times the partial sum.
pub fn log_one_minus_series(value: LoopValue, rel: f64) -> Result<f64> {
    let rho = value.rho;
    if rho.is_nan() || rho >= LOOP_STABILITY_LIMIT {
        return Err(Error::Instability { rho });
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    let mut power = 1.0;
    let mut sum = 0.0;
    for n in 1..=MAX_ROUND_TRIPS {
        power *= rho;
        sum += power / n as f64;
        let remainder = (power * rho).abs() / ((n + 1) as f64 * value.one_minus_rho);
        if remainder <= rel * sum.abs() {
            return Ok(-sum);
        }
    }
    Err(Error::Divergent {
        terms: MAX_ROUND_TRIPS,
    })
}

/// Energy from the expansion of the logarithm into round trips,
/// `ln(1 - rho) = -(rho + rho^2/2 + ...)`, summed mode by mode.
pub fn casimir_energy_series(cavity: &CavityConfig, spec: &QuadratureSpec) -> Result<EnergyResult> {
    spec.validate()?;
    let lf = LoopFunction::new(cavity);
    let mut total: Option<QuadResult> = None;
    let mut parts = [0.0; 2];
    for (i, p) in Polarization::BOTH.into_iter().enumerate() {
        let g = |xi: f64, kappa: f64| Ok(kappa * log_one_minus_series(lf.evaluate(p, xi, kappa), 1e-16)?);
        let r = wedge(g, cavity.separation(), 1, spec)?;
        parts[i] = r.value * cavity.area();
        total = Some(match total {
            None => r,
            Some(t) => t.combine(r),
        });
    }
    let split = PolarizationSplit {
        te: parts[0],
        tm: parts[1],
    };
    Ok(EnergyResult::from_density(
        total.expect("two polarizations"),
        cavity.area(),
        Some(split),
    ))
}

/// Force reduction factor `F / F_Cas`, for identical mirrors a function of
/// `L / lambda_P` alone.
pub fn eta_f(cavity: &CavityConfig, spec: &QuadratureSpec) -> Result<QuadResult> {
    let ideal = casimir_force_ideal(cavity).per_unit_area;
    Ok(casimir_force(cavity, spec)?.quad.scaled(1.0 / ideal))
}

/// Energy reduction factor `E / E_Cas`.
pub fn eta_e(cavity: &CavityConfig, spec: &QuadratureSpec) -> Result<QuadResult> {
    let ideal = casimir_energy_ideal(cavity).per_unit_area;
    Ok(casimir_energy(cavity, spec)?.quad.scaled(1.0 / ideal))
}

/// `E(L) = -int_L^inf F(L') dL'`, with the force evaluated by
/// [`casimir_force`] at a tenth of the requested tolerance.
///
/// The outer integral runs over `s = L / L'` in `(0, 1]`, where the
/// integrand `F(L / s) L / s^2` vanishes like `s^2`.
pub fn energy_from_force(cavity: &CavityConfig, spec: &QuadratureSpec) -> Result<EnergyResult> {
    spec.validate()?;
    let l = cavity.separation();
    let inner_spec = spec.tightened(0.1);
    let inner_rel_err = Cell::new(0.0f64);
    let inner_converged = Cell::new(true);
    let inner_evals = Cell::new(0usize);
    let integrand = |s: f64| -> Result<f64> {
        let shifted = cavity.with_separation(l / s)?;
        let f = casimir_force(&shifted, &inner_spec)?;
        if f.quad.value != 0.0 {
            inner_rel_err.set(inner_rel_err.get().max(f.quad.error_estimate / f.quad.value.abs()));
        }
        inner_converged.set(inner_converged.get() && f.quad.converged);
        inner_evals.set(inner_evals.get() + f.quad.evaluations);
        // dimensionless, like the wedge integrands
        Ok(f.per_unit_area * l.powi(4) / (s * s))
    };
    let outer_spec = QuadratureSpec {
        rel_tol: 0.9 * spec.rel_tol,
        ..*spec
    };
    let outer = try_integrate_interval(integrand, 0.0, 1.0, &outer_spec)?.scaled(l.powi(-3));
    let error = outer.error_estimate + inner_rel_err.get() * outer.value.abs();
    let density = QuadResult {
        value: -outer.value,
        error_estimate: error,
        evaluations: inner_evals.get(),
        converged: outer.converged && inner_converged.get() && error <= spec.tolerance_for(outer.value),
    };
    Ok(EnergyResult::from_density(density, cavity.area(), None))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereForceResult {
    pub force: f64,
    /// Energy reduction factor of the plane-plane configuration at the
    /// closest-approach distance.
    pub eta_e: f64,
    pub quad: QuadResult,
    pub pfa_questionable: bool,
}

/// Proximity-force estimate `F = 2 pi R |E_pp(L)| / A`, with `E_pp` the
/// plane-plane energy of the mirrors in `material` at the sphere's
/// closest-approach distance.
pub fn sphere_plane_force(
    sphere: &SphereConfig,
    material: &CavityConfig,
    spec: &QuadratureSpec,
) -> Result<SphereForceResult> {
    let cavity = material.with_separation(sphere.closest_approach())?;
    let energy = casimir_energy(&cavity, spec)?;
    let ideal = casimir_energy_ideal(&cavity).per_unit_area;
    let factor = 2.0 * PI * sphere.radius();
    let quad = energy.quad.scaled(-factor);
    Ok(SphereForceResult {
        force: quad.value,
        eta_e: energy.per_unit_area / ideal,
        quad,
        pfa_questionable: sphere.pfa_questionable(),
    })
}
