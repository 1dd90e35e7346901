//! Short-distance Casimir physics from coupled surface plasmons, and the
//! long/short distance power laws.
//!
//! For `L << lambda_P` only TM modes with `kappa ~ k >> omega_p` matter and
//! the TM amplitude becomes the Lorentzian `omega_s^2 / (omega^2 - omega_s^2)`,
//! `omega_s = omega_p / sqrt(2)`. Two routes then give the same energy:
//! the zero-point shift of the coupled plasmons `omega_s sqrt(1 +- e^-kL)`,
//! and the round-trip expansion of the log, whose frequency integrals
//! `I_n = (omega_s / 4) (4n-3)!! / (4n-2)!!` close in terms of double
//! factorials.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::lifshitz::{casimir_force_ideal, EnergyResult, ForceResult};
use crate::model::{CavityConfig, PlasmaMirror, UnitSystem};
use crate::quadrature::{integrate_semi_infinite, sum_until, QuadResult, QuadratureSpec, SeriesSum, Transform};

/// Lorentzian TM amplitude at real frequency `omega`.
pub fn lorentzian_r_tm(omega: f64, mirror: &PlasmaMirror) -> Result<f64> {
    require_non_negative("omega", omega)?;
    let ws = mirror.omega_s();
    let den = (omega - ws) * (omega + ws);
    if den.abs() <= 4.0 * f64::EPSILON * ws * ws {
        return Err(Error::LorentzianPole { omega_s: ws });
    }
    Ok(ws * ws / den)
}

/// Lorentzian TM amplitude at imaginary frequency `i xi`: `-omega_s^2 / (xi^2 + omega_s^2)`.
pub fn lorentzian_r_tm_imaginary(xi: f64, mirror: &PlasmaMirror) -> f64 {
    let ws = mirror.omega_s();
    -ws * ws / (xi * xi + ws * ws)
}

/// Surface plasmons of two identical mirrors, split by their coupling across
/// the gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmonPair {
    pub omega_s: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

/// `omega_s sqrt(1 +- e^-kL)`, the poles of the Lorentzian closed loop.
pub fn coupled_plasmon_frequencies(k: f64, separation: f64, mirror: &PlasmaMirror) -> Result<PlasmonPair> {
    require_non_negative("k", k)?;
    require_positive("separation", separation)?;
    let ws = mirror.omega_s();
    let x = -k * separation;
    Ok(PlasmonPair {
        omega_s: ws,
        omega_plus: ws * (1.0 + x.exp()).sqrt(),
        omega_minus: ws * (-x.exp_m1()).sqrt(),
    })
}

/// Open loop function with Lorentzian amplitudes,
/// `(omega_s^2 / (omega^2 - omega_s^2))^2 e^{-2kL}`.
pub fn rho_tm_lorentzian(omega: f64, k: f64, separation: f64, mirror: &PlasmaMirror) -> Result<f64> {
    let r = lorentzian_r_tm(omega, mirror)?;
    Ok(r * r * (-2.0 * k * separation).exp())
}

/// `(sqrt(1 + u) + sqrt(1 - u) - 2)` for `u = e^-x`, evaluated without
/// cancellation as `-2u^2 / ((a + 1)(b + 1)(a + b))`.
fn zero_point_shift(x: f64) -> f64 {
    let u = (-x).exp();
    let a = (1.0 + u).sqrt();
    let b = (-(-x).exp_m1()).sqrt();
    -2.0 * u * u / ((a + 1.0) * (b + 1.0) * (a + b))
}

fn require_identical(cavity: &CavityConfig, what: &'static str) -> Result<()> {
    if cavity.has_identical_mirrors() {
        Ok(())
    } else {
        Err(Error::NonIdenticalMirrors(what))
    }
}

/// Energy as the shift of the plasmon zero-point energies,
/// `A int d^2k/(4 pi^2) (omega_+ + omega_- - 2 omega_s) / 2`, integrated over
/// `x = kL`.
pub fn plasmon_shift_energy(cavity: &CavityConfig, spec: &QuadratureSpec) -> Result<EnergyResult> {
    require_identical(cavity, "plasmon_shift_energy")?;
    let l = cavity.separation();
    let ws = cavity.mirror1().omega_s();
    let r = integrate_semi_infinite(|x| x * zero_point_shift(x), spec)?;
    let density = r.scaled(ws / (4.0 * PI * l * l));
    Ok(EnergyResult::from_density(density, cavity.area(), None))
}

/// `(4n-3)!! / (4n-2)!!`, built from successive ratios.
pub fn double_factorial_ratio(n: usize) -> f64 {
    assert!(n >= 1, "double_factorial_ratio needs n >= 1");
    let mut c = 0.5;
    for m in 2..=n {
        let m = m as f64;
        c *= (4.0 * m - 5.0) * (4.0 * m - 3.0) / ((4.0 * m - 4.0) * (4.0 * m - 2.0));
    }
    c
}

/// `I_n = int_0^inf dxi/(2 pi) r_TM(i xi)^{2n} = (omega_s / 4)(4n-3)!!/(4n-2)!!`.
pub fn plasmon_moment(n: usize, mirror: &PlasmaMirror) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    Ok(mirror.omega_s() / 4.0 * double_factorial_ratio(n))
}

/// `I_n` by direct quadrature of its defining integral.
pub fn plasmon_moment_quadrature(n: usize, mirror: &PlasmaMirror, spec: &QuadratureSpec) -> Result<QuadResult> {
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    let ws = mirror.omega_s();
    let spec = spec.with_transform(Transform::Algebraic);
    // xi = omega_s y
    let r = integrate_semi_infinite(|y| (1.0 + y * y).powi(-2 * n as i32), &spec)?;
    Ok(r.scaled(ws / (2.0 * PI)))
}

/// Truncation rule for [`short_distance_energy_series`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SeriesTruncation {
    /// Exactly this many terms, no tail correction.
    Terms(usize),
    /// Stop below `tail_tol` and add the estimated tail.
    Auto { tail_tol: f64 },
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation::Auto { tail_tol: 1e-14 }
    }
}

/// `sum_n (1/n^3)(4n-3)!!/(4n-2)!!` under the given truncation.
pub fn plasmon_series_sum(truncation: SeriesTruncation) -> Result<SeriesSum> {
    match truncation {
        SeriesTruncation::Terms(0) => Err(Error::invalid("n_terms", "must be >= 1")),
        SeriesTruncation::Terms(n) => {
            // accumulate the ratio once instead of rebuilding it per term
            let mut c = 0.5;
            let mut sum = 0.5;
            for m in 2..=n {
                let mf = m as f64;
                c *= (4.0 * mf - 5.0) * (4.0 * mf - 3.0) / ((4.0 * mf - 4.0) * (4.0 * mf - 2.0));
                sum += c / (mf * mf * mf);
            }
            Ok(SeriesSum {
                value: sum,
                n_used: n,
                tail: 0.0,
            })
        }
        SeriesTruncation::Auto { tail_tol } => {
            // sum_until calls term(1), term(2), ... in order
            let ratio = std::cell::Cell::new((0usize, 0.5f64));
            sum_until(
                |n| {
                    let (last, mut c) = ratio.get();
                    if n == 1 {
                        c = 0.5;
                    } else if n == last + 1 {
                        let nf = n as f64;
                        c *= (4.0 * nf - 5.0) * (4.0 * nf - 3.0) / ((4.0 * nf - 4.0) * (4.0 * nf - 2.0));
                    } else {
                        c = double_factorial_ratio(n);
                    }
                    ratio.set((n, c));
                    let nf = n as f64;
                    c / (nf * nf * nf)
                },
                tail_tol,
            )
        }
    }
}

/// Short-distance energy of identical plasma mirrors,
/// `E = -A / (16 sqrt(2) L^2 lambda_P) sum_n (1/n^3)(4n-3)!!/(4n-2)!!`.
pub fn short_distance_energy_series(cavity: &CavityConfig, truncation: SeriesTruncation) -> Result<EnergyResult> {
    require_identical(cavity, "short_distance_energy_series")?;
    let sum = plasmon_series_sum(truncation)?;
    let l = cavity.separation();
    let lambda_p = cavity.mirror1().lambda_p(UnitSystem::Natural);
    let prefactor = -1.0 / (16.0 * SQRT_2 * l * l * lambda_p);
    let density = QuadResult {
        value: prefactor * sum.value,
        error_estimate: (prefactor * sum.tail).abs(),
        evaluations: sum.n_used,
        converged: true,
    };
    Ok(EnergyResult::from_density(density, cavity.area(), None))
}

/// Slope of the force reduction factor at short distance,
/// `alpha = 30 / (sqrt(2) pi^2) sum_n (1/n^3)(4n-3)!!/(4n-2)!!`.
pub fn alpha_coefficient(tail_tol: f64) -> Result<SeriesSum> {
    let sum = plasmon_series_sum(SeriesTruncation::Auto { tail_tol })?;
    let factor = 30.0 / (SQRT_2 * PI * PI);
    Ok(SeriesSum {
        value: factor * sum.value,
        n_used: sum.n_used,
        tail: factor * sum.tail,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Long,
    Short,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticForce {
    pub result: ForceResult,
    /// `L / lambda_P >= 10` for `Long`, `<= 0.1` for `Short`.
    pub within_validity: bool,
}

/// Long: `pi^2 A / (240 L^4)`. Short: `alpha pi^2 A / (240 lambda_P L^3)`.
pub fn asymptotic_force(cavity: &CavityConfig, regime: Regime) -> Result<AsymptoticForce> {
    let reduced = cavity.reduced_distance(UnitSystem::Natural);
    let ideal = casimir_force_ideal(cavity);
    Ok(match regime {
        Regime::Long => AsymptoticForce {
            result: ideal,
            within_validity: reduced >= 10.0,
        },
        Regime::Short => {
            let factor = alpha_coefficient(1e-14)?.value * reduced;
            AsymptoticForce {
                result: ForceResult {
                    force: ideal.force * factor,
                    per_unit_area: ideal.per_unit_area * factor,
                    by_polarization: None,
                    quad: ideal.quad.scaled(factor),
                },
                within_validity: reduced <= 0.1,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mirror() -> PlasmaMirror {
        PlasmaMirror::from_lambda_p(1.0).unwrap()
    }

    #[test]
    fn lorentzian_examples() {
        let m = mirror();
        assert_eq!(lorentzian_r_tm_imaginary(0.0, &m), -1.0);
        assert_relative_eq!(lorentzian_r_tm_imaginary(m.omega_s(), &m), -0.5);
        assert!(matches!(
            lorentzian_r_tm(m.omega_s(), &m),
            Err(Error::LorentzianPole { .. })
        ));
        assert_eq!(lorentzian_r_tm(0.0, &m).unwrap(), -1.0);
    }

    #[test]
    fn coupled_frequency_examples() {
        let m = mirror();
        let ws = m.omega_s();
        let p = coupled_plasmon_frequencies(0.0, 1.0, &m).unwrap();
        assert_relative_eq!(p.omega_plus, SQRT_2 * ws);
        assert_eq!(p.omega_minus, 0.0);
        let far = coupled_plasmon_frequencies(100.0, 1.0, &m).unwrap();
        assert_relative_eq!(far.omega_plus, ws, max_relative = 1e-15);
        assert_relative_eq!(far.omega_minus, ws, max_relative = 1e-15);
    }

    #[test]
    fn zero_point_shift_matches_naive_form() {
        for x in [1e-6f64, 0.01, 0.5, 2.0, 6.0] {
            let u = (-x).exp();
            let naive = (1.0 + u).sqrt() + (1.0 - u).sqrt() - 2.0;
            assert_relative_eq!(zero_point_shift(x), naive, max_relative = 1e-9);
        }
        assert_relative_eq!(zero_point_shift(0.0), SQRT_2 - 2.0, max_relative = 1e-15);
        // far tail is u^2 / 4 free of cancellation
        assert_relative_eq!(zero_point_shift(40.0), -(-80.0f64).exp() / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn double_factorial_ratios() {
        assert_eq!(double_factorial_ratio(1), 0.5);
        assert_relative_eq!(double_factorial_ratio(2), 15.0 / 48.0, max_relative = 1e-15);
        assert_relative_eq!(double_factorial_ratio(3), 945.0 / 3840.0, max_relative = 1e-15);
        // no overflow far beyond where the factorials themselves would
        let c = double_factorial_ratio(500);
        assert!(c.is_finite() && c > 0.0);
    }

    #[test]
    fn moments_closed_form() {
        let m = mirror();
        let ws = m.omega_s();
        assert_relative_eq!(plasmon_moment(1, &m).unwrap(), ws / 8.0);
        assert_relative_eq!(plasmon_moment(2, &m).unwrap(), ws / 4.0 * 5.0 / 16.0, max_relative = 1e-15);
        assert!(plasmon_moment(0, &m).is_err());
    }

    #[test]
    fn alpha_value() {
        let a = alpha_coefficient(1e-14).unwrap();
        // reference: -8 * (30 / (sqrt 2 pi^2)) * int x (sqrt(1+e^-x) + sqrt(1-e^-x) - 2) dx
        // at 40 digits, matching an Euler-Maclaurin tail on the exact terms
        assert_relative_eq!(a.value, 1.193_344_052_279_464, max_relative = 1e-13);
        let s = plasmon_series_sum(SeriesTruncation::default()).unwrap();
        assert_relative_eq!(s.value, 0.555_212_405_620_342_5, max_relative = 1e-13);
        assert!((a.value - 1.193).abs() < 1e-3);
        let first = plasmon_series_sum(SeriesTruncation::Terms(1)).unwrap().value * 30.0 / (SQRT_2 * PI * PI);
        assert_relative_eq!(first, 15.0 / (SQRT_2 * PI * PI));
        assert_relative_eq!(first, 1.0747, epsilon = 1e-4);
    }

    #[test]
    fn fixed_truncation_matches_auto_prefix() {
        let fixed = plasmon_series_sum(SeriesTruncation::Terms(50)).unwrap().value;
        let direct: f64 = (1..=50).map(|n| double_factorial_ratio(n) / (n as f64).powi(3)).sum();
        assert_relative_eq!(fixed, direct, max_relative = 1e-14);
        assert!(plasmon_series_sum(SeriesTruncation::Terms(0)).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        let cavity = CavityConfig::reduced(0.01).unwrap();
        let long = asymptotic_force(&cavity, Regime::Long).unwrap();
        assert_eq!(long.result, casimir_force_ideal(&cavity));
        assert!(!long.within_validity);
        let short = asymptotic_force(&cavity, Regime::Short).unwrap();
        assert!(short.within_validity);
        let alpha = alpha_coefficient(1e-14).unwrap().value;
        assert_relative_eq!(short.result.force / long.result.force, alpha * 0.01, max_relative = 1e-14);
    }

    #[test]
    fn two_routes_agree() {
        let spec = QuadratureSpec::with_rel_tol(1e-12);
        for &l in &[0.001, 0.05] {
            let cavity = CavityConfig::reduced(l).unwrap();
            let shift = plasmon_shift_energy(&cavity, &spec).unwrap();
            let series = short_distance_energy_series(&cavity, SeriesTruncation::default()).unwrap();
            assert!(shift.quad.converged);
            assert_relative_eq!(shift.energy, series.energy, max_relative = 1e-11);
        }
    }

    #[test]
    fn moments_by_quadrature() {
        let m = mirror();
        let spec = QuadratureSpec::with_rel_tol(1e-12);
        for n in [1, 2, 3, 7] {
            let q = plasmon_moment_quadrature(n, &m, &spec).unwrap();
            assert_relative_eq!(q.value, plasmon_moment(n, &m).unwrap(), max_relative = 1e-11);
        }
    }

    #[test]
    fn closed_loop_poles_and_level_repulsion() {
        let m = mirror();
        for &(k, l) in &[(0.3, 0.1), (2.0, 0.5), (10.0, 0.01)] {
            let p = coupled_plasmon_frequencies(k, l, &m).unwrap();
            assert_relative_eq!(rho_tm_lorentzian(p.omega_plus, k, l, &m).unwrap(), 1.0, max_relative = 1e-12);
            assert_relative_eq!(rho_tm_lorentzian(p.omega_minus, k, l, &m).unwrap(), 1.0, max_relative = 1e-12);
            let mean_sq = 0.5 * (p.omega_plus.powi(2) + p.omega_minus.powi(2));
            assert_relative_eq!(mean_sq, p.omega_s * p.omega_s, max_relative = 1e-14);
            assert!(p.omega_minus < p.omega_s && p.omega_s < p.omega_plus);
        }
    }

    #[test]
    fn identical_mirrors_required() {
        let cavity = CavityConfig::new(
            PlasmaMirror::new(1.0).unwrap(),
            PlasmaMirror::new(2.0).unwrap(),
            0.1,
            1.0,
        )
        .unwrap();
        assert!(matches!(
            short_distance_energy_series(&cavity, SeriesTruncation::default()),
            Err(Error::NonIdenticalMirrors(_))
        ));
        assert!(plasmon_shift_energy(&cavity, &QuadratureSpec::default()).is_err());
    }
}
