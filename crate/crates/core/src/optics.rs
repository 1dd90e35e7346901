//! Fresnel reflection on a bulk plasma mirror, in natural units (`c = 1`).
//!
//! On the imaginary-frequency axis every quantity is real and the positive
//! square-root branch is used throughout. The amplitudes follow the sign
//! convention
//!
//! ```text
//! r_TE = (kappa - kappa_m) / (kappa + kappa_m)
//! r_TM = (kappa_m - eps kappa) / (kappa_m + eps kappa)
//! ```
//!
//! so that `r_TM -> -1` in the static limit. Only the product `r1 * r2`
//! enters the cavity physics, which makes this equivalent to conventions
//! where `r_TM -> +1`.
//!
//! The functions below are evaluated in forms free of `0/0` and of the
//! cancellation in `kappa - kappa_m`: with `kappa_m^2 - kappa^2 = omega_p^2`,
//!
//! ```text
//! r_TE = -omega_p^2 / (kappa + kappa_m)^2
//! r_TM = omega_p^2 (xi^2 - kappa s) / (xi^2 s^2 + omega_p^2 kappa s),   s = kappa + kappa_m
//! ```
//!
//! which stay finite at `xi = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::model::PlasmaMirror;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

/// Vacuum mode at imaginary frequency `i xi` with transverse wavevector `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    xi: f64,
    k: f64,
    polarization: Polarization,
}

impl Mode {
    pub fn new(xi: f64, k: f64, polarization: Polarization) -> Result<Self> {
        require_non_negative("xi", xi)?;
        require_non_negative("k", k)?;
        Ok(Mode { xi, k, polarization })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }
}

/// Real-frequency mode in the evanescent sector `omega < k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEvanescentMode {
    omega: f64,
    k: f64,
    polarization: Polarization,
}

impl RealEvanescentMode {
    pub fn new(omega: f64, k: f64, polarization: Polarization) -> Result<Self> {
        require_positive("omega", omega)?;
        require_positive("k", k)?;
        if omega >= k {
            return Err(Error::invalid(
                "omega",
                format!("mode is not evanescent: omega = {omega} >= k = {k}"),
            ));
        }
        Ok(RealEvanescentMode {
            omega,
            k,
            polarization,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    /// Inverse penetration length in vacuum, `sqrt(k^2 - omega^2)`.
    pub fn kappa(&self) -> f64 {
        ((self.k - self.omega) * (self.k + self.omega)).sqrt()
    }
}

/// Plasma-model dielectric function `1 + omega_p^2 / xi^2`.
pub fn epsilon_plasma(xi: f64, mirror: &PlasmaMirror) -> Result<f64> {
    require_non_negative("xi", xi)?;
    if xi == 0.0 {
        return Err(Error::DivergentStaticLimit);
    }
    let ratio = mirror.omega_p() / xi;
    Ok(1.0 + ratio * ratio)
}

pub fn kappa_vacuum(mode: &Mode) -> Result<f64> {
    if mode.xi == 0.0 && mode.k == 0.0 {
        return Err(Error::DegenerateMode);
    }
    Ok(mode.k.hypot(mode.xi))
}

/// `sqrt(k^2 + eps xi^2) = sqrt(k^2 + xi^2 + omega_p^2)`, finite at `xi = 0`.
pub fn kappa_medium(mode: &Mode, mirror: &PlasmaMirror) -> f64 {
    kappa_medium_raw(mode.k.hypot(mode.xi), mirror.omega_p())
}

pub(crate) fn kappa_medium_raw(kappa: f64, omega_p: f64) -> f64 {
    kappa.hypot(omega_p)
}

/// TE amplitude at imaginary frequency as a function of `kappa` (the
/// vacuum decay constant) and the plasma frequency; `omega_p = 0` is the
/// vacuum/vacuum interface.
pub fn te_amplitude(kappa: f64, omega_p: f64) -> f64 {
    if omega_p == 0.0 {
        return 0.0;
    }
    let s = kappa + kappa_medium_raw(kappa, omega_p);
    -(omega_p / s) * (omega_p / s)
}

/// TM amplitude at imaginary frequency; see the module docs for the form used.
/// Requires `kappa > 0` or `xi > 0`.
pub fn tm_amplitude(xi: f64, kappa: f64, omega_p: f64) -> f64 {
    if omega_p == 0.0 {
        return 0.0;
    }
    let s = kappa + kappa_medium_raw(kappa, omega_p);
    let xi2 = xi * xi;
    let w2 = omega_p * omega_p;
    w2 * (xi2 - kappa * s) / (xi2 * s * s + w2 * kappa * s)
}

/// Fresnel amplitude on the imaginary axis, in `[-1, 0]`.
pub fn reflection_imaginary(mode: &Mode, mirror: &PlasmaMirror) -> Result<f64> {
    let kappa = kappa_vacuum(mode)?;
    Ok(amplitude(mode.polarization, mode.xi, kappa, mirror.omega_p()))
}

pub(crate) fn amplitude(p: Polarization, xi: f64, kappa: f64, omega_p: f64) -> f64 {
    match p {
        Polarization::TE => te_amplitude(kappa, omega_p),
        Polarization::TM => tm_amplitude(xi, kappa, omega_p),
    }
}

/// Default half-width of the plasmon-pole window, in units of `omega_p`.
pub const PLASMON_POLE_THRESHOLD: f64 = 1e-8;

/// Fresnel amplitude at real frequency in the evanescent sector, with the
/// default pole window.
pub fn reflection_real_evanescent(mode: &RealEvanescentMode, mirror: &PlasmaMirror) -> Result<f64> {
    reflection_real_evanescent_with_threshold(mode, mirror.omega_p(), PLASMON_POLE_THRESHOLD)
}

/// As [`reflection_real_evanescent`] with an explicit plasma frequency
/// (`0` allowed) and pole window: TM evaluations whose denominator
/// `|kappa_m + eps kappa|` falls below `threshold * omega_p` are rejected.
pub fn reflection_real_evanescent_with_threshold(
    mode: &RealEvanescentMode,
    omega_p: f64,
    threshold: f64,
) -> Result<f64> {
    require_non_negative("omega_p", omega_p)?;
    if omega_p == 0.0 {
        return Ok(0.0);
    }
    let w = mode.omega;
    let kappa = mode.kappa();
    // kappa_m^2 = k^2 - eps w^2 = kappa^2 + omega_p^2
    let kappa_m = kappa.hypot(omega_p);
    match mode.polarization {
        Polarization::TE => {
            let s = kappa + kappa_m;
            Ok(-(omega_p / s) * (omega_p / s))
        }
        Polarization::TM => {
            let eps = 1.0 - (omega_p / w) * (omega_p / w);
            let den = kappa_m + eps * kappa;
            if den.abs() < threshold * omega_p {
                return Err(Error::PlasmonPole {
                    omega_plasmon: plasmon_frequency_raw(mode.k, omega_p),
                });
            }
            Ok((kappa_m - eps * kappa) / den)
        }
    }
}

/// Surface plasmon dispersion, the zero of `kappa_m + eps kappa`:
/// `omega^2 = (omega_p^2 + 2k^2 - sqrt(omega_p^4 + 4k^4)) / 2`.
pub fn plasmon_frequency(k: f64, mirror: &PlasmaMirror) -> Result<f64> {
    require_non_negative("k", k)?;
    Ok(plasmon_frequency_raw(k, mirror.omega_p()))
}

fn plasmon_frequency_raw(k: f64, omega_p: f64) -> f64 {
    // (a - sqrt(b)) / 2 rewritten as 2 w^2 k^2 / (a + sqrt(b)), since a^2 - b = 4 w^2 k^2
    let (a, root) = dispersion_terms(k, omega_p);
    if a == 0.0 {
        return 0.0;
    }
    (2.0 * omega_p * omega_p * k * k / (a + root)).sqrt()
}

/// Brewster frequency, the zero of `kappa_m - eps kappa`:
/// `omega^2 = (omega_p^2 + 2k^2 + sqrt(omega_p^4 + 4k^4)) / 2`.
pub fn brewster_frequency(k: f64, mirror: &PlasmaMirror) -> Result<f64> {
    require_non_negative("k", k)?;
    let (a, root) = dispersion_terms(k, mirror.omega_p());
    Ok(((a + root) / 2.0).sqrt())
}

fn dispersion_terms(k: f64, omega_p: f64) -> (f64, f64) {
    let w2 = omega_p * omega_p;
    let k2 = k * k;
    (w2 + 2.0 * k2, w2.hypot(2.0 * k2))
}
