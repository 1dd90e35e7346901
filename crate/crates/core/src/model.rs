//! Physical constants, unit handling and the configuration records shared by
//! every computation.
//!
//! All physics in this crate runs in natural units: `hbar = c = 1`, so
//! frequencies, wavevectors and energies are inverse lengths. The length unit
//! itself is free. Converting an SI configuration with [`UnitConvert::to_natural`]
//! picks the characteristic wavelength of the system (the plasma wavelength of
//! the first mirror, or the wavelength of the lowest atomic transition) as the
//! unit, so the reduced quantities `L / lambda_P` and `L / lambda_A` can be
//! read straight off the natural values.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// J per eV (exact).
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;
/// hbar * c in J m.
pub const HBAR_C: f64 = HBAR * SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    /// `hbar = c = 1`, lengths in a caller-chosen unit.
    Natural,
    /// rad/s, m, m^2, J.
    Si,
}

/// Size of the natural length unit in metres.
///
/// Converting SI input produces a `Scale`; converting natural input is the
/// identity and yields `Scale::unit()`, which treats one natural length as
/// one metre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scale {
    pub length_m: f64,
}

impl Scale {
    pub fn new(length_m: f64) -> Result<Self> {
        require_positive("length_m", length_m)?;
        Ok(Scale { length_m })
    }

    pub fn unit() -> Self {
        Scale { length_m: 1.0 }
    }

    pub fn length_to_si(&self, length: f64) -> f64 {
        length * self.length_m
    }

    pub fn length_to_natural(&self, metres: f64) -> f64 {
        metres / self.length_m
    }

    pub fn area_to_si(&self, area: f64) -> f64 {
        area * self.length_m * self.length_m
    }

    /// Angular frequency (or `c` times a wavevector) in rad/s.
    pub fn frequency_to_si(&self, omega: f64) -> f64 {
        omega * SPEED_OF_LIGHT / self.length_m
    }

    pub fn energy_to_si(&self, energy: f64) -> f64 {
        energy * HBAR_C / self.length_m
    }

    pub fn force_to_si(&self, force: f64) -> f64 {
        force * HBAR_C / (self.length_m * self.length_m)
    }

    pub fn pressure_to_si(&self, pressure: f64) -> f64 {
        pressure * HBAR_C / self.length_m.powi(4)
    }
}

/// Conversion between SI records and their natural-unit counterparts.
pub trait UnitConvert: Sized {
    /// Returns the record in natural units together with the length scale used.
    /// Natural input is returned unchanged.
    fn to_natural(&self, units: UnitSystem) -> Result<(Self, Scale)>;

    /// Inverse of [`to_natural`](Self::to_natural) for SI input.
    fn to_si(&self, scale: &Scale) -> Result<Self>;
}

/// Bulk metallic mirror described by the lossless plasma model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmaMirror {
    omega_p: f64,
}

impl PlasmaMirror {
    pub fn new(omega_p: f64) -> Result<Self> {
        require_positive("omega_p", omega_p)?;
        Ok(PlasmaMirror { omega_p })
    }

    /// Mirror with plasma wavelength `lambda_p`, in natural units.
    pub fn from_lambda_p(lambda_p: f64) -> Result<Self> {
        require_positive("lambda_p", lambda_p)?;
        PlasmaMirror::new(2.0 * PI / lambda_p)
    }

    /// Mirror with plasma wavelength `lambda_p` in metres.
    pub fn from_lambda_p_si(lambda_p: f64) -> Result<Self> {
        require_positive("lambda_p", lambda_p)?;
        PlasmaMirror::new(2.0 * PI * SPEED_OF_LIGHT / lambda_p)
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    /// `2 pi c / omega_p` in the unit system the mirror is expressed in.
    pub fn lambda_p(&self, units: UnitSystem) -> f64 {
        match units {
            UnitSystem::Natural => 2.0 * PI / self.omega_p,
            UnitSystem::Si => 2.0 * PI * SPEED_OF_LIGHT / self.omega_p,
        }
    }

    /// Large-wavevector surface plasmon frequency `omega_p / sqrt(2)`.
    pub fn omega_s(&self) -> f64 {
        self.omega_p * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Two plane mirrors at distance `separation` with facing area `area`.
///
/// `perfect` switches both mirrors to ideal reflectors (`r = 1` in both
/// polarizations); the plasma parameters are then only used to report the
/// reduced distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    mirror1: PlasmaMirror,
    mirror2: PlasmaMirror,
    separation: f64,
    area: f64,
    perfect: bool,
}

impl CavityConfig {
    pub fn new(
        mirror1: PlasmaMirror,
        mirror2: PlasmaMirror,
        separation: f64,
        area: f64,
    ) -> Result<Self> {
        require_positive("separation", separation)?;
        require_positive("area", area)?;
        Ok(CavityConfig {
            mirror1,
            mirror2,
            separation,
            area,
            perfect: false,
        })
    }

    pub fn identical(mirror: PlasmaMirror, separation: f64, area: f64) -> Result<Self> {
        CavityConfig::new(mirror, mirror, separation, area)
    }

    /// Natural-unit cavity of unit area between identical mirrors with
    /// `lambda_p = 1`, so `separation` is the reduced distance `L / lambda_P`.
    pub fn reduced(l_over_lambda_p: f64) -> Result<Self> {
        CavityConfig::identical(PlasmaMirror::from_lambda_p(1.0)?, l_over_lambda_p, 1.0)
    }

    pub fn with_perfect_reflection(mut self) -> Self {
        self.perfect = true;
        self
    }

    pub fn with_separation(self, separation: f64) -> Result<Self> {
        CavityConfig::new(self.mirror1, self.mirror2, separation, self.area)
            .map(|c| CavityConfig { perfect: self.perfect, ..c })
    }

    pub fn mirror1(&self) -> &PlasmaMirror {
        &self.mirror1
    }

    pub fn mirror2(&self) -> &PlasmaMirror {
        &self.mirror2
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn is_perfect(&self) -> bool {
        self.perfect
    }

    pub fn has_identical_mirrors(&self) -> bool {
        self.mirror1 == self.mirror2
    }

    /// `L / lambda_P` of the first mirror.
    pub fn reduced_distance(&self, units: UnitSystem) -> f64 {
        self.separation / self.mirror1.lambda_p(units)
    }

    /// Set when `A < L^2`, where the per-area formulas stop describing a
    /// physical plate pair.
    pub fn small_area(&self) -> bool {
        self.area < self.separation * self.separation
    }
}

impl UnitConvert for CavityConfig {
    fn to_natural(&self, units: UnitSystem) -> Result<(Self, Scale)> {
        match units {
            UnitSystem::Natural => Ok((*self, Scale::unit())),
            UnitSystem::Si => {
                let scale = Scale::new(self.mirror1.lambda_p(UnitSystem::Si))?;
                let to_nat = |omega: f64| omega * scale.length_m / SPEED_OF_LIGHT;
                let cavity = CavityConfig::new(
                    PlasmaMirror::new(to_nat(self.mirror1.omega_p))?,
                    PlasmaMirror::new(to_nat(self.mirror2.omega_p))?,
                    self.separation / scale.length_m,
                    self.area / (scale.length_m * scale.length_m),
                )?;
                Ok((CavityConfig { perfect: self.perfect, ..cavity }, scale))
            }
        }
    }

    fn to_si(&self, scale: &Scale) -> Result<Self> {
        let cavity = CavityConfig::new(
            PlasmaMirror::new(scale.frequency_to_si(self.mirror1.omega_p))?,
            PlasmaMirror::new(scale.frequency_to_si(self.mirror2.omega_p))?,
            scale.length_to_si(self.separation),
            scale.area_to_si(self.area),
        )?;
        Ok(CavityConfig { perfect: self.perfect, ..cavity })
    }
}

/// One atomic transition: excitation energy and dipole weight.
///
/// The weight is normalized so that `weight / energy` is a volume, i.e. the
/// static contribution of the transition to the polarizability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub energy: f64,
    pub weight: f64,
}

impl Transition {
    pub fn new(energy: f64, weight: f64) -> Result<Self> {
        require_positive("transition energy", energy)?;
        require_non_negative("transition weight", weight)?;
        Ok(Transition { energy, weight })
    }

    /// SI transition from an energy in eV and a weight in eV·Å³.
    pub fn from_ev_angstrom3(energy_ev: f64, weight_ev_a3: f64) -> Result<Self> {
        Transition::new(energy_ev * ELECTRON_VOLT, weight_ev_a3 * ELECTRON_VOLT * 1e-30)
    }
}

/// Dissipation-free atom: a list of transitions defining `alpha(i c kappa)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    transitions: Vec<Transition>,
}

impl AtomModel {
    /// At least one transition with a positive weight is required, except in
    /// the explicitly non-interacting [`AtomModel::inert`] case.
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::invalid("transitions", "list is empty"));
        }
        for t in &transitions {
            Transition::new(t.energy, t.weight)?;
        }
        if transitions.iter().all(|t| t.weight == 0.0) {
            return Err(Error::invalid("transitions", "all dipole weights vanish"));
        }
        Ok(AtomModel { transitions })
    }

    /// Zero-polarizability atom. Every interaction with it vanishes.
    pub fn inert(energy: f64) -> Result<Self> {
        Ok(AtomModel {
            transitions: vec![Transition::new(energy, 0.0)?],
        })
    }

    pub fn single(energy: f64, weight: f64) -> Result<Self> {
        AtomModel::new(vec![Transition::new(energy, weight)?])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Polarizability at imaginary frequency `i kappa` (natural units).
    pub fn polarizability(&self, kappa: f64) -> f64 {
        let k2 = kappa * kappa;
        self.transitions
            .iter()
            .map(|t| t.energy * t.weight / (t.energy * t.energy + k2))
            .sum()
    }

    pub fn static_polarizability(&self) -> f64 {
        self.transitions.iter().map(|t| t.weight / t.energy).sum()
    }

    pub fn min_energy(&self) -> f64 {
        self.transitions
            .iter()
            .map(|t| t.energy)
            .fold(f64::INFINITY, f64::min)
    }

    /// `2 pi / min(E_n)` in natural units.
    pub fn lambda_a(&self) -> f64 {
        2.0 * PI / self.min_energy()
    }

    /// SI atom expressed in natural units of the given length scale. Used to
    /// put a second atom on the scale of the first.
    pub fn to_natural_in(&self, scale: &Scale) -> Self {
        let l = scale.length_m;
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                energy: t.energy * l / HBAR_C,
                weight: t.weight / (HBAR_C * l * l),
            })
            .collect();
        AtomModel { transitions }
    }

    /// `2 pi hbar c / min(E_n)` for an SI atom, in metres.
    pub fn lambda_a_si(&self) -> f64 {
        2.0 * PI * HBAR_C / self.min_energy()
    }
}

impl UnitConvert for AtomModel {
    fn to_natural(&self, units: UnitSystem) -> Result<(Self, Scale)> {
        match units {
            UnitSystem::Natural => Ok((self.clone(), Scale::unit())),
            UnitSystem::Si => {
                let scale = Scale::new(self.lambda_a_si())?;
                Ok((self.to_natural_in(&scale), scale))
            }
        }
    }

    fn to_si(&self, scale: &Scale) -> Result<Self> {
        let l = scale.length_m;
        let transitions = self
            .transitions
            .iter()
            .map(|t| Transition {
                energy: t.energy * HBAR_C / l,
                weight: t.weight * HBAR_C * l * l,
            })
            .collect();
        Ok(AtomModel { transitions })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereConfig {
    radius: f64,
    closest_approach: f64,
}

impl SphereConfig {
    pub fn new(radius: f64, closest_approach: f64) -> Result<Self> {
        require_positive("radius", radius)?;
        require_positive("closest_approach", closest_approach)?;
        Ok(SphereConfig {
            radius,
            closest_approach,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn closest_approach(&self) -> f64 {
        self.closest_approach
    }

    /// Proximity-force estimate is doubtful once the gap reaches the radius.
    pub fn pfa_questionable(&self) -> bool {
        self.closest_approach >= self.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gold_like() -> CavityConfig {
        let m = PlasmaMirror::new(1.37e16).unwrap();
        CavityConfig::identical(m, 136e-9, 1e-10).unwrap()
    }

    #[test]
    fn gold_like_reduced_distance() {
        let cavity = gold_like();
        let lambda_p = cavity.mirror1().lambda_p(UnitSystem::Si);
        assert_relative_eq!(lambda_p, 137.49e-9, max_relative = 1e-3);
        let (nat, scale) = cavity.to_natural(UnitSystem::Si).unwrap();
        assert_relative_eq!(scale.length_m, lambda_p);
        assert_relative_eq!(nat.separation(), 136e-9 / lambda_p, max_relative = 1e-15);
        assert_relative_eq!(nat.separation(), 0.989, max_relative = 1e-3);
        assert_relative_eq!(nat.mirror1().omega_p(), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(
            nat.reduced_distance(UnitSystem::Natural),
            cavity.reduced_distance(UnitSystem::Si),
            max_relative = 1e-14
        );
    }

    #[test]
    fn natural_input_is_unchanged() {
        let cavity = CavityConfig::reduced(0.3).unwrap();
        let (nat, scale) = cavity.to_natural(UnitSystem::Natural).unwrap();
        assert_eq!(nat, cavity);
        assert_eq!(scale, Scale::unit());
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(matches!(
            PlasmaMirror::new(0.0),
            Err(Error::Invalid { field: "omega_p", .. })
        ));
        assert!(PlasmaMirror::new(f64::NAN).is_err());
        let m = PlasmaMirror::new(1.0).unwrap();
        assert!(matches!(
            CavityConfig::identical(m, -1.0, 1.0),
            Err(Error::Invalid { field: "separation", .. })
        ));
        assert!(CavityConfig::identical(m, 1.0, f64::INFINITY).is_err());
        assert!(SphereConfig::new(0.0, 1.0).is_err());
        assert!(AtomModel::new(vec![]).is_err());
        assert!(AtomModel::single(1.0, 0.0).is_err());
        assert!(AtomModel::single(-1.0, 1.0).is_err());
    }

    #[test]
    fn lambda_p_times_omega_p() {
        let m = PlasmaMirror::new(3.7e15).unwrap();
        assert_relative_eq!(
            m.omega_p() * m.lambda_p(UnitSystem::Si),
            2.0 * PI * SPEED_OF_LIGHT,
            max_relative = 1e-15
        );
    }

    #[test]
    fn diagnostics() {
        let m = PlasmaMirror::new(1.0).unwrap();
        assert!(CavityConfig::identical(m, 2.0, 1.0).unwrap().small_area());
        assert!(!CavityConfig::identical(m, 0.5, 1.0).unwrap().small_area());
        assert!(SphereConfig::new(1.0, 1.0).unwrap().pfa_questionable());
        assert!(!SphereConfig::new(10.0, 1.0).unwrap().pfa_questionable());
    }

    #[test]
    fn atom_round_trip_and_polarizability() {
        let atom = AtomModel::new(vec![
            Transition::from_ev_angstrom3(11.0, 30.0).unwrap(),
            Transition::from_ev_angstrom3(20.0, 5.0).unwrap(),
        ])
        .unwrap();
        let (nat, scale) = atom.to_natural(UnitSystem::Si).unwrap();
        assert_relative_eq!(nat.min_energy(), 2.0 * PI, max_relative = 1e-14);
        // static polarizability is a volume
        let alpha_si = atom.static_polarizability();
        assert_relative_eq!(
            nat.static_polarizability() * scale.length_m.powi(3),
            alpha_si,
            max_relative = 1e-14
        );
        let back = nat.to_si(&scale).unwrap();
        for (a, b) in atom.transitions().iter().zip(back.transitions()) {
            assert_relative_eq!(a.energy, b.energy, max_relative = 1e-14);
            assert_relative_eq!(a.weight, b.weight, max_relative = 1e-14);
        }
        assert_relative_eq!(nat.polarizability(0.0), nat.static_polarizability());
        assert!(nat.polarizability(1.0) < nat.polarizability(0.5));
    }
}
