//! Cavity configuration files and atom tables.
//!
//! A cavity file is flat TOML. SI files use `omega_p_rad_s` or `lambda_p_nm`
//! (exactly one), `separation_nm` and `area_um2`; natural-unit files use
//! `lambda_p` or `omega_p`, `separation` and `area`. A JSON record printed by
//! the CLI is accepted too, its `inputs` object being read as the cavity.
//!
//! An atom table has one transition per line, `E_n` in eV and `A_n` in
//! eV·Å³, separated by whitespace or a comma. `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AtomModel, CavityConfig, PlasmaMirror, Transition, UnitSystem};

/// Plasma frequency used when an SI cavity names no material, rad/s.
/// Roughly gold; not a fitted value.
pub const DEFAULT_OMEGA_P_RAD_S: f64 = 1.37e16;

const NM: f64 = 1e-9;
const UM2: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CavityInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p_rad_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_p_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation_nm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_um2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
}

impl CavityInputs {
    fn has_si(&self) -> bool {
        self.omega_p_rad_s.is_some() || self.lambda_p_nm.is_some() || self.separation_nm.is_some() || self.area_um2.is_some()
    }

    fn has_natural(&self) -> bool {
        self.omega_p.is_some() || self.lambda_p.is_some() || self.separation.is_some() || self.area.is_some()
    }

    /// Unit system implied by the keys present; `None` when there are none.
    pub fn units(&self) -> Result<Option<UnitSystem>> {
        match (self.has_si(), self.has_natural()) {
            (true, true) => Err(Error::invalid("config", "mixes SI and natural-unit keys")),
            (true, false) => Ok(Some(UnitSystem::Si)),
            (false, true) => Ok(Some(UnitSystem::Natural)),
            (false, false) => Ok(None),
        }
    }

    /// The mirror described by the inputs, with the default material when
    /// none is given.
    pub fn mirror(&self, units: UnitSystem) -> Result<PlasmaMirror> {
        match units {
            UnitSystem::Si => match (self.omega_p_rad_s, self.lambda_p_nm) {
                (Some(_), Some(_)) => Err(Error::invalid("omega_p_rad_s", "give either omega_p_rad_s or lambda_p_nm")),
                (Some(w), None) => PlasmaMirror::new(w),
                (None, Some(l)) => PlasmaMirror::from_lambda_p_si(l * NM),
                (None, None) => PlasmaMirror::new(DEFAULT_OMEGA_P_RAD_S),
            },
            UnitSystem::Natural => match (self.omega_p, self.lambda_p) {
                (Some(_), Some(_)) => Err(Error::invalid("omega_p", "give either omega_p or lambda_p")),
                (Some(w), None) => PlasmaMirror::new(w),
                (None, Some(l)) => PlasmaMirror::from_lambda_p(l),
                (None, None) => PlasmaMirror::from_lambda_p(1.0),
            },
        }
    }

    /// Cavity in the inputs' own units: SI cavities come back in m, m^2 and
    /// rad/s. The area defaults to one unit (1 µm² for SI).
    pub fn cavity(&self, units: UnitSystem) -> Result<CavityConfig> {
        if let Some(found) = self.units()? {
            if found != units {
                return Err(Error::invalid("units", "config keys do not match the requested unit system"));
            }
        }
        let mirror = self.mirror(units)?;
        match units {
            UnitSystem::Si => {
                let l = self.separation_nm.ok_or_else(|| Error::invalid("separation_nm", "missing"))?;
                CavityConfig::identical(mirror, l * NM, self.area_um2.unwrap_or(1.0) * UM2)
            }
            UnitSystem::Natural => {
                let l = self.separation.ok_or_else(|| Error::invalid("separation", "missing"))?;
                CavityConfig::identical(mirror, l, self.area.unwrap_or(1.0))
            }
        }
    }
}

/// Parses a cavity file: flat TOML, or a JSON record whose `inputs` object
/// (or the record itself) carries the keys.
pub fn parse_cavity(text: &str) -> Result<CavityInputs> {
    if text.trim_start().starts_with('{') {
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(inputs) = value.get_mut("inputs") {
            value = inputs.take();
        }
        serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Parses an atom table into an SI atom (J and J·m³).
pub fn parse_atom_table(text: &str) -> Result<AtomModel> {
    let mut transitions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let [energy, weight] = fields.as_slice() else {
            return Err(Error::Parse(format!("line {}: expected two columns, E_n_eV and A_n", i + 1)));
        };
        let number = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: '{s}' is not a number", i + 1)))
        };
        transitions.push(
            Transition::from_ev_angstrom3(number(energy)?, number(weight)?)
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?,
        );
    }
    AtomModel::new(transitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn si_toml() {
        let inputs = parse_cavity("omega_p_rad_s = 1.37e16\nseparation_nm = 136\narea_um2 = 2.0\n").unwrap();
        assert_eq!(inputs.units().unwrap(), Some(UnitSystem::Si));
        let cavity = inputs.cavity(UnitSystem::Si).unwrap();
        assert_relative_eq!(cavity.separation(), 136e-9);
        assert_relative_eq!(cavity.area(), 2e-12);
        assert_relative_eq!(cavity.reduced_distance(UnitSystem::Si), 0.989, epsilon = 1e-3);
    }

    #[test]
    fn natural_toml_and_defaults() {
        let inputs = parse_cavity("separation = 0.5").unwrap();
        let cavity = inputs.cavity(UnitSystem::Natural).unwrap();
        assert_eq!(cavity.reduced_distance(UnitSystem::Natural), 0.5);
        assert_eq!(cavity.area(), 1.0);
    }

    #[test]
    fn rejected_configs() {
        let both = parse_cavity("omega_p_rad_s = 1e16\nlambda_p_nm = 100\nseparation_nm = 10").unwrap();
        assert!(both.cavity(UnitSystem::Si).is_err());
        let mixed = parse_cavity("lambda_p_nm = 100\nseparation = 10").unwrap();
        assert!(mixed.units().is_err());
        let missing = parse_cavity("lambda_p_nm = 100").unwrap();
        assert!(missing.cavity(UnitSystem::Si).is_err());
        assert!(matches!(parse_cavity("separation = "), Err(Error::Parse(_))));
        let zero = parse_cavity("omega_p_rad_s = 0\nseparation_nm = 10").unwrap();
        assert!(zero.cavity(UnitSystem::Si).is_err());
    }

    #[test]
    fn json_record_inputs() {
        let inputs = parse_cavity(r#"{"command":"force","inputs":{"lambda_p":2.0,"separation":0.1},"value":1.0}"#).unwrap();
        assert_eq!(inputs.lambda_p, Some(2.0));
        assert_eq!(inputs.separation, Some(0.1));
    }

    #[test]
    fn atom_table() {
        let atom = parse_atom_table("# E_n_eV  A_n\n10.2, 3.0\n\n 12.1 0.5 # second line\n").unwrap();
        assert_eq!(atom.transitions().len(), 2);
        assert_relative_eq!(atom.min_energy(), 10.2 * crate::model::ELECTRON_VOLT);
        assert!(matches!(parse_atom_table("1 2 3"), Err(Error::Parse(_))));
        assert!(matches!(parse_atom_table("1 x"), Err(Error::Parse(_))));
        assert!(matches!(parse_atom_table("-1 2"), Err(Error::Parse(_))));
        assert!(parse_atom_table("# nothing\n").is_err());
    }
}
