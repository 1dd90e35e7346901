//! Casimir forces between plasma-model mirrors, their short- and
//! long-distance asymptotics, and the Casimir-Polder/London interaction
//! between model atoms.
//!
//! Everything is computed in natural units (`hbar = c = 1`); see [`model`]
//! for conversion from and to SI.

pub mod cli;
pub mod error;
pub mod io;
pub mod model;
pub mod optics;
pub mod plasmon;
pub mod polder;
pub mod lifshitz;
pub mod quadrature;

pub use error::{Error, Result};
