//! `{value, unit}` quantities from a fixed unit whitelist.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Entered as a cyclic frequency, stored in rad/s.
    Frequency,
    Field,
    Length,
    Temperature,
    Time,
    ElectricField,
    /// Entered in GHz/T, stored in rad/(s·T).
    Gyromagnetic,
    Stiffness,
    Energy,
    Magnetization,
    Dimensionless,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Frequency => "frequency",
            Dimension::Field => "magnetic field",
            Dimension::Length => "length",
            Dimension::Temperature => "temperature",
            Dimension::Time => "time",
            Dimension::ElectricField => "electric field",
            Dimension::Gyromagnetic => "gyromagnetic ratio",
            Dimension::Stiffness => "exchange stiffness",
            Dimension::Energy => "energy",
            Dimension::Magnetization => "magnetization",
            Dimension::Dimensionless => "dimensionless",
        };
        f.write_str(s)
    }
}

const TWO_PI: f64 = 2.0 * PI;
const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// Every accepted unit with its dimension and factor to SI (rad/s for
/// frequencies).
const UNITS: &[(&str, Dimension, f64)] = &[
    ("GHz", Dimension::Frequency, TWO_PI * 1e9),
    ("MHz", Dimension::Frequency, TWO_PI * 1e6),
    ("kHz", Dimension::Frequency, TWO_PI * 1e3),
    ("Hz", Dimension::Frequency, TWO_PI),
    ("rad/s", Dimension::Frequency, 1.0),
    ("T", Dimension::Field, 1.0),
    ("mT", Dimension::Field, 1e-3),
    ("m", Dimension::Length, 1.0),
    ("um", Dimension::Length, 1e-6),
    ("μm", Dimension::Length, 1e-6),
    ("nm", Dimension::Length, 1e-9),
    ("K", Dimension::Temperature, 1.0),
    ("mK", Dimension::Temperature, 1e-3),
    ("s", Dimension::Time, 1.0),
    ("ms", Dimension::Time, 1e-3),
    ("us", Dimension::Time, 1e-6),
    ("μs", Dimension::Time, 1e-6),
    ("ns", Dimension::Time, 1e-9),
    ("V/nm", Dimension::ElectricField, 1e9),
    ("V/m", Dimension::ElectricField, 1.0),
    ("GHz/T", Dimension::Gyromagnetic, TWO_PI * 1e9),
    ("pJ/m", Dimension::Stiffness, 1e-12),
    ("J/m", Dimension::Stiffness, 1.0),
    ("eV", Dimension::Energy, ELECTRON_VOLT),
    ("J", Dimension::Energy, 1.0),
    ("kA/m", Dimension::Magnetization, 1e3),
    ("A/m", Dimension::Magnetization, 1.0),
    ("dimensionless", Dimension::Dimensionless, 1.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Quantity {
            value,
            unit: unit.to_string(),
        }
    }

    /// SI value, checking the unit against `dim`. `field` names the
    /// config entry in errors.
    pub fn si(&self, dim: Dimension, field: &str) -> Result<f64, CliError> {
        let (_, d, factor) = UNITS
            .iter()
            .find(|(u, _, _)| *u == self.unit)
            .ok_or_else(|| CliError::unit(field, format!("unknown unit '{}'", self.unit)))?;
        if *d != dim {
            return Err(CliError::unit(field, format!("'{}' is not a unit of {dim}", self.unit)));
        }
        if !self.value.is_finite() {
            return Err(CliError::unit(field, "value must be finite"));
        }
        Ok(self.value * factor)
    }
}

/// Inverse of [`Quantity::si`] for writing resolved values back out.
pub fn from_si(si: f64, unit: &str) -> Quantity {
    let factor = UNITS.iter().find(|(u, _, _)| *u == unit).map(|x| x.2).unwrap_or(1.0);
    Quantity::new(si / factor, unit)
}

pub fn si_opt(q: &Option<Quantity>, dim: Dimension, field: &str) -> Result<Option<f64>, CliError> {
    q.as_ref().map(|q| q.si(dim, field)).transpose()
}
