//! Physical quantities with unit suffixes, normalized to SI.

use std::f64::consts::PI;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Temperature,
    Length,
    /// Angular frequency, rad/s.
    Frequency,
    Density,
    InverseLength,
    Energy,
    Pressure,
}

impl Dim {
    fn name(self) -> &'static str {
        match self {
            Dim::Temperature => "temperature",
            Dim::Length => "length",
            Dim::Frequency => "frequency",
            Dim::Density => "density",
            Dim::InverseLength => "inverse length",
            Dim::Energy => "energy",
            Dim::Pressure => "pressure",
        }
    }
}

/// Recognized suffixes with the factor to SI as a ratio, so `20um` is
/// 20/1e6 rather than 20·1e-6. Matching is case-sensitive; `Hz` is a cycle
/// frequency and is converted to rad/s.
const SUFFIXES: &[(&str, Dim, f64, f64)] = &[
    ("pK", Dim::Temperature, 1.0, 1e12),
    ("nK", Dim::Temperature, 1.0, 1e9),
    ("uK", Dim::Temperature, 1.0, 1e6),
    ("mK", Dim::Temperature, 1.0, 1e3),
    ("K", Dim::Temperature, 1.0, 1.0),
    ("nm", Dim::Length, 1.0, 1e9),
    ("um", Dim::Length, 1.0, 1e6),
    ("mm", Dim::Length, 1.0, 1e3),
    ("m", Dim::Length, 1.0, 1.0),
    ("kHz", Dim::Frequency, 2e3 * PI, 1.0),
    ("Hz", Dim::Frequency, 2.0 * PI, 1.0),
    ("rad/s", Dim::Frequency, 1.0, 1.0),
    ("cm-3", Dim::Density, 1e6, 1.0),
    ("m-3", Dim::Density, 1.0, 1.0),
    ("um-1", Dim::InverseLength, 1e6, 1.0),
    ("m-1", Dim::InverseLength, 1.0, 1.0),
    ("J", Dim::Energy, 1.0, 1.0),
    ("Pa", Dim::Pressure, 1.0, 1.0),
];

/// Splits off the longest known suffix whose remainder reads as a number.
fn split_suffix(s: &str) -> (&str, &str) {
    let mut best: Option<&str> = None;
    for (name, ..) in SUFFIXES {
        if let Some(num) = s.strip_suffix(name) {
            if num.trim().parse::<f64>().is_ok() && best.map_or(true, |b| name.len() > b.len()) {
                best = Some(name);
            }
        }
    }
    match best {
        Some(name) => (s[..s.len() - name.len()].trim(), name),
        None => (s, ""),
    }
}

fn suffix_info(suffix: &str) -> Option<(Dim, f64, f64)> {
    SUFFIXES.iter().find(|(name, ..)| *name == suffix).map(|(_, d, mul, div)| (*d, *mul, *div))
}

/// Parses `value[suffix]`. A bare number is taken as SI.
pub fn parse(s: &str, dim: Dim) -> Result<f64, CliError> {
    let s = s.trim();
    let (num, suffix) = split_suffix(s);
    let value: f64 = num.parse().map_err(|_| CliError::Unit(format!("cannot read '{s}' as a {}", dim.name())))?;
    if !value.is_finite() {
        return Err(CliError::Unit(format!("'{s}' is not finite")));
    }
    if suffix.is_empty() {
        return Ok(value);
    }
    match suffix_info(suffix) {
        Some((d, mul, div)) if d == dim => Ok(value * mul / div),
        Some((d, ..)) => Err(CliError::Unit(format!("'{s}' is a {}, expected a {}", d.name(), dim.name()))),
        None => unreachable!("split_suffix only returns known suffixes"),
    }
}

/// Comma-separated list sharing one suffix, as in `0.65,1.2,1.81Hz`.
pub fn parse_list(s: &str, dim: Dim) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let (_, shared) = split_suffix(parts[parts.len() - 1]);
    parts
        .iter()
        .map(|p| {
            let bare = p.parse::<f64>().is_ok();
            if bare && !shared.is_empty() {
                parse(&format!("{p}{shared}"), dim)
            } else {
                parse(p, dim)
            }
        })
        .collect()
}
