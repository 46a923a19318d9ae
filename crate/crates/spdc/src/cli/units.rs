//! Flag-value parsers with explicit unit suffixes.
//!
//! Times and lengths mix ps/ns and nm/µm throughout pair-source work, so
//! bare numbers are rejected: every value carries its unit, e.g.
//! `--window 1.5ns`, `--bin 60ps`, `--thickness-max 2000nm`.

use crate::dispersion::Axis;

fn split_value(s: &str, suffixes: &[(&str, f64)]) -> Result<f64, String> {
    let s = s.trim();
    for (suffix, factor) in suffixes {
        if let Some(num) = s.strip_suffix(suffix) {
            let num = num.trim();
            if num.is_empty() {
                return Err(format!("`{s}` has no numeric part"));
            }
            let value: f64 = num
                .parse()
                .map_err(|_| format!("`{num}` is not a number"))?;
            if !value.is_finite() {
                return Err(format!("`{s}` is not finite"));
            }
            return Ok(value * factor);
        }
    }
    let units: Vec<&str> = suffixes.iter().map(|&(u, _)| u).collect();
    Err(format!(
        "`{s}` is missing a unit suffix (expected one of {})",
        units.join(", ")
    ))
}

const TIME_SUFFIXES: &[(&str, f64)] = &[
    ("ps", 1.0),
    ("ns", 1e3),
    ("us", 1e6),
    ("µs", 1e6),
    ("μs", 1e6),
    ("ms", 1e9),
    // plain seconds last so it does not shadow the others
    ("s", 1e12),
];

const LENGTH_SUFFIXES: &[(&str, f64)] = &[
    ("nm", 1.0),
    ("um", 1e3),
    ("µm", 1e3),
    ("μm", 1e3),
    ("mm", 1e6),
];

/// Parses a time with unit suffix into integer picoseconds.
pub fn parse_time_ps(s: &str) -> Result<i64, String> {
    let ps = split_value(s, TIME_SUFFIXES)?;
    if ps.abs() > 9.2e18 {
        return Err(format!("`{s}` overflows the picosecond range"));
    }
    Ok(ps.round() as i64)
}

/// Parses a length with unit suffix into nanometres.
pub fn parse_length_nm(s: &str) -> Result<f64, String> {
    split_value(s, LENGTH_SUFFIXES)
}

/// Parses a length with unit suffix into micrometres.
pub fn parse_length_um(s: &str) -> Result<f64, String> {
    Ok(split_value(s, LENGTH_SUFFIXES)? / 1e3)
}

/// Parses a crystal axis name (x, y or z).
pub fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse::<Axis>().map_err(|e| e.to_string())
}
