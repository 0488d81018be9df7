//! Parsing of numeric command-line values.
//!
//! Space sizes accept plain or digit-grouped integers (`68,719,476,736`),
//! reals and scientific notation (`4.85e19`), powers (`2^36`), and the
//! keywords `galton` (2^36) and `regions` (2^47).

use overlap_core::dataset::parse_grouped_int;
use overlap_core::{
    space_size, Error as CoreError, GaltonModel, Population, RegionModel, SolveTarget, SpaceSize,
};

use crate::error::CliError;

fn parse_real(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .replace('_', "")
        .parse::<f64>()
        .map_err(|_| CliError::Parse(format!("'{s}' is not a valid {what}")))
}

pub fn parse_space(s: &str) -> Result<SpaceSize, CliError> {
    let s = s.trim();
    match s.to_ascii_lowercase().as_str() {
        "galton" => return Ok(space_size(&GaltonModel::default())?),
        "regions" => return Ok(space_size(&RegionModel::default())?),
        _ => {}
    }
    if let Some((base, exp)) = s.split_once('^') {
        let base =
            parse_grouped_int(base).ok_or_else(|| CliError::Parse(format!("bad base in '{s}'")))?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("bad exponent in '{s}'")))?;
        return Ok(SpaceSize::pow(base, exp)?);
    }
    if let Some(n) = parse_grouped_int(s) {
        return Ok(SpaceSize::from_int(u128::from(n))?);
    }
    Ok(SpaceSize::new(parse_real(s, "space size")?)?)
}

pub fn parse_population(s: &str) -> Result<Population, CliError> {
    if let Some(n) = parse_grouped_int(s) {
        return Ok(Population(n));
    }
    Ok(Population::from_f64(parse_real(s, "population")?)?)
}

pub fn parse_target(s: &str) -> Result<SolveTarget, CliError> {
    Ok(SolveTarget::new(parse_real(s, "probability")?)?)
}

pub fn parse_percent(s: &str) -> Result<f64, CliError> {
    let x = parse_real(s.trim().trim_end_matches('%'), "percentage")?;
    if x > 0.0 && x < 100.0 {
        Ok(x)
    } else {
        Err(CliError::Domain(CoreError::InvalidTarget(x / 100.0)))
    }
}

pub fn parse_delimiter(s: &str) -> Result<u8, CliError> {
    match s {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        "comma" | "," => Ok(b','),
        "semicolon" | ";" => Ok(b';'),
        other if other.len() == 1 && other.is_ascii() => Ok(other.as_bytes()[0]),
        other => Err(CliError::Parse(format!("unsupported delimiter '{other}'"))),
    }
}
