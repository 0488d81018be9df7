//! Population datasets: delimiter-separated text with `name` and
//! `population` columns.
//!
//! Population cells may use `,`, ` ` or `_` as digit-group separators
//! (`467,963`, `565 239`). An unquoted comma inside the population cell
//! splits the row into extra fields; when `population` is the last header
//! column those trailing fields are rejoined before parsing, so
//! `Baltimore, 565, 239` reads as 565239. Lines starting with `#` are
//! comments.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{DatasetError, Result};
use crate::rop::PopulationRecord;
use crate::space::Population;

/// Table 1 city populations.
pub const US_CITIES: &str = include_str!("../data/us_cities.csv");

pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "us_cities" => Some(US_CITIES),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Overrides delimiter detection.
    pub delimiter: Option<u8>,
}

/// Picks tab, then semicolon, then comma, by presence in the header line.
pub fn detect_delimiter(text: &str) -> u8 {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if header.contains('\t') {
        b'\t'
    } else if header.contains(';') {
        b';'
    } else {
        b','
    }
}

/// Parses an integer written with optional group separators. Groups after
/// the first must have exactly three digits.
pub fn parse_grouped_int(s: &str) -> Option<u64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let groups: Vec<&str> = s
        .split(|c: char| c == ',' || c == '_' || c.is_whitespace())
        .filter(|g| !g.is_empty())
        .collect();
    let (first, rest) = groups.split_first()?;
    let all_digits = |g: &str| g.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(first) || rest.iter().any(|g| g.len() != 3 || !all_digits(g)) {
        return None;
    }
    groups.concat().parse().ok()
}

pub fn load_populations(text: &str, options: LoadOptions) -> Result<Vec<PopulationRecord>> {
    if text.trim().is_empty() {
        return Err(DatasetError::Empty.into());
    }
    let delimiter = options.delimiter.unwrap_or_else(|| detect_delimiter(text));
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| DatasetError::Io(e.to_string()))?
        .clone();
    if headers.iter().all(str::is_empty) {
        return Err(DatasetError::Empty.into());
    }
    let column = |want: &'static str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(want))
            .ok_or(DatasetError::MissingColumn(want))
    };
    let name_col = column("name")?;
    let pop_col = column("population")?;
    let pop_is_last = pop_col == headers.len() - 1;

    let mut out = Vec::new();
    let mut seen: HashMap<String, u64> = HashMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| DatasetError::Io(e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let row_err = |message: String| DatasetError::Row { line, message };

        let name = row.get(name_col).unwrap_or("").to_owned();
        if name.is_empty() {
            return Err(row_err("empty name".into()).into());
        }
        let cell = if pop_is_last && row.len() > headers.len() {
            row.iter().skip(pop_col).collect::<Vec<_>>().join(",")
        } else if row.len() > headers.len() {
            return Err(row_err(format!(
                "{} fields, header has {}",
                row.len(),
                headers.len()
            ))
            .into());
        } else {
            row.get(pop_col).unwrap_or("").to_owned()
        };
        if cell.trim().is_empty() {
            return Err(row_err(format!("missing population for '{name}'")).into());
        }
        let population = parse_grouped_int(&cell)
            .ok_or_else(|| row_err(format!("population '{cell}' is not a non-negative integer")))?;

        if let Some(&first_line) = seen.get(&name) {
            return Err(DatasetError::DuplicateName {
                name,
                line,
                first_line,
            }
            .into());
        }
        seen.insert(name.clone(), line);
        out.push(PopulationRecord {
            name,
            population: Population(population),
        });
    }
    if out.is_empty() {
        return Err(DatasetError::Empty.into());
    }
    Ok(out)
}

pub fn read_populations(
    mut source: impl Read,
    options: LoadOptions,
) -> Result<Vec<PopulationRecord>> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| DatasetError::Io(e.to_string()))?;
    load_populations(&text, options)
}

/// Writes records with plain (ungrouped) integers.
pub fn write_populations(
    records: &[PopulationRecord],
    sink: impl Write,
    delimiter: u8,
) -> Result<()> {
    let io = |e: csv::Error| DatasetError::Io(e.to_string());
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(sink);
    w.write_record(["name", "population"]).map_err(io)?;
    for r in records {
        w.write_record([r.name.as_str(), &r.population.to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|e| DatasetError::Io(e.to_string()))?;
    Ok(())
}
