//! Random overlap probability: the chance that a group of a given size
//! contains two members sharing a fingerprint pattern.

use rayon::prelude::*;

use crate::collision::{collision_probability, EvalMethod, EvalResult};
use crate::error::{Error, Result};
use crate::space::{Population, SpaceSize};

/// Probabilities strictly above this render as `≈ 100%`.
pub const SATURATION_THRESHOLD: f64 = 0.9995;

pub const SATURATED_DISPLAY: &str = "≈ 100%";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationRecord {
    pub name: String,
    pub population: Population,
}

impl PopulationRecord {
    pub fn new(name: impl Into<String>, population: u64) -> Self {
        Self {
            name: name.into(),
            population: Population(population),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RopEntry {
    pub record: PopulationRecord,
    pub rop: EvalResult,
    pub display: String,
}

pub fn rop(p: Population, t: SpaceSize) -> Result<EvalResult> {
    collision_probability(t, p, EvalMethod::Auto)
}

/// Percentage with two decimals, ties to even.
pub fn format_percent(probability: f64) -> String {
    let hundredths = (probability * 10_000.0).round_ties_even();
    format!("{:.2}%", hundredths / 100.0)
}

pub fn display_probability(probability: f64) -> String {
    if probability > SATURATION_THRESHOLD {
        SATURATED_DISPLAY.to_owned()
    } else {
        format_percent(probability)
    }
}

/// Evaluates every record against `t`, preserving input order.
pub fn rop_table(records: &[PopulationRecord], t: SpaceSize) -> Result<Vec<RopEntry>> {
    if records.is_empty() {
        return Err(Error::Precondition("rop_table", "at least one record"));
    }
    records
        .par_iter()
        .map(|record| {
            let rop = rop(record.population, t).map_err(|e| Error::Record {
                name: record.name.clone(),
                source: Box::new(e),
            })?;
            Ok(RopEntry {
                record: record.clone(),
                display: display_probability(rop.probability),
                rop,
            })
        })
        .collect()
}
