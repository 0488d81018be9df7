//! Fingerprint feature-space sizes built from independent binary choices.

use crate::error::Result;
use crate::space::SpaceSize;

pub trait FeatureSpace {
    fn space_size(&self) -> Result<SpaceSize>;
}

/// Galton's bit budget: one bit per unit square, plus bits for the ridge
/// counts entering and leaving the squares and for the surrounding course.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaltonModel {
    pub unit_squares: u32,
    pub ridge_entry_exit_bits: u32,
    pub adjacent_course_bits: u32,
}

impl Default for GaltonModel {
    fn default() -> Self {
        Self {
            unit_squares: 24,
            ridge_entry_exit_bits: 8,
            adjacent_course_bits: 4,
        }
    }
}

impl FeatureSpace for GaltonModel {
    fn space_size(&self) -> Result<SpaceSize> {
        let bits = self
            .unit_squares
            .saturating_add(self.ridge_entry_exit_bits)
            .saturating_add(self.adjacent_course_bits);
        SpaceSize::pow(2, bits)
    }
}

/// `choices_per_region ^ independent_regions`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionModel {
    pub independent_regions: u32,
    pub choices_per_region: u32,
}

impl Default for RegionModel {
    fn default() -> Self {
        Self {
            independent_regions: 47,
            choices_per_region: 2,
        }
    }
}

impl FeatureSpace for RegionModel {
    fn space_size(&self) -> Result<SpaceSize> {
        SpaceSize::pow(u64::from(self.choices_per_region), self.independent_regions)
    }
}

pub fn space_size(model: &impl FeatureSpace) -> Result<SpaceSize> {
    model.space_size()
}
