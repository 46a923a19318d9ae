//! Gaussian-mode bookkeeping for fiber-coupled collection.
//!
//! The emission waist of a pump-intensity-driven SPDC process is ω_p·√2
//! (the pair amplitude follows the squared pump field), so matching it to a
//! collection mode of waist ω_c gives the design rule ω_p = ω_c/√2. The
//! overlap figure here is the standard power coupling of two co-located,
//! co-axial Gaussians.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModeError {
    #[error("waist must be positive, got {0} µm")]
    NonPositiveWaist(f64),
    #[error("wavelength must be positive, got {0} nm")]
    NonPositiveWavelength(f64),
    #[error("numerical aperture must lie in (0, 1), got {0}")]
    InvalidNA(f64),
    #[error("fiber catalog: {0}")]
    Catalog(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// How many spatial modes a fiber supports at its operating wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modality {
    #[serde(rename = "single-mode")]
    SingleMode,
    #[serde(rename = "few-mode")]
    FewMode,
    #[serde(rename = "multi-mode")]
    MultiMode,
}

/// Catalog entry for an optical fiber.
///
/// The mode-field diameter is quoted at `reference_wavelength_nm`; waists at
/// other wavelengths are user-supplied estimates rather than computed from
/// index profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSpec {
    pub name: String,
    pub mode_field_diameter_um: f64,
    pub reference_wavelength_nm: f64,
    pub numerical_aperture: f64,
    pub core_diameter_um: f64,
    pub modality: Modality,
}

impl FiberSpec {
    pub fn validate(&self) -> Result<(), ModeError> {
        if self.mode_field_diameter_um <= 0.0 || self.mode_field_diameter_um.is_nan() {
            return Err(ModeError::NonPositiveWaist(self.mode_field_diameter_um));
        }
        if self.reference_wavelength_nm <= 0.0 || self.reference_wavelength_nm.is_nan() {
            return Err(ModeError::NonPositiveWavelength(self.reference_wavelength_nm));
        }
        if self.core_diameter_um <= 0.0 || self.core_diameter_um.is_nan() {
            return Err(ModeError::NonPositiveWaist(self.core_diameter_um));
        }
        if self.numerical_aperture <= 0.0
            || self.numerical_aperture >= 1.0
            || self.numerical_aperture.is_nan()
        {
            return Err(ModeError::InvalidNA(self.numerical_aperture));
        }
        Ok(())
    }

    /// Fundamental-mode 1/e² waist radius, half the mode-field diameter.
    pub fn mode_waist_um(&self) -> f64 {
        self.mode_field_diameter_um / 2.0
    }
}

/// Loads a JSON array of [`FiberSpec`] records and validates every entry.
pub fn load_fiber_catalog<P: AsRef<Path>>(path: P) -> Result<Vec<FiberSpec>, ModeError> {
    let text = std::fs::read_to_string(path)?;
    let fibers: Vec<FiberSpec> =
        serde_json::from_str(&text).map_err(|e| ModeError::Catalog(e.to_string()))?;
    for fiber in &fibers {
        fiber.validate()?;
    }
    Ok(fibers)
}

/// A Gaussian beam at its waist plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMode {
    /// 1/e² intensity radius, µm.
    pub waist_um: f64,
    pub wavelength_nm: f64,
}

impl GaussianMode {
    pub fn new(waist_um: f64, wavelength_nm: f64) -> Result<Self, ModeError> {
        if waist_um <= 0.0 || waist_um.is_nan() {
            return Err(ModeError::NonPositiveWaist(waist_um));
        }
        if wavelength_nm <= 0.0 || wavelength_nm.is_nan() {
            return Err(ModeError::NonPositiveWavelength(wavelength_nm));
        }
        Ok(Self {
            waist_um,
            wavelength_nm,
        })
    }
}

/// Optimal pump waist for a given collection waist: ω_c/√2.
pub fn optimal_pump_waist(collection_waist_um: f64) -> Result<f64, ModeError> {
    if collection_waist_um <= 0.0 || collection_waist_um.is_nan() {
        return Err(ModeError::NonPositiveWaist(collection_waist_um));
    }
    Ok(collection_waist_um / std::f64::consts::SQRT_2)
}

/// Power overlap of two co-located, co-axial Gaussian modes:
/// (2·ω_a·ω_b/(ω_a² + ω_b²))² ∈ [0, 1], 1 iff the waists are equal.
pub fn gaussian_overlap(a: &GaussianMode, b: &GaussianMode) -> f64 {
    let (wa, wb) = (a.waist_um, b.waist_um);
    (2.0 * wa * wb / (wa * wa + wb * wb)).powi(2)
}

/// In-air acceptance half-angle arcsin(NA) of a fiber, in degrees.
pub fn acceptance_half_angle(fiber: &FiberSpec) -> Result<f64, ModeError> {
    if fiber.numerical_aperture <= 0.0
        || fiber.numerical_aperture >= 1.0
        || fiber.numerical_aperture.is_nan()
    {
        return Err(ModeError::InvalidNA(fiber.numerical_aperture));
    }
    Ok(fiber.numerical_aperture.asin().to_degrees())
}
