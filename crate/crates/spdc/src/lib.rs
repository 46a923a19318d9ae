//! Toolkit for designing and characterizing ultrathin-crystal, fiber-coupled
//! SPDC photon-pair sources.
//!
//! The crate is organized around the life cycle of such a source:
//!
//! - [`dispersion`] — anisotropic complex refractive indices ñ(λ) = n + iκ,
//!   loaded from CSV tables and interpolated to complex wavenumbers.
//! - [`phasematch`] — relative pair-generation rates for absorbing and
//!   transparent crystals as a function of thickness, coherence length, and
//!   thickness sweeps with sub-grid peak refinement.
//! - [`modecoupling`] — Gaussian-mode bookkeeping for fiber-coupled
//!   collection: optimal pump waist, mode overlap, fiber acceptance angles.
//! - [`tcspc`] — photon-timestamp processing: windowed coincidence counting,
//!   accidental estimation, and g²(τ) histograms.
//! - [`metrics`] — derived figures of merit (CAR, pair collection efficiency)
//!   and weighted least-squares fits for power and polarization scans.
//! - [`simulator`] — a seeded Monte Carlo generator of correlated two-channel
//!   timestamp streams with known ground truth, used as the verification
//!   oracle for the analysis chain.
//! - [`io`] — the `.pts` binary timestamp format and its CSV alternative.
//! - [`cli`] — the `spdc` command-line surface built on all of the above.
//!
//! Each major capability has a runnable example under `examples/`; start with
//! `cargo run --example thickness_sweep`.
//!
//! Unit conventions: wavelengths and thicknesses in nm, waists in µm, times
//! in integer picoseconds, rates in Hz. Wavenumbers are rad/nm and fields
//! propagate as exp(+ik̃z), so absorption means Im(k̃) ≥ 0.

pub mod cli;
pub mod dispersion;
pub mod io;
pub mod metrics;
pub mod modecoupling;
pub mod phasematch;
pub mod simulator;
pub mod tcspc;

pub use dispersion::{complex_wavenumber, Axis, ComplexIndex, DispersionTable};
pub use metrics::{
    car, fit_linear, fit_polarization, pair_efficiency, subtract_darks, Car, LinearFit,
    PairMetrics, PolarizationFit,
};
pub use modecoupling::{
    acceptance_half_angle, gaussian_overlap, optimal_pump_waist, FiberSpec, GaussianMode,
};
pub use phasematch::{
    coherence_length, idler_wavelength, phase_mismatch, pump_projection_rate, rate_absorbing,
    rate_transparent, thickness_sweep, PhaseMismatch, RateModel, SpdcConfig, ThicknessSweep,
};
pub use simulator::{analytic_expectations, simulate, Expectations, GroundTruth, SourceModel};
pub use tcspc::{
    accidental_estimate, chunked_coincidence_count, coincidence_count, g2_histogram,
    AccidentalEstimate, CoincidenceResult, G2Histogram, TimestampStream,
};
