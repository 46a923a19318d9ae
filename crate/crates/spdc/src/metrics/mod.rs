//! Derived figures of merit: CAR, pair collection efficiency, dark-count
//! subtraction, and the weighted least-squares fits used for power and
//! polarization scans.
//!
//! All count errors are 1σ first-order Poisson (σ_N = √N propagated to
//! first order), matching how pair-source figures are usually quoted.

mod fit;

pub use fit::{fit_linear, fit_polarization, LinearFit, PolarizationFit};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("singles rates must be positive, got {0} Hz")]
    NonPositiveSingles(f64),
    #[error("counts must be finite and non-negative, got {0}")]
    NegativeCount(f64),
    #[error("all abscissa values coincide; a line fit is degenerate")]
    DegenerateAbscissa,
    #[error("polarization fit needs points spanning at least 90 degrees, got {span_deg:.3}")]
    InsufficientAngularSpan { span_deg: f64 },
    #[error("fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("y errors must be positive, got {0}")]
    NonPositiveError(f64),
    #[error("points and errors have different lengths")]
    LengthMismatch,
}

/// Pair collection efficiency η = R_CC/√(R₁R₂).
pub fn pair_efficiency(r_cc_hz: f64, r1_hz: f64, r2_hz: f64) -> Result<f64, MetricsError> {
    if r1_hz <= 0.0 || r1_hz.is_nan() {
        return Err(MetricsError::NonPositiveSingles(r1_hz));
    }
    if r2_hz <= 0.0 || r2_hz.is_nan() {
        return Err(MetricsError::NonPositiveSingles(r2_hz));
    }
    if !r_cc_hz.is_finite() || r_cc_hz < 0.0 {
        return Err(MetricsError::NegativeCount(r_cc_hz));
    }
    Ok(r_cc_hz / (r1_hz * r2_hz).sqrt())
}

/// Coincidence-to-accidental ratio with 1σ Poisson error, or a lower bound
/// when no accidentals were observed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Car {
    Measured { value: f64, sigma: f64 },
    /// Zero observed accidentals: the CAR is at least `coincidences / 1`.
    LowerBound { bound: f64 },
}

impl Car {
    /// The ratio (or its lower bound).
    pub fn value(&self) -> f64 {
        match *self {
            Car::Measured { value, .. } => value,
            Car::LowerBound { bound } => bound,
        }
    }

    pub fn sigma(&self) -> Option<f64> {
        match *self {
            Car::Measured { sigma, .. } => Some(sigma),
            Car::LowerBound { .. } => None,
        }
    }

    pub fn is_lower_bound(&self) -> bool {
        matches!(self, Car::LowerBound { .. })
    }
}

/// CAR = coincidences/accidentals. Counts may be fractional (the analytic
/// accidental estimate usually is). Zero accidentals yield a lower bound
/// rather than an error.
pub fn car(coincidences: f64, accidentals: f64) -> Result<Car, MetricsError> {
    for v in [coincidences, accidentals] {
        if !v.is_finite() || v < 0.0 {
            return Err(MetricsError::NegativeCount(v));
        }
    }
    if accidentals == 0.0 {
        return Ok(Car::LowerBound {
            bound: coincidences,
        });
    }
    let value = coincidences / accidentals;
    // var(C/A) ≈ C/A² + C²/A³ for independent Poisson C, A
    let sigma = (coincidences / accidentals.powi(2)
        + coincidences.powi(2) / accidentals.powi(3))
    .sqrt();
    Ok(Car::Measured { value, sigma })
}

/// A dark-subtracted singles rate; clamping at zero is flagged, not fatal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subtracted {
    pub rate_hz: f64,
    pub clamped: bool,
}

/// max(singles − dark, 0) with a flag when the floor was hit.
pub fn subtract_darks(singles_hz: f64, dark_rate_hz: f64) -> Subtracted {
    let diff = singles_hz - dark_rate_hz;
    Subtracted {
        rate_hz: diff.max(0.0),
        clamped: diff < 0.0,
    }
}

/// Full set of rates and figures of merit for one stream pair, with 1σ
/// first-order Poisson errors.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMetrics {
    pub singles_1_hz: f64,
    pub singles_1_error_hz: f64,
    pub singles_2_hz: f64,
    pub singles_2_error_hz: f64,
    pub singles_geomean_hz: f64,
    pub singles_geomean_error_hz: f64,
    pub coincidence_rate_hz: f64,
    pub coincidence_rate_error_hz: f64,
    pub accidental_rate_hz: f64,
    pub accidental_rate_error_hz: f64,
    pub car: Car,
    pub pair_efficiency: f64,
    pub pair_efficiency_error: f64,
    pub window_ps: i64,
    pub duration_ps: i64,
}

impl PairMetrics {
    /// Builds the report from raw counts of one acquisition.
    pub fn from_counts(
        n1: u64,
        n2: u64,
        coincidences: u64,
        accidentals: f64,
        window_ps: i64,
        duration_ps: i64,
    ) -> Result<Self, MetricsError> {
        let t_s = duration_ps as f64 * 1e-12;
        if t_s <= 0.0 || t_s.is_nan() {
            return Err(MetricsError::NegativeCount(t_s));
        }
        let r1 = n1 as f64 / t_s;
        let r2 = n2 as f64 / t_s;
        let r_cc = coincidences as f64 / t_s;
        let r_acc = accidentals / t_s;
        let eta = pair_efficiency(r_cc, r1, r2)?;
        // relative error of η from independent √N on all three counts
        let eta_rel = (1.0 / (coincidences as f64).max(1.0)
            + 0.25 / n1 as f64
            + 0.25 / n2 as f64)
            .sqrt();
        let geomean = (r1 * r2).sqrt();
        let geomean_rel = 0.5 * (1.0 / n1 as f64 + 1.0 / n2 as f64).sqrt();
        Ok(Self {
            singles_1_hz: r1,
            singles_1_error_hz: (n1 as f64).sqrt() / t_s,
            singles_2_hz: r2,
            singles_2_error_hz: (n2 as f64).sqrt() / t_s,
            singles_geomean_hz: geomean,
            singles_geomean_error_hz: geomean * geomean_rel,
            coincidence_rate_hz: r_cc,
            coincidence_rate_error_hz: (coincidences as f64).sqrt() / t_s,
            accidental_rate_hz: r_acc,
            accidental_rate_error_hz: accidentals.max(0.0).sqrt() / t_s,
            car: car(coincidences as f64, accidentals)?,
            pair_efficiency: eta,
            pair_efficiency_error: eta * eta_rel,
            window_ps,
            duration_ps,
        })
    }

    /// Returns a copy with detector dark rates subtracted from the singles
    /// (errors keep their count-based absolute values; dark-rate uncertainty
    /// is neglected). Fails if a subtracted singles rate hits zero, since η
    /// is then undefined.
    pub fn dark_subtracted(&self, dark1_hz: f64, dark2_hz: f64) -> Result<Self, MetricsError> {
        let s1 = subtract_darks(self.singles_1_hz, dark1_hz);
        let s2 = subtract_darks(self.singles_2_hz, dark2_hz);
        let eta = pair_efficiency(self.coincidence_rate_hz, s1.rate_hz, s2.rate_hz)?;
        let eta_rel = if self.pair_efficiency > 0.0 {
            self.pair_efficiency_error / self.pair_efficiency
        } else {
            0.0
        };
        let geomean = (s1.rate_hz * s2.rate_hz).sqrt();
        let geomean_rel = if self.singles_geomean_hz > 0.0 {
            self.singles_geomean_error_hz / self.singles_geomean_hz
        } else {
            0.0
        };
        Ok(Self {
            singles_1_hz: s1.rate_hz,
            singles_2_hz: s2.rate_hz,
            singles_geomean_hz: geomean,
            singles_geomean_error_hz: geomean * geomean_rel,
            pair_efficiency: eta,
            pair_efficiency_error: eta * eta_rel,
            ..self.clone()
        })
    }
}
