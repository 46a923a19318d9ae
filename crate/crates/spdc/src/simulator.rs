//! Monte Carlo generator of correlated two-channel timestamp streams.
//!
//! Pairs arrive as a homogeneous Poisson process (CW pumping); each photon
//! independently survives its arm efficiency, picks up Gaussian detector
//! jitter, is merged with Poisson dark counts, and finally passes a
//! non-paralyzable dead-time filter. The generator is fully deterministic
//! for a fixed seed (ChaCha8), which is what makes it usable as a test
//! oracle for the analysis chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tcspc::TimestampStream;

/// Name of the RNG algorithm, recorded in output metadata so fixtures can
/// be regenerated bit-identically.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Error)]
pub enum SimulatorError {
    #[error("invalid source model: {0}")]
    InvalidModel(String),
}

/// Ground-truth parameters of a simulated pair source.
///
/// Jitter and dead time have no universal values; the defaults below
/// (350 ps, 22 ns) are typical single-photon counting module figures and
/// are always explicit in serialized configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    /// True generated pair rate, Hz.
    pub pair_rate_hz: f64,
    /// Arm-1 detection efficiency in [0, 1].
    pub eta1: f64,
    /// Arm-2 detection efficiency in [0, 1].
    pub eta2: f64,
    /// Dark count rate of detector 1, Hz.
    pub dark1_hz: f64,
    /// Dark count rate of detector 2, Hz.
    pub dark2_hz: f64,
    /// Gaussian timing jitter per detector, ps (1σ).
    pub jitter_sigma_ps: f64,
    /// Non-paralyzable dead time per detector, ps.
    pub dead_time_ps: i64,
    /// Acquisition duration, ps.
    pub duration_ps: i64,
    /// RNG seed.
    pub seed: u64,
}

impl Default for SourceModel {
    fn default() -> Self {
        Self {
            pair_rate_hz: 1000.0,
            eta1: 0.1,
            eta2: 0.1,
            dark1_hz: 100.0,
            dark2_hz: 100.0,
            jitter_sigma_ps: 350.0,
            dead_time_ps: 22_000,
            duration_ps: 120 * PS_PER_S,
            seed: 1,
        }
    }
}

const PS_PER_S: i64 = 1_000_000_000_000;

impl SourceModel {
    pub fn validate(&self) -> Result<(), SimulatorError> {
        let err = |msg: String| Err(SimulatorError::InvalidModel(msg));
        for (name, v) in [
            ("pair_rate_hz", self.pair_rate_hz),
            ("dark1_hz", self.dark1_hz),
            ("dark2_hz", self.dark2_hz),
            ("jitter_sigma_ps", self.jitter_sigma_ps),
        ] {
            if !v.is_finite() || v < 0.0 {
                return err(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        for (name, v) in [("eta1", self.eta1), ("eta2", self.eta2)] {
            if !(0.0..=1.0).contains(&v) {
                return err(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if self.dead_time_ps < 0 {
            return err(format!(
                "dead_time_ps must be >= 0, got {}",
                self.dead_time_ps
            ));
        }
        if self.duration_ps <= 0 {
            return err(format!(
                "duration_ps must be > 0, got {}",
                self.duration_ps
            ));
        }
        Ok(())
    }
}

/// Per-run truth counters for oracle comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub generated_pairs: u64,
    /// Pair photons surviving efficiency and dead time on arm 1 (darks excluded).
    pub detected_1: u64,
    /// Pair photons surviving efficiency and dead time on arm 2 (darks excluded).
    pub detected_2: u64,
    /// Pairs detected on both arms.
    pub true_coincidences: u64,
}

/// Model plus truth, written alongside `.pts` outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub model: SourceModel,
    pub ground_truth: GroundTruth,
    pub rng_algorithm: String,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Origin {
    Pair(u32),
    Dark,
}

fn poisson_times(rng: &mut ChaCha8Rng, rate_hz: f64, duration_ps: i64) -> Vec<f64> {
    let mut times = Vec::new();
    if rate_hz <= 0.0 {
        return times;
    }
    let exp = Exp::new(rate_hz * 1e-12).expect("positive rate");
    let mut t = 0.0f64;
    loop {
        t += exp.sample(rng);
        if t > duration_ps as f64 {
            break;
        }
        times.push(t);
    }
    times
}

/// Simulates one acquisition, returning the channel-0 and channel-1 streams
/// and the ground truth. Deterministic for a fixed seed.
pub fn simulate(
    model: &SourceModel,
) -> Result<(TimestampStream, TimestampStream, GroundTruth), SimulatorError> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let duration = model.duration_ps;
    let jitter = if model.jitter_sigma_ps > 0.0 {
        Some(Normal::new(0.0, model.jitter_sigma_ps).expect("positive sigma"))
    } else {
        None
    };

    let pair_times = poisson_times(&mut rng, model.pair_rate_hz, duration);
    let generated_pairs = pair_times.len() as u64;

    let mut events1: Vec<(i64, Origin)> = Vec::new();
    let mut events2: Vec<(i64, Origin)> = Vec::new();
    for (pair_id, &t) in pair_times.iter().enumerate() {
        let pair_id = pair_id as u32;
        let hit1 = rng.gen_bool(model.eta1);
        let hit2 = rng.gen_bool(model.eta2);
        if hit1 {
            let dt = jitter.map_or(0.0, |n| n.sample(&mut rng));
            events1.push((clamp_ps(t + dt, duration), Origin::Pair(pair_id)));
        }
        if hit2 {
            let dt = jitter.map_or(0.0, |n| n.sample(&mut rng));
            events2.push((clamp_ps(t + dt, duration), Origin::Pair(pair_id)));
        }
    }
    for t in poisson_times(&mut rng, model.dark1_hz, duration) {
        events1.push((clamp_ps(t, duration), Origin::Dark));
    }
    for t in poisson_times(&mut rng, model.dark2_hz, duration) {
        events2.push((clamp_ps(t, duration), Origin::Dark));
    }

    let mut seen1 = vec![false; pair_times.len()];
    let mut seen2 = vec![false; pair_times.len()];
    let times1 = apply_dead_time(&mut events1, model.dead_time_ps, &mut seen1);
    let times2 = apply_dead_time(&mut events2, model.dead_time_ps, &mut seen2);

    let detected_1 = seen1.iter().filter(|&&s| s).count() as u64;
    let detected_2 = seen2.iter().filter(|&&s| s).count() as u64;
    let true_coincidences = seen1
        .iter()
        .zip(seen2.iter())
        .filter(|&(&a, &b)| a && b)
        .count() as u64;

    let s1 = TimestampStream::new(0, times1, duration).expect("simulator output is sorted");
    let s2 = TimestampStream::new(1, times2, duration).expect("simulator output is sorted");
    Ok((
        s1,
        s2,
        GroundTruth {
            generated_pairs,
            detected_1,
            detected_2,
            true_coincidences,
        },
    ))
}

fn clamp_ps(t: f64, duration_ps: i64) -> i64 {
    (t.round() as i64).clamp(0, duration_ps)
}

/// Sorts events, applies a non-paralyzable dead time, and records which
/// pair photons survived.
fn apply_dead_time(
    events: &mut [(i64, Origin)],
    dead_time_ps: i64,
    seen: &mut [bool],
) -> Vec<i64> {
    // total order (time, origin) keeps the filter deterministic across ties
    events.sort_unstable_by_key(|&(t, origin)| {
        (
            t,
            match origin {
                Origin::Pair(id) => id as u64,
                Origin::Dark => u64::MAX,
            },
        )
    });
    let mut kept = Vec::with_capacity(events.len());
    let mut last_kept: Option<i64> = None;
    for &(t, origin) in events.iter() {
        if let Some(last) = last_kept {
            if dead_time_ps > 0 && t - last < dead_time_ps {
                continue;
            }
        }
        last_kept = Some(t);
        kept.push(t);
        if let Origin::Pair(id) = origin {
            seen[id as usize] = true;
        }
    }
    kept
}

/// Closed-form expectations for the detected rates of a [`SourceModel`],
/// neglecting dead-time and jitter corrections (valid when rate·dead_time
/// ≪ 1 and jitter ≪ window).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    pub r1_hz: f64,
    pub r2_hz: f64,
    pub r_cc_hz: f64,
    /// Accidental coincidence rate R₁·R₂·τ_w, Hz.
    pub accidental_rate_hz: f64,
    pub car: f64,
    pub eta: f64,
}

pub fn analytic_expectations(model: &SourceModel, window_ps: i64) -> Expectations {
    let r1 = model.pair_rate_hz * model.eta1 + model.dark1_hz;
    let r2 = model.pair_rate_hz * model.eta2 + model.dark2_hz;
    let r_cc = model.pair_rate_hz * model.eta1 * model.eta2;
    let accidental = r1 * r2 * window_ps as f64 * 1e-12;
    let car = if accidental > 0.0 { r_cc / accidental } else { 0.0 };
    let eta = if r1 > 0.0 && r2 > 0.0 {
        r_cc / (r1 * r2).sqrt()
    } else {
        0.0
    };
    Expectations {
        r1_hz: r1,
        r2_hz: r2,
        r_cc_hz: r_cc,
        accidental_rate_hz: accidental,
        car,
        eta,
    }
}
