//! Photon-timestamp processing: windowed coincidence counting, accidental
//! estimation, and g²(τ) histograms.
//!
//! All times are 64-bit integer picoseconds, which keeps ordering exact over
//! hour-long acquisitions (30 min ≈ 1.8×10¹⁵ ps) and makes every operation
//! here bit-deterministic.

mod coincidence;
mod g2;
mod stream;

pub use coincidence::{
    accidental_estimate, analyze_coincidences, chunked_coincidence_count, coincidence_count,
    AccidentalEstimate, AccidentalMethod, CoincidenceResult,
};
pub use g2::{g2_histogram, G2Histogram};
pub use stream::TimestampStream;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TcspcError {
    #[error("timestamps decrease at index {index}: {prev} ps then {next} ps")]
    UnsortedStream { index: usize, prev: i64, next: i64 },
    #[error("timestamp {time_ps} ps at index {index} outside [0, {duration_ps}] ps")]
    TimeOutOfBounds {
        index: usize,
        time_ps: i64,
        duration_ps: i64,
    },
    #[error("duration must be positive, got {0} ps")]
    NonPositiveDuration(i64),
    #[error("coincidence window must be positive, got {0} ps")]
    NonPositiveWindow(i64),
    #[error("bin width must be positive, got {0} ps")]
    NonPositiveBinWidth(i64),
    #[error("tau_max ({tau_max_ps} ps) must be a positive multiple of the bin width ({bin_width_ps} ps)")]
    TauNotMultiple { tau_max_ps: i64, bin_width_ps: i64 },
    #[error("accidental offset {offset_ps} ps too small: need at least 10x the window ({window_ps} ps)")]
    OffsetTooSmall { offset_ps: i64, window_ps: i64 },
    #[error("accidental offset {offset_ps} ps plus window {window_ps} ps exceeds the stream span {duration_ps} ps")]
    OffsetOutsideSpan {
        offset_ps: i64,
        window_ps: i64,
        duration_ps: i64,
    },
    #[error("streams have different durations: {d1_ps} ps vs {d2_ps} ps")]
    DurationMismatch { d1_ps: i64, d2_ps: i64 },
    #[error("chunk span {chunk_span_ps} ps too small: need more than 10x the window ({window_ps} ps)")]
    ChunkTooSmall {
        chunk_span_ps: i64,
        window_ps: i64,
    },
}
