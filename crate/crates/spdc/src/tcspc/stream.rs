//! Validated per-channel timestamp streams.

use super::TcspcError;

/// Time-sorted detection events of one channel, in integer picoseconds.
///
/// Sortedness and the `[0, duration]` bound are enforced at construction,
/// so downstream operations can rely on them without re-checking. The
/// stream is immutable afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimestampStream {
    channel: u8,
    times_ps: Vec<i64>,
    duration_ps: i64,
}

impl TimestampStream {
    pub fn new(channel: u8, times_ps: Vec<i64>, duration_ps: i64) -> Result<Self, TcspcError> {
        if duration_ps <= 0 {
            return Err(TcspcError::NonPositiveDuration(duration_ps));
        }
        for (i, &t) in times_ps.iter().enumerate() {
            if t < 0 || t > duration_ps {
                return Err(TcspcError::TimeOutOfBounds {
                    index: i,
                    time_ps: t,
                    duration_ps,
                });
            }
            if i > 0 && times_ps[i - 1] > t {
                return Err(TcspcError::UnsortedStream {
                    index: i,
                    prev: times_ps[i - 1],
                    next: t,
                });
            }
        }
        Ok(Self {
            channel,
            times_ps,
            duration_ps,
        })
    }

    pub fn channel(&self) -> u8 {
        self.channel
    }

    pub fn times_ps(&self) -> &[i64] {
        &self.times_ps
    }

    pub fn duration_ps(&self) -> i64 {
        self.duration_ps
    }

    pub fn len(&self) -> usize {
        self.times_ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_ps.is_empty()
    }

    /// Mean count rate over the acquisition, Hz.
    pub fn rate_hz(&self) -> f64 {
        self.times_ps.len() as f64 / (self.duration_ps as f64 * 1e-12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_sorted_with_ties() {
        let s = TimestampStream::new(0, vec![0, 5, 5, 9], 10).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.channel(), 0);
    }

    #[test]
    fn rejects_unsorted() {
        match TimestampStream::new(0, vec![0, 7, 3], 10) {
            Err(TcspcError::UnsortedStream { index: 2, prev: 7, next: 3 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_bounds_and_bad_duration() {
        assert!(matches!(
            TimestampStream::new(0, vec![-1], 10),
            Err(TcspcError::TimeOutOfBounds { .. })
        ));
        assert!(matches!(
            TimestampStream::new(0, vec![11], 10),
            Err(TcspcError::TimeOutOfBounds { .. })
        ));
        assert!(matches!(
            TimestampStream::new(0, vec![], 0),
            Err(TcspcError::NonPositiveDuration(0))
        ));
    }

    #[test]
    fn rate_is_counts_over_duration() {
        let s = TimestampStream::new(0, vec![1, 2, 3, 4], 2_000_000_000_000).unwrap();
        assert!((s.rate_hz() - 2.0).abs() < 1e-12);
    }
}
