//! Arrival-time-difference histograms for g²(τ).

use super::{TcspcError, TimestampStream};

/// Histogram of arrival-time differences τ = t2 − t1 over ±tau_max.
///
/// Unlike coincidence counting, the histogram takes *all* pairs within
/// range without consuming events; the flat wings then directly estimate
/// the accidental level, stored as `normalization` (mean counts of bins
/// with |τ| beyond 80% of tau_max).
#[derive(Debug, Clone, PartialEq)]
pub struct G2Histogram {
    pub bin_width_ps: i64,
    pub tau_min_ps: i64,
    pub tau_max_ps: i64,
    pub counts: Vec<u64>,
    /// Accidental-level counts per bin; 0 when no wing bins exist or they
    /// are empty.
    pub normalization: f64,
}

impl G2Histogram {
    pub fn num_bins(&self) -> usize {
        self.counts.len()
    }

    /// Center of bin `i` in ps.
    pub fn bin_center_ps(&self, i: usize) -> f64 {
        self.tau_min_ps as f64 + (i as f64 + 0.5) * self.bin_width_ps as f64
    }

    /// Index of the bin containing τ = 0 (the bin spanning [0, bin_width)).
    pub fn zero_bin(&self) -> usize {
        (-self.tau_min_ps / self.bin_width_ps) as usize
    }

    pub fn total_counts(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts divided by the accidental level, i.e. normalized g²(τ).
    /// `None` when the wings are empty and no normalization exists.
    pub fn normalized(&self) -> Option<Vec<f64>> {
        if self.normalization > 0.0 {
            Some(
                self.counts
                    .iter()
                    .map(|&c| c as f64 / self.normalization)
                    .collect(),
            )
        } else {
            None
        }
    }
}

/// Builds the τ = t2 − t1 histogram over [−tau_max, +tau_max] with the given
/// bin width (tau_max must be a positive multiple of bin_width).
pub fn g2_histogram(
    s1: &TimestampStream,
    s2: &TimestampStream,
    bin_width_ps: i64,
    tau_max_ps: i64,
) -> Result<G2Histogram, TcspcError> {
    if bin_width_ps <= 0 {
        return Err(TcspcError::NonPositiveBinWidth(bin_width_ps));
    }
    if tau_max_ps <= 0 || tau_max_ps % bin_width_ps != 0 {
        return Err(TcspcError::TauNotMultiple {
            tau_max_ps,
            bin_width_ps,
        });
    }
    let half_bins = (tau_max_ps / bin_width_ps) as usize;
    let n_bins = 2 * half_bins;
    let mut counts = vec![0u64; n_bins];

    let t1 = s1.times_ps();
    let t2 = s2.times_ps();
    let mut lo = 0;
    let mut hi = 0;
    for &a in t1 {
        let a = a as i128;
        while lo < t2.len() && (t2[lo] as i128) < a - tau_max_ps as i128 {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        while hi < t2.len() && (t2[hi] as i128) <= a + tau_max_ps as i128 {
            hi += 1;
        }
        for &b in &t2[lo..hi] {
            let tau = b as i128 - a;
            // bins are [edge, edge + bin_width); τ = +tau_max joins the last bin
            let idx = ((tau + tau_max_ps as i128) / bin_width_ps as i128) as usize;
            counts[idx.min(n_bins - 1)] += 1;
        }
    }

    // wing bins: centers beyond 80% of tau_max on either side
    let mut wing_total = 0u64;
    let mut wing_bins = 0u64;
    for (i, &c) in counts.iter().enumerate() {
        let center = -(tau_max_ps as f64) + (i as f64 + 0.5) * bin_width_ps as f64;
        if center.abs() > 0.8 * tau_max_ps as f64 {
            wing_total += c;
            wing_bins += 1;
        }
    }
    let normalization = if wing_bins > 0 {
        wing_total as f64 / wing_bins as f64
    } else {
        0.0
    };

    Ok(G2Histogram {
        bin_width_ps,
        tau_min_ps: -tau_max_ps,
        tau_max_ps,
        counts,
        normalization,
    })
}
