//! Shared test oracles, deliberately independent of the library's
//! implementation paths: naive matchers with explicit consumed flags,
//! composite Simpson quadrature, and a 2-D overlap integral.

#![allow(dead_code)]

use num_complex::Complex64;

/// Fully naive O(n·m) coincidence matcher implementing the documented
/// consumption rule directly: each stream-1 event, in time order, matches
/// the earliest unconsumed stream-2 event with |t2 − t1 − offset| ≤ window/2.
pub fn naive_coincidences(t1: &[i64], t2: &[i64], window_ps: i64, offset_ps: i64) -> u64 {
    let mut consumed = vec![false; t2.len()];
    let mut count = 0;
    for &a in t1 {
        for (j, &b) in t2.iter().enumerate() {
            if consumed[j] {
                continue;
            }
            let d = b as i128 - a as i128 - offset_ps as i128;
            if 2 * d.abs() <= window_ps as i128 {
                consumed[j] = true;
                count += 1;
                break;
            }
        }
    }
    count
}

/// Same consumption rule with a sliding lower bound and early exit, for
/// million-event inputs where the fully naive scan is intractable. Still
/// structurally independent of the two-pointer counter (consumed flags and
/// per-event scans instead of head pointers).
pub fn windowed_oracle_coincidences(
    t1: &[i64],
    t2: &[i64],
    window_ps: i64,
    offset_ps: i64,
) -> u64 {
    let mut consumed = vec![false; t2.len()];
    let mut count = 0;
    let mut start = 0usize;
    for &a in t1 {
        let lower = a as i128 + offset_ps as i128;
        while start < t2.len() && 2 * (lower - t2[start] as i128) > window_ps as i128 {
            start += 1;
        }
        for j in start..t2.len() {
            if consumed[j] {
                continue;
            }
            let d = t2[j] as i128 - lower;
            if 2 * d > window_ps as i128 {
                break;
            }
            if 2 * d.abs() <= window_ps as i128 {
                consumed[j] = true;
                count += 1;
                break;
            }
        }
    }
    count
}

/// |∫₀ᴸ exp(iΔk̃z) dz|² by composite Simpson quadrature.
pub fn simpson_rate(dk: Complex64, l_nm: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2), "Simpson needs an even panel count");
    let h = l_nm / panels as f64;
    let f = |z: f64| (Complex64::i() * dk * z).exp();
    let mut acc = f(0.0) + f(l_nm);
    for k in 1..panels {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(k as f64 * h);
    }
    (acc * h / 3.0).norm_sqr()
}

/// Power overlap of two co-located Gaussian modes by radial quadrature of
/// the normalized field product, |∫ ψ_a ψ_b dA|².
pub fn overlap_by_quadrature(wa: f64, wb: f64) -> f64 {
    let r_max = 8.0 * wa.max(wb);
    let n = 40_000usize;
    let h = r_max / n as f64;
    let psi = |w: f64, r: f64| (2.0 / std::f64::consts::PI).sqrt() / w * (-r * r / (w * w)).exp();
    let integrand = |r: f64| 2.0 * std::f64::consts::PI * r * psi(wa, r) * psi(wb, r);
    let mut acc = integrand(0.0) + integrand(r_max);
    for k in 1..n {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * integrand(k as f64 * h);
    }
    let amplitude = acc * h / 3.0;
    amplitude * amplitude
}

/// Relative agreement check that treats a shared zero as agreement.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Splitmix-style deterministic pseudo-random stream for plain test inputs.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.uniform() * (hi - lo) as f64) as i64
    }

    /// Sorted event times in [0, span].
    pub fn sorted_times(&mut self, n: usize, span: i64) -> Vec<i64> {
        let mut times: Vec<i64> = (0..n).map(|_| self.range_i64(0, span)).collect();
        times.sort_unstable();
        times
    }
}
