//! Fit the pump-power dependence of coincidence counts: SPDC rates grow
//! linearly with power, and the slope is the normalized rate in Hz/mW.
//!
//! ```bash
//! cargo run --example fit_power_scan
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use spdc::metrics::fit_linear;

fn main() {
    // synthesize a power scan: 120 s accumulation per point, Poisson counts
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let true_slope_hz_per_mw = 0.43;
    let accumulation_s = 120.0;
    let powers_mw: Vec<f64> = (1..=8).map(|i| 0.25 * i as f64).collect();

    let mut points = Vec::new();
    let mut sigmas = Vec::new();
    println!("power (mW)   counts in 120 s");
    for &p in &powers_mw {
        let mean_counts = true_slope_hz_per_mw * p * accumulation_s;
        let counts = Poisson::new(mean_counts).unwrap().sample(&mut rng);
        println!("{p:>10.2}   {counts:>8.0}");
        points.push((p, counts / accumulation_s));
        sigmas.push(counts.max(1.0).sqrt() / accumulation_s);
    }

    let fit = fit_linear(&points, Some(&sigmas)).unwrap();
    println!();
    println!(
        "normalized coincidence rate: {:.3} ± {:.3} Hz/mW (true {true_slope_hz_per_mw})",
        fit.slope, fit.slope_error
    );
    println!(
        "intercept: {:.4} ± {:.4} Hz, r² = {:.4}",
        fit.intercept, fit.intercept_error, fit.r_squared
    );
}
