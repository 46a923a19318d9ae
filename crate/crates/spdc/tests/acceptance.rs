//! Acceptance suite: every numbered criterion runs at its stated tolerance
//! and prints one pass/fail line (visible with `cargo test --test acceptance
//! -- --nocapture`).

mod common;

use common::{rel_close, simpson_rate, windowed_oracle_coincidences, TestRng};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use spdc::dispersion::{Axis, DispersionTable};
use spdc::metrics::{fit_linear, fit_polarization, pair_efficiency};
use spdc::modecoupling::{gaussian_overlap, optimal_pump_waist, GaussianMode};
use spdc::phasematch::{
    phase_mismatch, pump_projection_rate, rate_absorbing, rate_transparent, thickness_sweep,
    PhaseMismatch, RateModel, SpdcConfig,
};
use spdc::simulator::{analytic_expectations, simulate, SourceModel};
use spdc::tcspc::{chunked_coincidence_count, coincidence_count, g2_histogram, TimestampStream};

const PS_PER_S: i64 = 1_000_000_000_000;

fn report(number: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {number} ({name}): {} [{detail}]",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn shipped_table() -> DispersionTable {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/nboi2_synthetic.csv");
    DispersionTable::from_csv_path(path).expect("shipped table loads")
}

fn degenerate_y_config() -> SpdcConfig {
    SpdcConfig::degenerate(405.0, Axis::Y, Axis::Y).expect("degenerate config")
}

#[test]
fn acceptance_1_device_efficiency_arithmetic() {
    let devices = [
        ("device 1", 0.16, 209.0, 0.077),
        ("device 2", 0.17, 82.5, 0.21),
        ("device 3", 0.43, 216.0, 0.20),
        ("device 4", 0.38, 393.0, 0.097),
    ];
    let mut worst = 0.0f64;
    for (_, r_cc, singles, printed_pct) in devices {
        let eta_pct = 100.0 * pair_efficiency(r_cc, singles, singles).unwrap();
        worst = worst.max((eta_pct - printed_pct).abs());
    }
    report(
        1,
        "device efficiency arithmetic",
        worst <= 0.005,
        &format!("worst deviation {worst:.5} percentage points"),
    );
}

#[test]
fn acceptance_2_transparent_sweep_peaks_at_coherence_length() {
    let table = shipped_table();
    let config = degenerate_y_config();
    let sweep = thickness_sweep(&config, &table, 0.0, 2000.0, 2001, RateModel::Transparent)
        .expect("sweep runs");
    let peak = sweep.peak_thickness_nm;
    report(
        2,
        "coherence-length peak",
        (peak - 424.0).abs() <= 0.1,
        &format!("peak at {peak:.3} nm, target 424 ± 0.1"),
    );
}

#[test]
fn acceptance_3_absorbing_limit_convergence() {
    // (a) kappa = 0 agreement with the transparent closed form, 1e4 samples
    let mut rng = TestRng(0x5eed_0003);
    let mut worst_rel = 0.0f64;
    for _ in 0..10_000 {
        let mag = 10f64.powf(-5.0 + 4.3 * rng.uniform());
        let dk = if rng.uniform() < 0.5 { mag } else { -mag };
        let l = 1.0 + 2999.0 * rng.uniform();
        let absorbing = rate_absorbing(PhaseMismatch::real(dk), l).unwrap();
        let transparent = rate_transparent(dk, l).unwrap();
        if absorbing != transparent {
            let rel = (absorbing - transparent).abs() / absorbing.abs().max(transparent.abs());
            worst_rel = worst_rel.max(rel);
        }
    }
    let lossless_ok = worst_rel < 1e-9;

    // (b) complex mismatch vs Simpson quadrature of the defining integral
    let mut worst_quad = 0.0f64;
    for _ in 0..1000 {
        let mag = 10f64.powf(-4.0 + 2.7 * rng.uniform());
        let arg = (5.0 + 80.0 * rng.uniform()).to_radians();
        let dk = Complex64::from_polar(mag, arg);
        let mut l = 50.0 + 1950.0 * rng.uniform();
        if mag * l > 40.0 {
            l = 40.0 / mag;
        }
        let fast = rate_absorbing(PhaseMismatch::new(dk), l).unwrap();
        let quad = simpson_rate(dk, l, 10_000);
        let rel = (fast - quad).abs() / fast.abs().max(quad.abs());
        worst_quad = worst_quad.max(rel);
    }
    let quad_ok = worst_quad < 1e-6;

    report(
        3,
        "absorbing-limit convergence",
        lossless_ok && quad_ok,
        &format!("kappa→0 worst rel {worst_rel:.2e} (<1e-9), quadrature worst rel {worst_quad:.2e} (<1e-6)"),
    );
}

#[test]
fn acceptance_4_absorbing_optimum_and_saturation() {
    let table = shipped_table();
    let config = degenerate_y_config();

    // frozen-kappa absorbing sweep peaks at 299 ± 1 nm
    let sweep = thickness_sweep(&config, &table, 0.0, 2000.0, 2001, RateModel::Absorbing)
        .expect("sweep runs");
    let peak = sweep.peak_thickness_nm;
    let peak_ok = (peak - 299.0).abs() <= 1.0;

    // saturation: rate(20 µm) → 1/|Δk̃|² within 1e-6 relative
    let dk = phase_mismatch(&config, &table).unwrap();
    let saturation = 1.0 / dk.value.norm_sqr();
    let r = rate_absorbing(dk, 20_000.0).unwrap();
    let sat_ok = rel_close(r, saturation, 1e-6);

    // re-derive the frozen extinction coefficient from the argmax condition
    // with an independent dense-grid argmax and bisection in kappa
    let n405 = table.index_at(Axis::Y, 405.0).unwrap();
    let n810 = table.index_at(Axis::Y, 810.0).unwrap();
    let b = 2.0 * std::f64::consts::PI * (n405.n - n810.n) / 405.0;
    let argmax_for = |kappa: f64| -> f64 {
        let a = 2.0 * std::f64::consts::PI * kappa / 405.0;
        let rate = |l: f64| {
            1.0 - 2.0 * (-a * l).exp() * (b * l).cos() + (-2.0 * a * l).exp()
        };
        let mut best_l = 100.0;
        let mut best_r = f64::NEG_INFINITY;
        let mut l = 100.0;
        while l <= 600.0 {
            let r = rate(l);
            if r > best_r {
                best_r = r;
                best_l = l;
            }
            l += 0.01;
        }
        best_l
    };
    let (mut lo, mut hi) = (0.1, 1.5);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        // argmax decreases as absorption grows
        if argmax_for(mid) > 299.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let kappa_solved = 0.5 * (lo + hi);
    let kappa_ok = (kappa_solved - n405.kappa).abs() < 5e-3;

    report(
        4,
        "absorbing optimum and saturation",
        peak_ok && sat_ok && kappa_ok,
        &format!(
            "peak {peak:.3} nm (299 ± 1), saturation rel dev {:.2e} (<1e-6), re-derived kappa {kappa_solved:.4} vs frozen {:.4}",
            (r - saturation).abs() / saturation,
            n405.kappa
        ),
    );
}

#[test]
fn acceptance_5_correlator_oracle_equivalence() {
    // 1000 random small instances, three counters agree exactly
    let mut rng = TestRng(0x5eed_0005);
    let mut checked = 0u32;
    for _ in 0..1000 {
        let span = rng.range_i64(10_000, 10_000_000);
        let n1 = rng.range_i64(0, 1000) as usize;
        let n2 = rng.range_i64(0, 1000) as usize;
        let t1 = rng.sorted_times(n1, span);
        let t2 = rng.sorted_times(n2, span);
        let window = rng.range_i64(1, 10_000);
        let offset = rng.range_i64(-2000, 2000);
        let s1 = TimestampStream::new(0, t1.clone(), span).unwrap();
        let s2 = TimestampStream::new(1, t2.clone(), span).unwrap();
        let fast = coincidence_count(&s1, &s2, window, offset).unwrap();
        let naive = common::naive_coincidences(&t1, &t2, window, offset);
        let chunk_span = 10 * window + 1 + rng.range_i64(0, span / 2);
        let chunked = chunked_coincidence_count(&s1, &s2, window, offset, chunk_span).unwrap();
        assert_eq!(fast, naive, "two-pointer vs naive, window={window} offset={offset}");
        assert_eq!(fast, chunked, "chunked vs plain, chunk_span={chunk_span}");
        checked += 1;
    }

    // one million-event simulated run
    let model = SourceModel {
        pair_rate_hz: 10_000.0,
        eta1: 0.5,
        eta2: 0.5,
        dark1_hz: 1000.0,
        dark2_hz: 1000.0,
        jitter_sigma_ps: 300.0,
        dead_time_ps: 22_000,
        duration_ps: 200 * PS_PER_S,
        seed: 505,
    };
    let (s1, s2, _) = simulate(&model).unwrap();
    let big_events = s1.len().min(s2.len());
    let window = 1500;
    let fast = coincidence_count(&s1, &s2, window, 0).unwrap();
    let chunked = chunked_coincidence_count(&s1, &s2, window, 0, PS_PER_S).unwrap();
    let oracle = windowed_oracle_coincidences(s1.times_ps(), s2.times_ps(), window, 0);
    let big_ok = fast == chunked && fast == oracle;

    report(
        5,
        "correlator oracle equivalence",
        checked == 1000 && big_ok,
        &format!(
            "{checked} random instances, {big_events}-event run: plain {fast}, chunked {chunked}, oracle {oracle}"
        ),
    );
}

#[test]
fn acceptance_6_closed_loop_statistics() {
    let window = 1500;
    let base = SourceModel {
        pair_rate_hz: 1000.0,
        eta1: 0.1,
        eta2: 0.1,
        dark1_hz: 100.0,
        dark2_hz: 100.0,
        // jitter well below the window so the analytic expectations apply
        jitter_sigma_ps: 50.0,
        dead_time_ps: 22_000,
        duration_ps: 120 * PS_PER_S,
        seed: 0,
    };
    let expected = analytic_expectations(&base, window);
    let t_s = base.duration_ps as f64 * 1e-12;
    let n1_exp = expected.r1_hz * t_s;
    let n2_exp = expected.r2_hz * t_s;
    let cc_exp = expected.r_cc_hz * t_s;

    let sigma_r1 = n1_exp.sqrt() / t_s;
    let sigma_r2 = n2_exp.sqrt() / t_s;
    let sigma_rcc = cc_exp.sqrt() / t_s;
    let sigma_car = expected.car * (1.0 / cc_exp + 1.0 / n1_exp + 1.0 / n2_exp).sqrt();
    let sigma_eta = expected.eta * (1.0 / cc_exp + 0.25 / n1_exp + 0.25 / n2_exp).sqrt();

    let mut excursions = 0u32;
    for seed in 1..=30 {
        let model = SourceModel { seed, ..base };
        let (s1, s2, _) = simulate(&model).unwrap();
        let r1 = s1.rate_hz();
        let r2 = s2.rate_hz();
        let coincidences = coincidence_count(&s1, &s2, window, 0).unwrap();
        let r_cc = coincidences as f64 / t_s;
        // at these rates the shifted window sees ~0.007 accidentals, so the
        // CAR closure uses the analytic estimate
        let accidentals = s1.len() as f64 * s2.len() as f64 * window as f64 / base.duration_ps as f64;
        let car = coincidences as f64 / accidentals;
        let eta = pair_efficiency(r_cc, r1, r2).unwrap();

        for (measured, target, sigma) in [
            (r1, expected.r1_hz, sigma_r1),
            (r2, expected.r2_hz, sigma_r2),
            (r_cc, expected.r_cc_hz, sigma_rcc),
            (car, expected.car, sigma_car),
            (eta, expected.eta, sigma_eta),
        ] {
            if (measured - target).abs() > 3.0 * sigma {
                excursions += 1;
            }
        }
    }
    report(
        6,
        "closed-loop statistics",
        excursions <= 2,
        &format!("{excursions} of 150 checks beyond 3 sigma (≤ 2 allowed)"),
    );
}

#[test]
fn acceptance_7_g2_shape() {
    // zero-jitter pairs concentrate in the tau = 0 bin
    let pairs_model = SourceModel {
        pair_rate_hz: 1000.0,
        eta1: 1.0,
        eta2: 1.0,
        dark1_hz: 0.0,
        dark2_hz: 0.0,
        jitter_sigma_ps: 0.0,
        dead_time_ps: 0,
        duration_ps: 20 * PS_PER_S,
        seed: 7,
    };
    let (s1, s2, truth) = simulate(&pairs_model).unwrap();
    let hist = g2_histogram(&s1, &s2, 60, 6000).unwrap();
    let zero = hist.zero_bin();
    let concentrated =
        hist.counts[zero] >= truth.true_coincidences && hist.counts[zero] == hist.total_counts();

    // independent Poisson streams: normalized g2 within 4 sigma of 1 everywhere
    let darks_only = |seed: u64| SourceModel {
        pair_rate_hz: 0.0,
        eta1: 0.0,
        eta2: 0.0,
        dark1_hz: 10_000.0,
        dark2_hz: 10_000.0,
        jitter_sigma_ps: 0.0,
        dead_time_ps: 0,
        duration_ps: 30 * PS_PER_S,
        seed,
    };
    let (d1, _, _) = simulate(&darks_only(101)).unwrap();
    let (_, d2, _) = simulate(&darks_only(202)).unwrap();
    let flat = g2_histogram(&d1, &d2, 60, 6000).unwrap();
    let mu: f64 = 10_000.0 * 10_000.0 * 60e-12 * 30.0; // analytic counts per bin
    let normalized = flat.normalized().expect("wings are populated");
    // per-bin sigma includes the wing-average normalization noise
    let n_wing = 40.0;
    let sigma = ((1.0 + 1.0 / n_wing) / mu).sqrt();
    let mut worst_z = 0.0f64;
    for &g in &normalized {
        worst_z = worst_z.max((g - 1.0).abs() / sigma);
    }
    // the wing level itself sits on the analytic accidental prediction
    let level_ok = (flat.normalization - mu).abs() <= 4.0 * (mu / n_wing).sqrt();
    let flat_ok = worst_z <= 4.0 && level_ok;

    report(
        7,
        "g2 shape",
        concentrated && flat_ok,
        &format!(
            "zero-bin holds {}/{} counts ({} true pairs); flat-background worst |z| {worst_z:.2} (≤ 4)",
            hist.counts[zero],
            hist.total_counts(),
            truth.true_coincidences
        ),
    );
}

#[test]
fn acceptance_8_mode_matching_rule() {
    let pump = optimal_pump_waist(2.3).unwrap();
    let printed_ok = (pump - 1.63).abs() <= 0.005;

    // the design rule exactly maximizes the emission/collection overlap
    let emission = GaussianMode::new(std::f64::consts::SQRT_2 * pump, 810.0).unwrap();
    let collection = GaussianMode::new(2.3, 810.0).unwrap();
    let overlap = gaussian_overlap(&emission, &collection);
    let identity_ok = overlap == 1.0;

    report(
        8,
        "mode-matching rule",
        printed_ok && identity_ok,
        &format!("pump waist {pump:.4} µm (1.63 ± 0.005), overlap at optimum {overlap}"),
    );
}

#[test]
fn acceptance_9_fit_correctness_and_coverage() {
    // noiseless recovery to 1e-9
    let line_points: Vec<(f64, f64)> = (0..20)
        .map(|i| (i as f64 * 0.5, 3.0 * (i as f64 * 0.5) + 1.0))
        .collect();
    let fit = fit_linear(&line_points, None).unwrap();
    let line_exact = (fit.slope - 3.0).abs() < 1e-9 && (fit.intercept - 1.0).abs() < 1e-9;

    let pol_points: Vec<(f64, f64)> = (0..12)
        .map(|i| {
            let theta = i as f64 * 15.0;
            (
                theta,
                pump_projection_rate(theta, 30.0, 10.0, 1.0).unwrap(),
            )
        })
        .collect();
    let pol = fit_polarization(&pol_points, None).unwrap();
    let pol_exact = (pol.amplitude - 10.0).abs() < 1e-9
        && (pol.offset - 1.0).abs() < 1e-9
        && (pol.theta0_deg - 30.0).abs() < 1e-9;

    // 3-sigma coverage over 1000 noisy Monte Carlo trials, known errors
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let noise = Normal::new(0.0, 1.0).unwrap();

    let (true_slope, true_intercept, sigma_y) = (2.5, 7.0, 3.0);
    let xs: Vec<f64> = (1..=20).map(|i| i as f64).collect();
    let mut slope_covered = 0u32;
    for _ in 0..1000 {
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .map(|&x| {
                (
                    x,
                    true_slope * x + true_intercept + sigma_y * noise.sample(&mut rng),
                )
            })
            .collect();
        let sigmas = vec![sigma_y; pts.len()];
        let f = fit_linear(&pts, Some(&sigmas)).unwrap();
        if (f.slope - true_slope).abs() <= 3.0 * f.slope_error {
            slope_covered += 1;
        }
    }

    let (amp_true, off_true, theta0_true, sigma_r) = (10.0, 2.0, 37.0, 0.25);
    let angles: Vec<f64> = (0..12).map(|i| i as f64 * 15.0).collect();
    let mut amp_covered = 0u32;
    let mut theta0_covered = 0u32;
    for _ in 0..1000 {
        let pts: Vec<(f64, f64)> = angles
            .iter()
            .map(|&theta| {
                let clean = pump_projection_rate(theta, theta0_true, amp_true, off_true).unwrap();
                (theta, clean + sigma_r * noise.sample(&mut rng))
            })
            .collect();
        let sigmas = vec![sigma_r; pts.len()];
        let f = fit_polarization(&pts, Some(&sigmas)).unwrap();
        if (f.amplitude - amp_true).abs() <= 3.0 * f.amplitude_error {
            amp_covered += 1;
        }
        if (f.theta0_deg - theta0_true).abs() <= 3.0 * f.theta0_error_deg {
            theta0_covered += 1;
        }
    }

    let coverage_ok = slope_covered >= 990 && amp_covered >= 990 && theta0_covered >= 990;
    report(
        9,
        "fit correctness and coverage",
        line_exact && pol_exact && coverage_ok,
        &format!(
            "noiseless exact: {line_exact}/{pol_exact}; coverage slope {slope_covered}, amplitude {amp_covered}, theta0 {theta0_covered} of 1000 (≥ 990)"
        ),
    );
}
