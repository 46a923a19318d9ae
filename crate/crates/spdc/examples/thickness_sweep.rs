//! Pair rate versus crystal thickness for the shipped synthetic
//! NbOI₂-like dispersion table, with and without pump absorption.
//!
//! ```bash
//! cargo run --example thickness_sweep
//! ```

use spdc::dispersion::{Axis, DispersionTable};
use spdc::phasematch::{coherence_length, phase_mismatch, thickness_sweep, RateModel, SpdcConfig};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/nboi2_synthetic.csv");
    let table = DispersionTable::from_csv_path(path).expect("shipped table loads");

    // degenerate 405 nm -> 810 nm + 810 nm, everything polarized along y
    let config = SpdcConfig::degenerate(405.0, Axis::Y, Axis::Y).unwrap();
    let dk = phase_mismatch(&config, &table).unwrap();
    println!(
        "phase mismatch: {:.6} + {:.6}i rad/nm",
        dk.value.re, dk.value.im
    );
    println!(
        "coherence length pi/|Re dk|: {:.2} nm",
        coherence_length(dk.value.re).unwrap()
    );

    for (label, model) in [
        ("transparent", RateModel::Transparent),
        ("absorbing  ", RateModel::Absorbing),
    ] {
        let sweep = thickness_sweep(&config, &table, 0.0, 2000.0, 2001, model).unwrap();
        println!(
            "{label} sweep: peak at {:.2} nm, relative rate {:.4e}",
            sweep.peak_thickness_nm, sweep.peak_rate
        );
    }

    // the absorbing curve saturates instead of oscillating forever
    use spdc::phasematch::rate_absorbing;
    println!("\n L (nm)   absorbing rate / saturation");
    let saturation = 1.0 / dk.value.norm_sqr();
    for l in [100.0, 299.0, 424.0, 848.0, 2000.0, 10_000.0] {
        let r = rate_absorbing(dk, l).unwrap();
        println!("{l:>7.0}   {:.4}", r / saturation);
    }
}
