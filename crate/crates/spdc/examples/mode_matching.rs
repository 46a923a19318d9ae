//! Fiber-coupling bookkeeping: the shipped fiber catalog, acceptance
//! angles, the optimal pump waist rule, and how sensitive the emission /
//! collection overlap is to pump focusing.
//!
//! ```bash
//! cargo run --example mode_matching
//! ```

use spdc::modecoupling::{
    acceptance_half_angle, gaussian_overlap, load_fiber_catalog, optimal_pump_waist, GaussianMode,
};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/fibers.json");
    let fibers = load_fiber_catalog(path).expect("catalog loads");

    println!("fiber catalog:");
    for fiber in &fibers {
        println!(
            "  {:<28} NA {:.2}  core {:>4.1} µm  mode waist {:.2} µm @ {:.0} nm  ({:?})  half-angle {:.2}°",
            fiber.name,
            fiber.numerical_aperture,
            fiber.core_diameter_um,
            fiber.mode_waist_um(),
            fiber.reference_wavelength_nm,
            fiber.modality,
            acceptance_half_angle(fiber).unwrap(),
        );
    }

    // collection mode waist of the single-mode collection fiber at 810 nm
    let collection_waist = 2.3;
    let pump_waist = optimal_pump_waist(collection_waist).unwrap();
    println!();
    println!("collection waist ω_c = {collection_waist} µm at 810 nm");
    println!("optimal pump waist ω_c/√2 = {pump_waist:.3} µm");

    // overlap between the emission mode (ω_p·√2) and the collection mode
    println!();
    println!("pump waist (µm)   emission/collection overlap");
    let collection = GaussianMode::new(collection_waist, 810.0).unwrap();
    for scale in [0.5, 0.75, 1.0, 1.25, 1.5, 2.0] {
        let wp = pump_waist * scale;
        let emission = GaussianMode::new(wp * std::f64::consts::SQRT_2, 810.0).unwrap();
        println!(
            "{wp:>15.3}   {:.4}{}",
            gaussian_overlap(&emission, &collection),
            if scale == 1.0 { "   <- design rule" } else { "" }
        );
    }
}
