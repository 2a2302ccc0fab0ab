//! Skyrmion-transmon coupling through the SQUID flux: the complex flux
//! amplitude threading an off-center pickup loop, the resulting transverse
//! and longitudinal rates, and the junction-asymmetry correction.
//!
//! ```bash
//! cargo run --example transmon_coupling
//! ```

use skyrmion_workbench::bp_skyrmion::{
    gyration_radius, DiskGeometry, MaterialParams, SkyrmionConfig,
};
use skyrmion_workbench::quadrature::QuadratureSpec;
use skyrmion_workbench::stray_field::{flux_amplitude, SquidLoop};
use skyrmion_workbench::transmon::{coupling_strengths, regime_diagnostics, TransmonParams};
use skyrmion_workbench::Result;
use std::f64::consts::{FRAC_PI_2, TAU};

fn main() -> Result<()> {
    let geometry = DiskGeometry::new(100e-9, 5e-9)?;
    let material = MaterialParams::new(1e6, 2.0, 1e-4)?;
    let cfg = SkyrmionConfig::new(&geometry, 0.1, FRAC_PI_2, 1, -1, -1)?;
    let r_c = gyration_radius(&geometry, &cfg, &material);
    let spec = QuadratureSpec::default();

    // Flux-tunable transmon biased at a quarter flux quantum.
    let transmon = TransmonParams::new(TAU * 50e9, TAU * 200e6, 0.06, FRAC_PI_2)?;
    let derived = regime_diagnostics(&transmon);
    println!("transmon frequency = {:.4} GHz", derived.omega_tr / TAU / 1e9);
    println!("eta_T = {:.2}, eta_lambda = {:.4}, phi_zpf = {:.4} rad", derived.eta_t, derived.eta_lambda, derived.zpf_phase);

    // Pickup loop of half the disk radius, centered half a radius off axis.
    let squid = SquidLoop::new([50e-9, 0.0, 10e-9], 50e-9, &geometry)?;
    let flux = flux_amplitude(&squid, &geometry, &cfg, &material, r_c, &spec)?;
    println!(
        "\nflux amplitude: |F_Phi| = {:.5e}, phase = {:.4} rad, scale = {:.4e} Wb",
        flux.modulus, flux.phase, flux.flux_scale
    );

    let couplings = coupling_strengths(&transmon, &flux);
    println!("Lambda_ST^T/2pi  = {:.4} MHz", couplings.lambda_t / TAU / 1e6);
    println!("Lambda_ST^L/2pi  = {:.2e} MHz (vanishes at this bias)", couplings.lambda_l / TAU / 1e6);
    println!(
        "corrected transverse rate = {:.4} MHz (factor 1 - eta_lambda)",
        couplings.lambda_t_corrected / TAU / 1e6
    );

    // A centered loop threads no net mode flux.
    let centered = SquidLoop::new([0.0, 0.0, 10e-9], 50e-9, &geometry)?;
    let null = flux_amplitude(&centered, &geometry, &cfg, &material, r_c, &spec)?;
    println!(
        "\ncentered-loop flux |F_Phi| = {:.2e} ({:.0e} of the off-center value)",
        null.modulus,
        null.modulus / flux.modulus
    );
    Ok(())
}
