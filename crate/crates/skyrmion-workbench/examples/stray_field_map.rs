//! Stray-field mode map above the film: complex field components on a
//! horizontal grid, the inversion parity of the vertical component, and the
//! in-plane magnitude falling off past the disk edge.
//!
//! ```bash
//! cargo run --example stray_field_map
//! ```

use skyrmion_workbench::bp_skyrmion::{
    gyration_radius, DiskGeometry, MaterialParams, SkyrmionConfig,
};
use skyrmion_workbench::quadrature::QuadratureSpec;
use skyrmion_workbench::stray_field::field_mode_at;
use skyrmion_workbench::Result;
use std::f64::consts::FRAC_PI_2;

fn main() -> Result<()> {
    let geometry = DiskGeometry::new(100e-9, 5e-9)?;
    let material = MaterialParams::new(1e6, 2.0, 1e-4)?;
    let cfg = SkyrmionConfig::new(&geometry, 0.1, FRAC_PI_2, 1, -1, -1)?;
    let r_c = gyration_radius(&geometry, &cfg, &material);
    let spec = QuadratureSpec::default();
    let z = geometry.thickness / 2.0 + 10e-9;

    // Radial cut: the in-plane field is strongest over the core region and
    // decays toward and past the rim.
    println!("  x/R    |B_inplane| (T)   |B_z| (T)");
    for i in 0..9 {
        let x = 0.25 * i as f64 * geometry.radius;
        let b = field_mode_at([x, 0.0, z], &geometry, &cfg, &material, r_c, &spec)?;
        let inplane = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
        println!("  {:.2}   {:.6e}      {:.3e}", x / geometry.radius, inplane, b[2].norm());
    }

    // The vertical component is odd under in-plane inversion.
    let probe = [55e-9, -30e-9, z];
    let here = field_mode_at(probe, &geometry, &cfg, &material, r_c, &spec)?;
    let there = field_mode_at([-probe[0], -probe[1], z], &geometry, &cfg, &material, r_c, &spec)?;
    println!(
        "\nB_z parity: |B_z(r) + B_z(-r)| = {:.2e} T against |B_z| = {:.4e} T",
        (here[2] + there[2]).norm(),
        here[2].norm()
    );

    // Points inside the magnetic volume are rejected, not extrapolated.
    let inside = field_mode_at([0.0, 0.0, 0.0], &geometry, &cfg, &material, r_c, &spec);
    println!("field at the disk center: {}", inside.unwrap_err());
    Ok(())
}
