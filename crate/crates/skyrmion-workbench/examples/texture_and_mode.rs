//! Static skyrmion texture and its gyration-mode function: unit-norm
//! magnetization, tangency of the mode deflection, and the normalization of
//! the quantized spin-wave amplitude.
//!
//! ```bash
//! cargo run --example texture_and_mode
//! ```

use skyrmion_workbench::bp_skyrmion::{
    gyration_radius, magnetization, mode_function, spinwave_norm, DiskGeometry, MaterialParams,
    SkyrmionConfig,
};
use skyrmion_workbench::Result;
use std::f64::consts::FRAC_PI_2;

fn main() -> Result<()> {
    let geometry = DiskGeometry::new(100e-9, 5e-9)?;
    let material = MaterialParams::new(1e6, 2.0, 1e-4)?;
    // Core-down Bloch texture with a tenth-radius core.
    let cfg = SkyrmionConfig::new(&geometry, 0.1, FRAC_PI_2, 1, -1, -1)?;
    let r_c = gyration_radius(&geometry, &cfg, &material);
    println!("zero-point gyration radius r_c = {:.4e} m", r_c);

    println!("\n  r/R     m_x      m_y      m_z     |m|-1      |m.dm|");
    for i in 0..8 {
        let x = 0.05 * i as f64 * geometry.radius;
        let y = 0.35 * x;
        let m = magnetization(x, y, &cfg);
        let dm = mode_function(x, y, &cfg, r_c);
        let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
        // The linearized deflection must stay tangent to the sphere.
        let dot = (0..3).map(|k| dm[k] * m[k]).sum::<num_complex::Complex64>();
        println!(
            "  {:.2}  {:+.4}  {:+.4}  {:+.4}  {:+.1e}  {:.1e}",
            x / geometry.radius,
            m[0],
            m[1],
            m[2],
            norm - 1.0,
            dot.norm()
        );
    }

    let norm = spinwave_norm(&geometry, &cfg, &material, r_c, 256)?;
    println!("\nspin-wave amplitude volume norm = {:.6} (1 = zero-point normalized)", norm);
    Ok(())
}
