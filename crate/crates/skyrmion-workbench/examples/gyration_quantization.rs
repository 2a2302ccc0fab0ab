//! Quantized gyration branches of the massive collective coordinate: the
//! gyrotropic constant from film and texture, the two circular branch rates,
//! and their split by the gyrocoupling sign.
//!
//! ```bash
//! cargo run --example gyration_quantization
//! ```

use skyrmion_workbench::bp_skyrmion::{
    gyration_frequencies, gyrocoupling_constant, DiskGeometry, GyrationModeParams, MaterialParams,
};
use skyrmion_workbench::Result;
use std::f64::consts::TAU;

fn main() -> Result<()> {
    let geometry = DiskGeometry::new(100e-9, 5e-9)?;
    let material = MaterialParams::new(1e6, 2.0, 1e-4)?;
    let g = gyrocoupling_constant(&geometry, &material, -1);
    println!("gyrotropic constant G = {:.5e} kg/s (charge -1)", g);

    // Mass and stiffness chosen so the low branch sits at 0.95 GHz.
    let mass = 1.0e-22;
    let stiffness = 5.69283e-3;
    let mode = GyrationModeParams::new(mass, g, stiffness)?;
    let branches = gyration_frequencies(&mode)?;
    println!("  cw  branch: {:.4} GHz", branches.omega_cw / TAU / 1e9);
    println!("  ccw branch: {:.4} GHz", branches.omega_ccw / TAU / 1e9);

    // Flipping the topological charge swaps the branch labels.
    let flipped = GyrationModeParams::new(mass, -g, stiffness)?;
    let swapped = gyration_frequencies(&flipped)?;
    println!(
        "charge +1 swaps the branches: cw {:.4} GHz, ccw {:.4} GHz",
        swapped.omega_cw / TAU / 1e9,
        swapped.omega_ccw / TAU / 1e9
    );

    // The splitting between the branches is set by the gyrocoupling alone.
    println!(
        "branch splitting {:.4} GHz vs |G|/M = {:.4} GHz",
        (branches.omega_ccw - branches.omega_cw) / TAU / 1e9,
        g.abs() / mass / TAU / 1e9
    );
    Ok(())
}
