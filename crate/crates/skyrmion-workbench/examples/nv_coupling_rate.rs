//! Skyrmion-NV coupling through the quantized stray field: the single-spin
//! rate at the reference geometry, its decay with probe standoff, and the
//! on-axis selection structure (no vertical component, transverse components
//! in quadrature).
//!
//! ```bash
//! cargo run --example nv_coupling_rate
//! ```

use skyrmion_workbench::bp_skyrmion::{
    gyration_radius, DiskGeometry, MaterialParams, SkyrmionConfig,
};
use skyrmion_workbench::nv_coupling::{lambda_sn, nv_qubit_frequency, NVCenter};
use skyrmion_workbench::quadrature::QuadratureSpec;
use skyrmion_workbench::stray_field::on_axis_components;
use skyrmion_workbench::Result;
use std::f64::consts::{FRAC_PI_2, TAU};

fn main() -> Result<()> {
    let geometry = DiskGeometry::new(100e-9, 5e-9)?;
    let material = MaterialParams::new(1e6, 2.0, 1e-4)?;
    let cfg = SkyrmionConfig::new(&geometry, 0.1, FRAC_PI_2, 1, -1, -1)?;
    let spec = QuadratureSpec::default();

    let nv = NVCenter::new(5e-9, NVCenter::DEFAULT_ZERO_FIELD_SPLITTING, 0.0)?;
    println!("NV qubit frequency = {:.3} GHz", nv_qubit_frequency(&nv)? / TAU / 1e9);

    let anchor = lambda_sn(&geometry, &cfg, &material, &nv, &spec)?;
    println!(
        "Lambda_SN/2pi = {:.4} MHz at 5 nm standoff (F_SN = {:.4})",
        anchor.lambda_sn / TAU / 1e6,
        anchor.f_sn
    );

    println!("\n  standoff_nm   Lambda_SN/2pi_MHz");
    for standoff_nm in [5.0, 10.0, 15.0, 25.0, 40.0] {
        let probe = NVCenter { standoff: standoff_nm * 1e-9, ..nv };
        let point = lambda_sn(&geometry, &cfg, &material, &probe, &spec)?;
        println!("  {:>8.1}      {:.4}", standoff_nm, point.lambda_sn / TAU / 1e6);
    }

    // On the symmetry axis the mode couples only transversally, with the two
    // components a quarter turn apart: the circular selection rule.
    let r_c = gyration_radius(&geometry, &cfg, &material);
    let z = geometry.thickness / 2.0 + nv.standoff;
    let axis = on_axis_components(z, &geometry, &cfg, &material, r_c, &spec)?;
    println!(
        "\non-axis field mode: |Bx| = {:.3e} T, |By| = {:.3e} T, |Bz| = {:.1e} T",
        axis[0].norm(),
        axis[1].norm(),
        axis[2].norm()
    );
    println!(
        "transverse phase offset = {:.6} rad (pi/2 = {:.6})",
        (axis[1] / axis[0]).arg().abs(),
        FRAC_PI_2
    );
    Ok(())
}
