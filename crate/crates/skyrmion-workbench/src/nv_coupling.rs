//! NV center qubit frequency and its magnetic coupling to the quantized
//! gyration mode, for an NV sitting on the disk axis above the film.

use crate::bp_skyrmion::{gyration_radius, DiskGeometry, MaterialParams, SkyrmionConfig};
use crate::constants::GAMMA_E;
use crate::quadrature::QuadratureSpec;
use crate::stray_field::f_sn_integral;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Single NV center on the disk axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NVCenter {
    /// Gap between the film top surface and the NV, m.
    pub standoff: f64,
    /// Zero-field splitting D, rad/s.
    pub zero_field_splitting: f64,
    /// Static bias field along the NV axis, T.
    pub axial_field: f64,
}

impl NVCenter {
    pub const DEFAULT_ZERO_FIELD_SPLITTING: f64 = 2.0 * PI * 2.87e9;

    pub fn new(standoff: f64, zero_field_splitting: f64, axial_field: f64) -> Result<Self> {
        if !(standoff > 0.0) {
            return Err(Error::InvalidInput(format!("NV standoff must be > 0 m, got {standoff}")));
        }
        if !(zero_field_splitting > 0.0) {
            return Err(Error::InvalidInput(format!(
                "zero-field splitting must be > 0 rad/s, got {zero_field_splitting}"
            )));
        }
        Ok(Self { standoff, zero_field_splitting, axial_field })
    }
}

/// Skyrmion-NV coupling summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NVCouplingResult {
    /// Coupling rate Lambda_SN, rad/s (non-negative).
    pub lambda_sn: f64,
    /// Reduced on-axis coupling integral modulus.
    pub f_sn: f64,
    /// Phase of the x-component coupling, rad.
    pub phase_x: f64,
}

/// Qubit transition frequency of the lower Zeeman branch, rad/s:
/// omega_NV = D - gamma_e B_z. Errors when the bias pushes it non-positive.
pub fn nv_qubit_frequency(nv: &NVCenter) -> Result<f64> {
    let omega = nv.zero_field_splitting - GAMMA_E * nv.axial_field;
    if !(omega > 0.0) {
        return Err(Error::InvalidInput(format!(
            "axial field {} T drives the qubit frequency non-positive",
            nv.axial_field
        )));
    }
    Ok(omega)
}

/// Coupling rate between the quantized gyration mode and the NV:
/// Lambda_SN = gamma_e mu_0 M_S r_c F_SN / (4 R), with r_c the zero-point
/// gyration radius of the same texture and F_SN the reduced on-axis
/// integral evaluated at the NV height.
pub fn lambda_sn(
    geometry: &DiskGeometry,
    cfg: &SkyrmionConfig,
    material: &MaterialParams,
    nv: &NVCenter,
    spec: &QuadratureSpec,
) -> Result<NVCouplingResult> {
    let r = geometry.radius;
    let h_sn = (nv.standoff + geometry.thickness / 2.0) / r;
    let (f_sn, phase_x) = f_sn_integral(cfg.reduced_radius, h_sn, geometry.thickness / r, spec)?;
    let r_c = gyration_radius(geometry, cfg, material);
    let lambda = GAMMA_E * crate::constants::MU_0 * material.saturation_magnetization * r_c * f_sn
        / (4.0 * r);
    Ok(NVCouplingResult { lambda_sn: lambda, f_sn, phase_x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stray_field::on_axis_components;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn setup() -> (DiskGeometry, SkyrmionConfig, MaterialParams) {
        let geo = DiskGeometry::new(100e-9, 5e-9).unwrap();
        let cfg = SkyrmionConfig::new(&geo, 0.1, FRAC_PI_2, 1, -1, -1).unwrap();
        let mat = MaterialParams::new(1e6, 2.0, 1e-4).unwrap();
        (geo, cfg, mat)
    }

    #[test]
    fn qubit_frequency_follows_zeeman_shift() {
        let nv = NVCenter::new(5e-9, NVCenter::DEFAULT_ZERO_FIELD_SPLITTING, 0.0).unwrap();
        assert_relative_eq!(nv_qubit_frequency(&nv).unwrap(), 2.0 * PI * 2.87e9);
        let biased = NVCenter { axial_field: 0.05, ..nv };
        assert_relative_eq!(
            nv_qubit_frequency(&biased).unwrap(),
            2.0 * PI * 2.87e9 - GAMMA_E * 0.05,
            max_relative = 1e-14
        );
        // 2.87 GHz splitting is overcome at about 102 mT.
        let flipped = NVCenter { axial_field: 0.2, ..nv };
        assert!(nv_qubit_frequency(&flipped).is_err());
    }

    #[test]
    fn coupling_reference_value() {
        // 5 nm standoff above a 5 nm film: about 2 pi x 12.5 MHz.
        let (geo, cfg, mat) = setup();
        let nv = NVCenter::new(5e-9, NVCenter::DEFAULT_ZERO_FIELD_SPLITTING, 0.0).unwrap();
        let res = lambda_sn(&geo, &cfg, &mat, &nv, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(res.lambda_sn, 7.867246e7, max_relative = 1e-6);
        assert_relative_eq!(res.f_sn, 2.911949, max_relative = 1e-6);
        assert_relative_eq!(res.phase_x, 3.139907, max_relative = 1e-5);
        assert_relative_eq!(res.lambda_sn / (2.0 * PI * 1e6), 12.5211, max_relative = 1e-4);
    }

    #[test]
    fn coupling_agrees_with_field_route() {
        // Lambda_SN must equal gamma_e |B_x| from the on-axis field, which
        // exercises the mu_0 M_S r_c / (4 R) bookkeeping end to end.
        let (geo, cfg, mat) = setup();
        let nv = NVCenter::new(5e-9, NVCenter::DEFAULT_ZERO_FIELD_SPLITTING, 0.0).unwrap();
        let spec = QuadratureSpec::default();
        let res = lambda_sn(&geo, &cfg, &mat, &nv, &spec).unwrap();
        let r_c = gyration_radius(&geo, &cfg, &mat);
        let b = on_axis_components(nv.standoff + geo.thickness / 2.0, &geo, &cfg, &mat, r_c, &spec)
            .unwrap();
        assert_relative_eq!(res.lambda_sn, GAMMA_E * b[0].norm(), max_relative = 1e-12);
    }

    #[test]
    fn coupling_decays_monotonically_with_standoff() {
        let (geo, cfg, mat) = setup();
        let spec = QuadratureSpec::default();
        let mut last = f64::INFINITY;
        for d in [2e-9, 5e-9, 10e-9, 20e-9, 40e-9] {
            let nv = NVCenter::new(d, NVCenter::DEFAULT_ZERO_FIELD_SPLITTING, 0.0).unwrap();
            let res = lambda_sn(&geo, &cfg, &mat, &nv, &spec).unwrap();
            assert!(res.lambda_sn < last);
            last = res.lambda_sn;
        }
    }
}
