//! Belavin-Polyakov skyrmion in a thin disk: static texture, gyration mode
//! function, quantized spin-wave amplitude, and the quantized gyration
//! frequencies of the collective coordinate.
//!
//! The texture is scale-free: all spatial formulas depend on position only
//! through x/R_Sk, so they are evaluated directly in SI meters. The disk
//! enters through the zero-point gyration radius (normalization over the
//! finite volume) and through the gyrotropic constant.

use crate::constants::MU_B;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Ferromagnet material constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Saturation magnetization M_S, A/m.
    pub saturation_magnetization: f64,
    /// Lande g-factor of the magnon moment.
    pub g_factor: f64,
    /// Gilbert damping constant; only enters dissipative estimates.
    pub gilbert_damping: f64,
}

impl MaterialParams {
    pub fn new(saturation_magnetization: f64, g_factor: f64, gilbert_damping: f64) -> Result<Self> {
        if !(saturation_magnetization > 0.0) {
            return Err(Error::InvalidInput(format!(
                "saturation magnetization must be > 0 A/m, got {saturation_magnetization}"
            )));
        }
        if !(g_factor > 0.0) {
            return Err(Error::InvalidInput(format!("g-factor must be > 0, got {g_factor}")));
        }
        if !(gilbert_damping >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "Gilbert damping must be >= 0, got {gilbert_damping}"
            )));
        }
        Ok(Self { saturation_magnetization, g_factor, gilbert_damping })
    }
}

/// Cylindrical ferromagnetic disk hosting the texture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskGeometry {
    /// Disk radius R, m.
    pub radius: f64,
    /// Film thickness h_G, m.
    pub thickness: f64,
}

impl DiskGeometry {
    pub fn new(radius: f64, thickness: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!("disk radius must be > 0 m, got {radius}")));
        }
        if !(thickness > 0.0) {
            return Err(Error::InvalidInput(format!(
                "disk thickness must be > 0 m, got {thickness}"
            )));
        }
        Ok(Self { radius, thickness })
    }

    /// Aspect ratio R / h_G.
    pub fn aspect_ratio(&self) -> f64 {
        self.radius / self.thickness
    }

    /// The mode profile assumes a z-uniform texture, which holds for thin
    /// films. Callers should warn when this returns false (R/h_G < 10).
    pub fn is_thin_film(&self) -> bool {
        self.aspect_ratio() >= 10.0
    }
}

/// Skyrmion texture parameters. Chirality is redundant with the helicity
/// phase for pure Bloch or Neel textures and is validated against it there;
/// for intermediate helicities it is carried as descriptive metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkyrmionConfig {
    /// Core size R_Sk, m.
    pub skyrmion_radius: f64,
    /// R_Sk / R of the hosting disk.
    pub reduced_radius: f64,
    /// Helicity phase of the in-plane winding, rad.
    pub phase: f64,
    /// +1 or -1; sign of the in-plane curl sense for Bloch textures.
    pub chirality: i8,
    /// Core polarity P = m_z(0), +1 or -1.
    pub polarity: i8,
    /// Topological charge Q of the texture.
    pub topological_charge: i32,
}

impl SkyrmionConfig {
    /// Texture of reduced radius c = R_Sk/R inside a disk. Requires
    /// 0 < c < 1 so the core sits inside the film.
    pub fn new(
        geometry: &DiskGeometry,
        reduced_radius: f64,
        phase: f64,
        chirality: i8,
        polarity: i8,
        topological_charge: i32,
    ) -> Result<Self> {
        if !(reduced_radius > 0.0 && reduced_radius < 1.0) {
            return Err(Error::InvalidInput(format!(
                "reduced skyrmion radius must be in (0, 1), got {reduced_radius}"
            )));
        }
        if chirality != 1 && chirality != -1 {
            return Err(Error::InvalidInput(format!("chirality must be +1 or -1, got {chirality}")));
        }
        if polarity != 1 && polarity != -1 {
            return Err(Error::InvalidInput(format!("polarity must be +1 or -1, got {polarity}")));
        }
        let (s, c) = phase.sin_cos();
        // Pure Bloch (phase = +-pi/2): chirality is sign(sin phase).
        // Pure Neel (phase = 0 or pi): chirality is sign(cos phase).
        let eps = 1e-9;
        if c.abs() < eps && f64::from(chirality) * s < 0.0 {
            return Err(Error::InvalidInput(format!(
                "chirality {chirality} inconsistent with Bloch helicity phase {phase}"
            )));
        }
        if s.abs() < eps && f64::from(chirality) * c < 0.0 {
            return Err(Error::InvalidInput(format!(
                "chirality {chirality} inconsistent with Neel helicity phase {phase}"
            )));
        }
        Ok(Self {
            skyrmion_radius: reduced_radius * geometry.radius,
            reduced_radius,
            phase,
            chirality,
            polarity,
            topological_charge,
        })
    }
}

/// Collective-coordinate parameters of the gyration mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GyrationModeParams {
    /// Inertial mass M of the core coordinate, kg.
    pub inertial_mass: f64,
    /// Gyrotropic constant G (signed; sign follows the topological charge),
    /// kg/s.
    pub gyrocoupling: f64,
    /// Confining stiffness k, kg/s^2.
    pub stiffness: f64,
}

impl GyrationModeParams {
    pub fn new(inertial_mass: f64, gyrocoupling: f64, stiffness: f64) -> Result<Self> {
        if !(inertial_mass > 0.0) {
            return Err(Error::InvalidInput(format!(
                "inertial mass must be > 0 kg, got {inertial_mass}"
            )));
        }
        if !(stiffness >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "stiffness must be >= 0 kg/s^2, got {stiffness}"
            )));
        }
        if !gyrocoupling.is_finite() {
            return Err(Error::InvalidInput("gyrocoupling must be finite".into()));
        }
        Ok(Self { inertial_mass, gyrocoupling, stiffness })
    }
}

/// The two quantized gyration branches, rad/s. Both are non-negative; for
/// negative topological charge the clockwise branch is the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizedGyration {
    pub omega_cw: f64,
    pub omega_ccw: f64,
}

/// Gyrotropic constant G = 4 pi h_G M_S Q / gamma_e of a z-uniform texture
/// with topological charge Q, kg/s.
pub fn gyrocoupling_constant(
    geometry: &DiskGeometry,
    material: &MaterialParams,
    topological_charge: i32,
) -> f64 {
    4.0 * PI * geometry.thickness * material.saturation_magnetization
        * f64::from(topological_charge)
        / crate::constants::GAMMA_E
}

/// Static texture unit vector at in-plane position (x, y) meters.
pub fn magnetization(x: f64, y: f64, cfg: &SkyrmionConfig) -> [f64; 3] {
    let rsk = cfg.skyrmion_radius;
    let d = rsk * rsk + x * x + y * y;
    let (s, c) = cfg.phase.sin_cos();
    let p = f64::from(cfg.polarity);
    [
        2.0 * rsk * (x * c - y * s) / d,
        2.0 * rsk * (x * s + y * c) / d,
        p * (rsk * rsk - (x * x + y * y)) / d,
    ]
}

/// Complex gyration-mode deflection of the texture per unit core
/// displacement, evaluated at (x, y) meters and scaled by the zero-point
/// radius r_c. Equals the rigid-core derivative combination
/// -(r_c/2) (d/dx - i P d/dy) m and is tangent to the texture pointwise.
pub fn mode_function(x: f64, y: f64, cfg: &SkyrmionConfig, r_c: f64) -> [Complex64; 3] {
    let rsk = cfg.skyrmion_radius;
    let p = f64::from(cfg.polarity);
    let d = rsk * rsk + x * x + y * y;
    let (s, c) = cfg.phase.sin_cos();
    let w = Complex64::new(x, -p * y);
    let pre = -r_c * rsk / (d * d);
    [
        pre * (Complex64::new(c, p * s) * d - 2.0 * w * (x * c - y * s)),
        pre * (Complex64::new(s, -p * c) * d - 2.0 * w * (x * s + y * c)),
        2.0 * p * r_c * rsk * rsk / (d * d) * w,
    ]
}

/// Quantized spin-wave amplitude of the gyration mode (volume density,
/// m^-3/2). Its modulus squared integrates to one over the disk volume when
/// r_c is the zero-point radius of the same geometry. The modulus is
/// azimuthally symmetric; the phase winds once, with the sense set by the
/// polarity.
pub fn spinwave_amplitude(
    x: f64,
    y: f64,
    cfg: &SkyrmionConfig,
    material: &MaterialParams,
    r_c: f64,
) -> Complex64 {
    let rsk = cfg.skyrmion_radius;
    let p = f64::from(cfg.polarity);
    let d = rsk * rsk + x * x + y * y;
    let phi = y.atan2(x);
    let dens = (material.saturation_magnetization / (material.g_factor * MU_B)).sqrt();
    -r_c * rsk * FRAC_1_SQRT_2 * dens / d * Complex64::new(phi.sin(), p * phi.cos())
}

/// Volume integral of |spinwave_amplitude|^2 over the disk. The azimuthal
/// direction is exact (the modulus does not depend on it); the radial
/// direction uses Gauss-Legendre with `radial_points` nodes. Returns 1 up to
/// quadrature error when r_c is the matching zero-point radius.
pub fn spinwave_norm(
    geometry: &DiskGeometry,
    cfg: &SkyrmionConfig,
    material: &MaterialParams,
    r_c: f64,
    radial_points: usize,
) -> Result<f64> {
    let nodes = crate::quadrature::gauss_legendre(radial_points, 0.0, geometry.radius)?;
    let mut acc = 0.0;
    for &(rho, w) in &nodes {
        let psi = spinwave_amplitude(rho, 0.0, cfg, material, r_c);
        acc += w * rho * psi.norm_sqr();
    }
    Ok(2.0 * PI * geometry.thickness * acc)
}

/// Zero-point gyration radius of the quantized mode, m:
/// r_c = sqrt(2 g mu_B (R^2 + R_Sk^2) / (pi h_G R^2 M_S)).
pub fn gyration_radius(
    geometry: &DiskGeometry,
    cfg: &SkyrmionConfig,
    material: &MaterialParams,
) -> f64 {
    let r2 = geometry.radius * geometry.radius;
    let rsk2 = cfg.skyrmion_radius * cfg.skyrmion_radius;
    (2.0 * material.g_factor * MU_B * (r2 + rsk2)
        / (PI * geometry.thickness * r2 * material.saturation_magnetization))
        .sqrt()
}

/// Quantized gyration frequencies of the massive collective coordinate.
/// With the signed half-gyrofrequency w0 = G/(2M) and w = sqrt(w0^2 + k/M),
/// the branches are omega_cw = w + w0 and omega_ccw = w - w0, both
/// non-negative. G = 0 degenerates both branches to sqrt(k/M); k = 0 pins
/// the low branch at zero.
pub fn gyration_frequencies(params: &GyrationModeParams) -> Result<QuantizedGyration> {
    let w0 = params.gyrocoupling / (2.0 * params.inertial_mass);
    let w = (w0 * w0 + params.stiffness / params.inertial_mass).sqrt();
    let omega_cw = w + w0;
    let omega_ccw = w - w0;
    if !(omega_cw >= 0.0 && omega_ccw >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "gyration branches must be non-negative, got cw = {omega_cw}, ccw = {omega_ccw}"
        )));
    }
    Ok(QuantizedGyration { omega_cw, omega_ccw })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::GAMMA_E;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn disk() -> DiskGeometry {
        DiskGeometry::new(100e-9, 5e-9).unwrap()
    }

    fn material() -> MaterialParams {
        MaterialParams::new(1e6, 2.0, 1e-4).unwrap()
    }

    /// Core-down Bloch texture used throughout the coupling studies.
    fn bloch_cfg() -> SkyrmionConfig {
        SkyrmionConfig::new(&disk(), 0.1, std::f64::consts::FRAC_PI_2, 1, -1, -1).unwrap()
    }

    fn neel_cfg() -> SkyrmionConfig {
        SkyrmionConfig::new(&disk(), 0.3, 0.0, 1, 1, 1).unwrap()
    }

    #[test]
    fn chirality_must_match_bloch_helicity() {
        assert!(SkyrmionConfig::new(&disk(), 0.1, std::f64::consts::FRAC_PI_2, -1, -1, -1).is_err());
        assert!(SkyrmionConfig::new(&disk(), 0.1, -std::f64::consts::FRAC_PI_2, -1, -1, -1).is_ok());
        assert!(SkyrmionConfig::new(&disk(), 0.1, PI, 1, 1, 1).is_err());
        // Intermediate helicity: chirality is metadata, both signs accepted.
        assert!(SkyrmionConfig::new(&disk(), 0.1, 0.7, 1, 1, 1).is_ok());
        assert!(SkyrmionConfig::new(&disk(), 0.1, 0.7, -1, 1, 1).is_ok());
    }

    #[test]
    fn texture_center_and_edge() {
        let cfg = bloch_cfg();
        let m0 = magnetization(0.0, 0.0, &cfg);
        assert_abs_diff_eq!(m0[0], 0.0);
        assert_abs_diff_eq!(m0[1], 0.0);
        assert_abs_diff_eq!(m0[2], -1.0);
        // On the core circle the texture lies fully in-plane and azimuthal.
        let m = magnetization(cfg.skyrmion_radius, 0.0, &cfg);
        assert_abs_diff_eq!(m[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn texture_is_unit_norm_on_grid() {
        let cfg = bloch_cfg();
        let r = disk().radius;
        let mut worst = 0.0f64;
        for i in 0..101 {
            for j in 0..101 {
                let x = (-1.0 + 0.02 * i as f64) * r;
                let y = (-1.0 + 0.02 * j as f64) * r;
                let m = magnetization(x, y, &cfg);
                let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                worst = worst.max((n - 1.0).abs());
            }
        }
        assert!(worst < 1e-12, "max |m|-1 deviation {worst}");
    }

    #[test]
    fn mode_function_at_core_center() {
        let cfg = bloch_cfg();
        let rc = 5e-11;
        let dm = mode_function(0.0, 0.0, &cfg, rc);
        // Core-down Bloch texture: (i, -1, 0) * r_c / R_Sk.
        let scale = rc / cfg.skyrmion_radius;
        assert_relative_eq!(dm[0].im, scale, max_relative = 1e-14);
        assert_abs_diff_eq!(dm[0].re, 0.0);
        assert_relative_eq!(dm[1].re, -scale, max_relative = 1e-14);
        assert_abs_diff_eq!(dm[1].im, 0.0);
        assert_abs_diff_eq!(dm[2].norm(), 0.0);
    }

    #[test]
    fn mode_function_matches_displacement_derivative() {
        // delta_m = -(r_c/2)(d/dx - i P d/dy) m, checked by central
        // differences with step 1e-4 R on both Bloch and Neel textures.
        let rc = 5e-11;
        for cfg in [bloch_cfg(), neel_cfg()] {
            let h = 1e-4 * disk().radius;
            let p = f64::from(cfg.polarity);
            for (x, y) in [(3e-9, -4e-9), (25e-9, 10e-9), (-60e-9, 35e-9)] {
                let dm = mode_function(x, y, &cfg, rc);
                let mxp = magnetization(x + h, y, &cfg);
                let mxm = magnetization(x - h, y, &cfg);
                let myp = magnetization(x, y + h, &cfg);
                let mym = magnetization(x, y - h, &cfg);
                for k in 0..3 {
                    let ddx = (mxp[k] - mxm[k]) / (2.0 * h);
                    let ddy = (myp[k] - mym[k]) / (2.0 * h);
                    let fd = Complex64::new(ddx, -p * ddy) * (-rc / 2.0);
                    assert_relative_eq!(dm[k].re, fd.re, max_relative = 1e-5, epsilon = 1e-8 * rc / 1e-7);
                    assert_relative_eq!(dm[k].im, fd.im, max_relative = 1e-5, epsilon = 1e-8 * rc / 1e-7);
                }
            }
        }
    }

    #[test]
    fn mode_is_tangent_to_texture() {
        let rc = 5e-11;
        for cfg in [bloch_cfg(), neel_cfg()] {
            for (x, y) in [(1e-9, 2e-9), (-30e-9, 55e-9), (80e-9, -15e-9)] {
                let m = magnetization(x, y, &cfg);
                let dm = mode_function(x, y, &cfg, rc);
                let dot = m[0] * dm[0] + m[1] * dm[1] + m[2] * dm[2];
                let scale: f64 = dm.iter().map(|c| c.norm()).sum();
                assert!(dot.norm() < 1e-12 * scale, "m . delta_m = {dot} at ({x}, {y})");
            }
        }
    }

    #[test]
    fn amplitude_modulus_tracks_mode_function() {
        // |psi| = sqrt(M_S/(g mu_B)) |delta_m| / 2 pointwise: the mode
        // carries its full weight in the circular spin-deflection component.
        let rc = 5e-11;
        let mat = material();
        let dens = (mat.saturation_magnetization / (mat.g_factor * MU_B)).sqrt();
        for cfg in [bloch_cfg(), neel_cfg()] {
            for (x, y) in [(2e-9, 1e-9), (-20e-9, 37e-9), (65e-9, -48e-9)] {
                let dm = mode_function(x, y, &cfg, rc);
                let dm_norm = (dm[0].norm_sqr() + dm[1].norm_sqr() + dm[2].norm_sqr()).sqrt();
                let psi = spinwave_amplitude(x, y, &cfg, &mat, rc);
                assert_relative_eq!(psi.norm(), dens * dm_norm / 2.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn amplitude_normalizes_over_disk_volume() {
        let geo = disk();
        let mat = material();
        for c in [0.1, 0.3, 0.6] {
            let cfg = SkyrmionConfig::new(&geo, c, std::f64::consts::FRAC_PI_2, 1, -1, -1).unwrap();
            let rc = gyration_radius(&geo, &cfg, &mat);
            let norm = spinwave_norm(&geo, &cfg, &mat, rc, 128).unwrap();
            assert!((norm - 1.0).abs() < 1e-3, "norm = {norm} at c = {c}");
        }
    }

    #[test]
    fn amplitude_scales_linearly_with_rc() {
        let cfg = bloch_cfg();
        let mat = material();
        let a = spinwave_amplitude(10e-9, 5e-9, &cfg, &mat, 5e-11);
        let b = spinwave_amplitude(10e-9, 5e-9, &cfg, &mat, 10e-11);
        assert_relative_eq!(b.norm(), 2.0 * a.norm(), max_relative = 1e-14);
    }

    #[test]
    fn zero_point_radius_reference_value() {
        // 100 nm disk, 5 nm film, M_S = 1 MA/m, g = 2, c = 0.1: about half
        // an Angstrom.
        let rc = gyration_radius(&disk(), &bloch_cfg(), &material());
        assert_relative_eq!(rc, 4.883875e-11, max_relative = 1e-6);
    }

    #[test]
    fn zero_point_radius_parameter_trends() {
        let geo = disk();
        let mat = material();
        let cfg = bloch_cfg();
        let rc = gyration_radius(&geo, &cfg, &mat);
        // Quadrupled film thickness halves the zero-point radius.
        let thick = DiskGeometry::new(geo.radius, 4.0 * geo.thickness).unwrap();
        assert_relative_eq!(gyration_radius(&thick, &cfg, &mat), rc / 2.0, max_relative = 1e-12);
        // Core as large as the disk gains sqrt(2) over a point core.
        let big = SkyrmionConfig { skyrmion_radius: geo.radius, reduced_radius: 1.0, ..cfg };
        let tiny = SkyrmionConfig { skyrmion_radius: 0.0, reduced_radius: 0.0, ..cfg };
        assert_relative_eq!(
            gyration_radius(&geo, &big, &mat) / gyration_radius(&geo, &tiny, &mat),
            std::f64::consts::SQRT_2,
            max_relative = 1e-12
        );
    }

    #[test]
    fn gyrocoupling_sign_follows_charge() {
        let g = gyrocoupling_constant(&disk(), &material(), -1);
        assert!(g < 0.0);
        assert_relative_eq!(g, -4.0 * PI * 5e-9 * 1e6 / GAMMA_E, max_relative = 1e-12);
    }

    #[test]
    fn gyration_branch_structure() {
        // Negative G: clockwise branch lies below, split is exactly |G|/M.
        let p = GyrationModeParams::new(1e-22, -3.568e-13, 5.7e-3).unwrap();
        let q = gyration_frequencies(&p).unwrap();
        assert!(q.omega_cw < q.omega_ccw);
        assert_relative_eq!(q.omega_ccw - q.omega_cw, 3.568e-13 / 1e-22, max_relative = 1e-12);
        // G = 0 degenerates to sqrt(k/M).
        let p0 = GyrationModeParams::new(1e-22, 0.0, 5.7e-3).unwrap();
        let q0 = gyration_frequencies(&p0).unwrap();
        assert_relative_eq!(q0.omega_cw, q0.omega_ccw, max_relative = 1e-15);
        assert_relative_eq!(q0.omega_cw, (5.7e-3f64 / 1e-22).sqrt(), max_relative = 1e-14);
        // k = 0 pins the low branch at zero and the high one at |G|/M.
        let pk = GyrationModeParams::new(1e-22, -3.568e-13, 0.0).unwrap();
        let qk = gyration_frequencies(&pk).unwrap();
        assert_abs_diff_eq!(qk.omega_cw, 0.0);
        assert_relative_eq!(qk.omega_ccw, 3.568e-13 / 1e-22, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn texture_unit_norm_everywhere(
            x in -3.0f64..3.0,
            y in -3.0f64..3.0,
            c in 0.05f64..0.9,
            phase in 0.0f64..(2.0 * PI),
            pol in prop::bool::ANY,
        ) {
            let geo = disk();
            let cfg = SkyrmionConfig {
                skyrmion_radius: c * geo.radius,
                reduced_radius: c,
                phase,
                chirality: 1,
                polarity: if pol { 1 } else { -1 },
                topological_charge: 1,
            };
            let m = magnetization(x * geo.radius, y * geo.radius, &cfg);
            let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
            prop_assert!((n - 1.0).abs() < 1e-12);
        }

        #[test]
        fn mode_tangency_everywhere(
            x in -3.0f64..3.0,
            y in -3.0f64..3.0,
            c in 0.05f64..0.9,
            phase in 0.0f64..(2.0 * PI),
            pol in prop::bool::ANY,
        ) {
            let geo = disk();
            let cfg = SkyrmionConfig {
                skyrmion_radius: c * geo.radius,
                reduced_radius: c,
                phase,
                chirality: 1,
                polarity: if pol { 1 } else { -1 },
                topological_charge: 1,
            };
            let m = magnetization(x * geo.radius, y * geo.radius, &cfg);
            let dm = mode_function(x * geo.radius, y * geo.radius, &cfg, 5e-11);
            let dot = m[0] * dm[0] + m[1] * dm[1] + m[2] * dm[2];
            let scale: f64 = dm.iter().map(|v| v.norm()).sum();
            prop_assert!(dot.norm() <= 1e-12 * scale.max(1e-300));
        }
    }
}
