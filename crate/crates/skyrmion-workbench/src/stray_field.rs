//! Quantized stray field of the gyration mode outside the disk, and the
//! complex flux it threads through a SQUID pickup loop.
//!
//! All integrals run in reduced coordinates (lengths in units of the disk
//! radius R); the physical scales are restored at the boundary:
//! fields carry mu_0 M_S / (4 pi), fluxes carry mu_0 M_S R^2 / (4 pi).

use crate::bp_skyrmion::{mode_function, DiskGeometry, MaterialParams, SkyrmionConfig};
use crate::constants::MU_0;
use crate::quadrature::{converge, disk_nodes, gauss_legendre, QuadratureSpec};
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Circular pickup loop, parallel to the film plane. The loop plane must
/// clear the film: |z_c| > h_G/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquidLoop {
    /// Loop center, m.
    pub center: [f64; 3],
    /// Loop radius, m.
    pub radius: f64,
}

impl SquidLoop {
    pub fn new(center: [f64; 3], radius: f64, geometry: &DiskGeometry) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!("loop radius must be > 0 m, got {radius}")));
        }
        if !(center[2].abs() > geometry.thickness / 2.0) {
            return Err(Error::InvalidInput(format!(
                "loop plane z_c = {} m must clear the film, |z_c| > {} m",
                center[2],
                geometry.thickness / 2.0
            )));
        }
        Ok(Self { center, radius })
    }
}

/// Complex flux amplitude of the gyration mode through a pickup loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxAmplitude {
    /// Reduced flux modulus |F_Phi| (dimensionless).
    pub modulus: f64,
    /// Phase of the complex flux, in (-pi, pi].
    pub phase: f64,
    /// Physical zero-point flux amplitude mu_0 M_S R^2 |F_Phi| / (4 pi), Wb.
    pub flux_scale: f64,
}

/// One stray-field mode evaluation, for field maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Field point, m.
    pub position: [f64; 3],
    /// Complex field mode amplitude, T per zero-point displacement.
    pub value: [Complex64; 3],
}

/// Precomputed source node: reduced position, quadrature weight with the
/// cylindrical Jacobian folded in, and the mode deflection there. The mode
/// function is scale-free, so it is evaluated directly in reduced lengths.
struct SourceNode {
    x: f64,
    y: f64,
    z: f64,
    weight: f64,
    dm: [Complex64; 3],
}

fn reduced_cfg(cfg: &SkyrmionConfig) -> SkyrmionConfig {
    SkyrmionConfig { skyrmion_radius: cfg.reduced_radius, ..*cfg }
}

fn source_nodes(
    spec: &QuadratureSpec,
    cfg: &SkyrmionConfig,
    rc_red: f64,
    thickness_over_radius: f64,
) -> Result<Vec<SourceNode>> {
    let red = reduced_cfg(cfg);
    Ok(disk_nodes(spec, thickness_over_radius)?
        .into_iter()
        .map(|n| {
            let (s, c) = n.phi.sin_cos();
            let x = n.rho * c;
            let y = n.rho * s;
            SourceNode { x, y, z: n.z, weight: n.weight, dm: mode_function(x, y, &red, rc_red) }
        })
        .collect())
}

/// Reduced dipolar field of the mode at a reduced field point: the weighted
/// sum of 3 d (dm . d) / r^5 - dm / r^3 over source nodes, with d the
/// source-minus-field separation. Chunked so the parallel reduction keeps a
/// fixed summation order regardless of worker count.
fn reduced_field_sum(nodes: &[SourceNode], xf: f64, yf: f64, zf: f64) -> [Complex64; 3] {
    let partials: Vec<[Complex64; 3]> = nodes
        .par_chunks(8192)
        .map(|chunk| {
            let mut acc = [Complex64::ZERO; 3];
            for n in chunk {
                let dx = n.x - xf;
                let dy = n.y - yf;
                let dz = n.z - zf;
                let r2 = dx * dx + dy * dy + dz * dz;
                let ir = 1.0 / r2.sqrt();
                let ir3 = ir * ir * ir;
                let ir5 = ir3 * ir * ir;
                let g = n.dm[0] * dx + n.dm[1] * dy + n.dm[2] * dz;
                let k3 = 3.0 * n.weight * ir5;
                acc[0] += k3 * dx * g - n.weight * ir3 * n.dm[0];
                acc[1] += k3 * dy * g - n.weight * ir3 * n.dm[1];
                acc[2] += k3 * dz * g - n.weight * ir3 * n.dm[2];
            }
            acc
        })
        .collect();
    let mut total = [Complex64::ZERO; 3];
    for p in partials {
        for k in 0..3 {
            total[k] += p[k];
        }
    }
    total
}

/// Reduced vertical field component only, for the flux integrand.
fn reduced_bz_sum(nodes: &[SourceNode], xf: f64, yf: f64, zf: f64) -> Complex64 {
    let partials: Vec<Complex64> = nodes
        .par_chunks(8192)
        .map(|chunk| {
            let mut acc = Complex64::ZERO;
            for n in chunk {
                let dx = n.x - xf;
                let dy = n.y - yf;
                let dz = n.z - zf;
                let r2 = dx * dx + dy * dy + dz * dz;
                let ir = 1.0 / r2.sqrt();
                let ir3 = ir * ir * ir;
                let ir5 = ir3 * ir * ir;
                let g = n.dm[0] * dx + n.dm[1] * dy + n.dm[2] * dz;
                acc += n.weight * (3.0 * dz * g * ir5 - n.dm[2] * ir3);
            }
            acc
        })
        .collect();
    partials.into_iter().sum()
}

/// Complex stray-field mode amplitude at an exterior point, T. Errors with
/// `SingularPoint` when the point lies inside the disk volume, where the
/// dipolar kernel diverges.
pub fn field_mode_at(
    point: [f64; 3],
    geometry: &DiskGeometry,
    cfg: &SkyrmionConfig,
    material: &MaterialParams,
    r_c: f64,
    spec: &QuadratureSpec,
) -> Result<[Complex64; 3]> {
    let r = geometry.radius;
    let (xf, yf, zf) = (point[0] / r, point[1] / r, point[2] / r);
    let h = geometry.thickness / r;
    if zf.abs() <= h / 2.0 && xf.hypot(yf) <= 1.0 {
        return Err(Error::SingularPoint { x: point[0], y: point[1], z: point[2] });
    }
    let rc_red = r_c / r;
    let reduced = converge(spec, |s| {
        let nodes = source_nodes(s, cfg, rc_red, h)?;
        Ok(reduced_field_sum(&nodes, xf, yf, zf))
    })?;
    let scale = MU_0 * material.saturation_magnetization / (4.0 * PI);
    Ok([reduced[0] * scale, reduced[1] * scale, reduced[2] * scale])
}

/// Shared on-axis reduced integral. The azimuthal direction of the source
/// integral is done analytically for the general texture (helicity `phase`,
/// polarity P), leaving a 2-D radial-thickness integral:
///
///   I = c * sum w rho { (3/r^5) [ -rho^2 E / D + 2 rho^4 cos(phase) / D^2
///         + 2 P c rho^2 (z - H) / D^2 ] + 2 c^2 E / (D^2 r^3) },
///
/// with D = c^2 + rho^2, r = sqrt(rho^2 + (z - H)^2), E = exp(i P phase).
/// The transverse field components follow as Bx ~ I and By = -i P Bx; the
/// vertical component integrates to zero exactly.
fn on_axis_reduced(
    c: f64,
    phase: f64,
    polarity: f64,
    h_field: f64,
    h_film: f64,
    radial_points: usize,
    thickness_points: usize,
) -> Result<Complex64> {
    let e = Complex64::from_polar(1.0, polarity * phase);
    let cos0 = phase.cos();
    let radial = gauss_legendre(radial_points, 0.0, 1.0)?;
    let axial = gauss_legendre(thickness_points, -h_film / 2.0, h_film / 2.0)?;
    let mut acc = Complex64::ZERO;
    for &(z, wz) in &axial {
        let dz = z - h_field;
        for &(rho, wr) in &radial {
            let rho2 = rho * rho;
            let d = c * c + rho2;
            let r2 = rho2 + dz * dz;
            let ir = 1.0 / r2.sqrt();
            let ir3 = ir * ir * ir;
            let ir5 = ir3 * ir * ir;
            let radical = -rho2 / d * e + (2.0 * rho2 * rho2 * cos0 + 2.0 * polarity * c * rho2 * dz) / (d * d);
            acc += wz * wr * rho * (3.0 * ir5 * radical + 2.0 * c * c * ir3 / (d * d) * e);
        }
    }
    Ok(c * acc)
}

/// Reduced on-axis coupling integral of the core-down Bloch texture, for a
/// probe at height h_sn (film midplane to probe, units of R) above a film of
/// reduced thickness h_g. Returns the modulus F_SN and the phase of the
/// x-component coupling. The modulus is helicity-independent for this
/// texture family; the phase is quoted for the core-down Bloch case.
pub fn f_sn_integral(
    c: f64,
    h_sn_over_r: f64,
    h_g_over_r: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidInput(format!("reduced radius must be in (0, 1), got {c}")));
    }
    if !(h_g_over_r > 0.0) {
        return Err(Error::InvalidInput(format!(
            "reduced film thickness must be > 0, got {h_g_over_r}"
        )));
    }
    if !(h_sn_over_r.abs() > h_g_over_r / 2.0) {
        return Err(Error::InvalidInput(format!(
            "probe height {h_sn_over_r} R must clear the film half-thickness {} R",
            h_g_over_r / 2.0
        )));
    }
    let i = converge(spec, |s| {
        on_axis_reduced(
            c,
            std::f64::consts::FRAC_PI_2,
            -1.0,
            h_sn_over_r,
            h_g_over_r,
            s.radial_points,
            s.thickness_points,
        )
    })?;
    Ok((i.norm(), principal_phase(-i)))
}

/// Stray-field mode on the symmetry axis at signed height z above the film
/// midplane, T. Uses the analytically azimuth-reduced 2-D integral; the
/// vertical component is exactly zero and the two transverse components are
/// locked by By = -i P Bx.
pub fn on_axis_components(
    height: f64,
    geometry: &DiskGeometry,
    cfg: &SkyrmionConfig,
    material: &MaterialParams,
    r_c: f64,
    spec: &QuadratureSpec,
) -> Result<[Complex64; 3]> {
    let r = geometry.radius;
    let h = geometry.thickness / r;
    let hf = height / r;
    if !(hf.abs() > h / 2.0) {
        return Err(Error::SingularPoint { x: 0.0, y: 0.0, z: height });
    }
    let p = f64::from(cfg.polarity);
    let i = converge(spec, |s| {
        on_axis_reduced(cfg.reduced_radius, cfg.phase, p, hf, h, s.radial_points, s.thickness_points)
    })?;
    let bx = MU_0 * material.saturation_magnetization / 4.0 * (r_c / r) * i;
    Ok([bx, Complex64::new(0.0, -p) * bx, Complex64::ZERO])
}

/// Complex flux amplitude of the mode through a pickup loop. The loop-plane
/// integral uses a polar Gauss-Legendre/uniform product grid derived from the
/// volume spec (radial/2 with floor 12, azimuthal with floor 48: a loop that
/// passes over the core sees angular structure on the scale of the reduced
/// core size); the vertical field under it reuses the full volume grid.
pub fn flux_amplitude(
    squid: &SquidLoop,
    geometry: &DiskGeometry,
    cfg: &SkyrmionConfig,
    material: &MaterialParams,
    r_c: f64,
    spec: &QuadratureSpec,
) -> Result<FluxAmplitude> {
    let r = geometry.radius;
    if !(squid.center[2].abs() > geometry.thickness / 2.0) {
        return Err(Error::InvalidInput(format!(
            "loop plane z_c = {} m must clear the film half-thickness {} m",
            squid.center[2],
            geometry.thickness / 2.0
        )));
    }
    let h = geometry.thickness / r;
    let rc_red = r_c / r;
    let (xc, yc, zc) = (squid.center[0] / r, squid.center[1] / r, squid.center[2] / r);
    let a = squid.radius / r;
    let flux = converge(spec, |s| {
        let nodes = source_nodes(s, cfg, rc_red, h)?;
        let n_rad = (s.radial_points / 2).max(12);
        let n_ang = s.azimuthal_points.max(48);
        let radial = gauss_legendre(n_rad, 0.0, a)?;
        let w_ang = 2.0 * PI / n_ang as f64;
        let field_points: Vec<(f64, f64, f64)> = radial
            .iter()
            .flat_map(|&(s_r, w_r)| {
                (0..n_ang).map(move |k| {
                    let ang = w_ang * k as f64;
                    (xc + s_r * ang.cos(), yc + s_r * ang.sin(), w_r * w_ang * s_r)
                })
            })
            .collect();
        let mut acc = Complex64::ZERO;
        for &(xf, yf, w) in &field_points {
            acc += w * reduced_bz_sum(&nodes, xf, yf, zc);
        }
        Ok(acc)
    })?;
    let modulus = flux.norm();
    Ok(FluxAmplitude {
        modulus,
        phase: principal_phase(flux),
        flux_scale: MU_0 * material.saturation_magnetization * r * r * modulus / (4.0 * PI),
    })
}

/// Argument of a complex number mapped onto (-pi, pi].
fn principal_phase(v: Complex64) -> f64 {
    let p = v.arg();
    if p <= -PI {
        p + 2.0 * PI
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp_skyrmion::gyration_radius;
    use crate::quadrature::Scheme;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    fn disk() -> DiskGeometry {
        DiskGeometry::new(100e-9, 5e-9).unwrap()
    }

    fn material() -> MaterialParams {
        MaterialParams::new(1e6, 2.0, 1e-4).unwrap()
    }

    fn bloch_cfg() -> SkyrmionConfig {
        SkyrmionConfig::new(&disk(), 0.1, FRAC_PI_2, 1, -1, -1).unwrap()
    }

    fn rc() -> f64 {
        gyration_radius(&disk(), &bloch_cfg(), &material())
    }

    #[test]
    fn coupling_integral_reference_value() {
        // c = 0.1, 5 nm film on a 100 nm disk, probe 5 nm above the surface.
        let (f, phase) = f_sn_integral(0.1, 0.075, 0.05, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(f, 2.911949, max_relative = 1e-6);
        assert_relative_eq!(phase, 3.139907, max_relative = 1e-5);
    }

    #[test]
    fn coupling_integral_decays_with_standoff() {
        let spec = QuadratureSpec::default();
        let mut last = f64::INFINITY;
        for d in [0.05, 0.1, 0.2, 0.4] {
            let (f, _) = f_sn_integral(0.1, d + 0.025, 0.05, &spec).unwrap();
            assert!(f < last, "F_SN must decay with standoff, got {f} after {last}");
            last = f;
        }
    }

    #[test]
    fn coupling_integral_validates_inputs() {
        let spec = QuadratureSpec::default();
        assert!(f_sn_integral(1.2, 0.075, 0.05, &spec).is_err());
        assert!(f_sn_integral(0.1, 0.02, 0.05, &spec).is_err());
    }

    #[test]
    fn on_axis_field_structure() {
        // Transverse components locked in quadrature, vertical exactly zero.
        let b = on_axis_components(7.5e-9, &disk(), &bloch_cfg(), &material(), rc(),
            &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(b[2].norm(), 0.0);
        assert_relative_eq!(b[1].norm(), b[0].norm(), max_relative = 1e-14);
        // Polarity -1: By = +i Bx.
        let ratio = b[1] / b[0];
        assert_relative_eq!(ratio.re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(ratio.im, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn on_axis_matches_general_kernel() {
        // The azimuth-reduced closed form must agree with the full 3-D
        // dipolar sum, for the Bloch case and for a mixed-helicity
        // core-up texture.
        let geo = disk();
        let mat = material();
        let spec = QuadratureSpec::default();
        let mixed = SkyrmionConfig::new(&geo, 0.3, 0.8, 1, 1, 1).unwrap();
        for cfg in [bloch_cfg(), mixed] {
            let r_c = gyration_radius(&geo, &cfg, &mat);
            let axis = on_axis_components(9e-9, &geo, &cfg, &mat, r_c, &spec).unwrap();
            let full = field_mode_at([0.0, 0.0, 9e-9], &geo, &cfg, &mat, r_c, &spec).unwrap();
            for k in 0..2 {
                assert_relative_eq!(axis[k].re, full[k].re, max_relative = 2e-4, epsilon = 1e-12);
                assert_relative_eq!(axis[k].im, full[k].im, max_relative = 2e-4, epsilon = 1e-12);
            }
            assert!(full[2].norm() < 1e-10 * full[0].norm());
        }
    }

    #[test]
    fn field_point_inside_volume_is_rejected() {
        let err = field_mode_at([10e-9, 0.0, 0.0], &disk(), &bloch_cfg(), &material(), rc(),
            &QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::SingularPoint { .. }));
        // Just outside the rim is fine.
        assert!(field_mode_at([101e-9, 0.0, 0.0], &disk(), &bloch_cfg(), &material(), rc(),
            &QuadratureSpec::default()).is_ok());
    }

    #[test]
    fn flux_reference_value_and_mirror_symmetry() {
        let geo = disk();
        let spec = QuadratureSpec::default();
        let above = SquidLoop::new([50e-9, 0.0, 10e-9], 50e-9, &geo).unwrap();
        let below = SquidLoop::new([50e-9, 0.0, -10e-9], 50e-9, &geo).unwrap();
        let fa = flux_amplitude(&above, &geo, &bloch_cfg(), &material(), rc(), &spec).unwrap();
        let fb = flux_amplitude(&below, &geo, &bloch_cfg(), &material(), rc(), &spec).unwrap();
        assert_relative_eq!(fa.modulus, 1.094673e-4, max_relative = 1e-5);
        assert_relative_eq!(fa.modulus, fb.modulus, max_relative = 1e-9);
        assert_relative_eq!(fa.phase.abs(), 3.0966, max_relative = 1e-3);
        // Physical scale: mu_0 M_S R^2 / (4 pi) times the reduced modulus.
        assert_relative_eq!(
            fa.flux_scale,
            MU_0 * 1e6 * 1e-14 * fa.modulus / (4.0 * PI),
            max_relative = 1e-14
        );
    }

    #[test]
    fn flux_parity_and_centered_null() {
        let geo = disk();
        let spec = QuadratureSpec::default();
        let right = SquidLoop::new([50e-9, 0.0, 10e-9], 50e-9, &geo).unwrap();
        let left = SquidLoop::new([-50e-9, 0.0, 10e-9], 50e-9, &geo).unwrap();
        let centered = SquidLoop::new([0.0, 0.0, 10e-9], 50e-9, &geo).unwrap();
        let fr = flux_amplitude(&right, &geo, &bloch_cfg(), &material(), rc(), &spec).unwrap();
        let fl = flux_amplitude(&left, &geo, &bloch_cfg(), &material(), rc(), &spec).unwrap();
        let fc = flux_amplitude(&centered, &geo, &bloch_cfg(), &material(), rc(), &spec).unwrap();
        assert_relative_eq!(fr.modulus, fl.modulus, max_relative = 1e-12);
        // The winding mode has zero net flux through a concentric loop.
        assert!(fc.modulus < 1e-3 * fr.modulus, "centered flux {} vs {}", fc.modulus, fr.modulus);
    }

    #[test]
    fn flux_scales_linearly_with_zero_point_radius() {
        let geo = disk();
        let spec = QuadratureSpec::default();
        let lp = SquidLoop::new([50e-9, 0.0, 10e-9], 50e-9, &geo).unwrap();
        let f1 = flux_amplitude(&lp, &geo, &bloch_cfg(), &material(), 4e-11, &spec).unwrap();
        let f2 = flux_amplitude(&lp, &geo, &bloch_cfg(), &material(), 8e-11, &spec).unwrap();
        assert_relative_eq!(f2.modulus, 2.0 * f1.modulus, max_relative = 1e-12);
    }

    #[test]
    fn flux_adaptive_refinement_converges() {
        let geo = disk();
        let spec = QuadratureSpec::new(24, 32, 8, 1e-3, Scheme::AdaptiveRefinement).unwrap();
        let lp = SquidLoop::new([50e-9, 0.0, 10e-9], 50e-9, &geo).unwrap();
        let f = flux_amplitude(&lp, &geo, &bloch_cfg(), &material(), rc(), &spec).unwrap();
        assert_relative_eq!(f.modulus, 1.094673e-4, max_relative = 1e-3);
    }

    #[test]
    fn loop_must_clear_the_film() {
        let geo = disk();
        assert!(SquidLoop::new([0.0, 0.0, 2e-9], 50e-9, &geo).is_err());
        assert!(SquidLoop::new([0.0, 0.0, -2e-9], 50e-9, &geo).is_err());
        assert!(SquidLoop::new([0.0, 0.0, 3e-9], 50e-9, &geo).is_ok());
    }
}
