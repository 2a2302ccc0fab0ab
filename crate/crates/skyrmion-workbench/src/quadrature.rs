//! Quadrature grids for the disk-volume integrals behind every field and
//! flux quantity: Gauss-Legendre in the radial and thickness directions,
//! uniform (trapezoidal on a periodic interval, hence spectrally accurate)
//! in azimuth, plus the shared adaptive refinement driver.

use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// How an integral consumes its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Evaluate once on the requested grid.
    FixedGrid,
    /// Double all node counts until the result changes by less than the
    /// relative tolerance, up to three doublings.
    AdaptiveRefinement,
}

/// Node counts and tolerance for the disk integrals. Counts must be at least
/// 8; the relative tolerance must lie in (0, 1e-1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub radial_points: usize,
    pub azimuthal_points: usize,
    pub thickness_points: usize,
    pub relative_tolerance: f64,
    pub scheme: Scheme,
}

impl QuadratureSpec {
    pub fn new(
        radial_points: usize,
        azimuthal_points: usize,
        thickness_points: usize,
        relative_tolerance: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        for (name, n) in [
            ("radial_points", radial_points),
            ("azimuthal_points", azimuthal_points),
            ("thickness_points", thickness_points),
        ] {
            if n < 8 {
                return Err(Error::InvalidInput(format!("{name} must be >= 8, got {n}")));
            }
        }
        if !(relative_tolerance > 0.0 && relative_tolerance <= 1e-1) {
            return Err(Error::InvalidInput(format!(
                "relative_tolerance must be in (0, 1e-1], got {relative_tolerance}"
            )));
        }
        Ok(Self { radial_points, azimuthal_points, thickness_points, relative_tolerance, scheme })
    }

    /// Same spec with all node counts doubled.
    pub fn doubled(&self) -> Self {
        Self {
            radial_points: 2 * self.radial_points,
            azimuthal_points: 2 * self.azimuthal_points,
            thickness_points: 2 * self.thickness_points,
            ..*self
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_points: 64,
            azimuthal_points: 64,
            thickness_points: 16,
            relative_tolerance: 1e-4,
            scheme: Scheme::FixedGrid,
        }
    }
}

/// Gauss-Legendre nodes and weights on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let rule = gauss_quad::GaussLegendre::new(n)
        .map_err(|e| Error::InvalidInput(format!("Gauss-Legendre rule of degree {n}: {e}")))?;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (half * x + mid, half * w))
        .collect())
}

/// One node of the reduced disk-volume grid. Coordinates are in units of the
/// disk radius; `weight` already contains the cylindrical Jacobian rho, so a
/// volume integral is the plain weighted sum of integrand values.
#[derive(Debug, Clone, Copy)]
pub struct DiskNode {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
    pub weight: f64,
}

/// Tensor grid over the reduced disk volume rho in [0, 1], phi in [0, 2 pi),
/// z in [-h/2, h/2] with h = thickness / radius.
pub fn disk_nodes(spec: &QuadratureSpec, thickness_over_radius: f64) -> Result<Vec<DiskNode>> {
    let radial = gauss_legendre(spec.radial_points, 0.0, 1.0)?;
    let half_h = 0.5 * thickness_over_radius;
    let axial = gauss_legendre(spec.thickness_points, -half_h, half_h)?;
    let n_phi = spec.azimuthal_points;
    let w_phi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(radial.len() * axial.len() * n_phi);
    for &(z, wz) in &axial {
        for &(rho, wr) in &radial {
            for k in 0..n_phi {
                let phi = w_phi * k as f64;
                nodes.push(DiskNode { rho, phi, z, weight: wz * wr * w_phi * rho });
            }
        }
    }
    Ok(nodes)
}

/// Values that the refinement driver can compare between grid levels.
pub trait RelativeChange: Copy {
    /// Relative difference against the refined value, scaled by the refined
    /// magnitude. Exact zeros compare as converged.
    fn relative_change(&self, refined: &Self) -> f64;
}

impl RelativeChange for f64 {
    fn relative_change(&self, refined: &Self) -> f64 {
        (self - refined).abs() / refined.abs().max(1e-300)
    }
}

impl RelativeChange for Complex64 {
    fn relative_change(&self, refined: &Self) -> f64 {
        (self - refined).norm() / refined.norm().max(1e-300)
    }
}

impl RelativeChange for [Complex64; 3] {
    fn relative_change(&self, refined: &Self) -> f64 {
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..3 {
            diff = diff.max((self[k] - refined[k]).norm());
            scale = scale.max(refined[k].norm());
        }
        diff / scale.max(1e-300)
    }
}

const MAX_REFINEMENTS: usize = 3;

/// Run `eval` under the spec's scheme. Fixed-grid evaluates once; adaptive
/// refinement doubles all counts until the result moves by less than the
/// relative tolerance, failing with `NonConvergence` after three doublings.
/// Results whose exact value is zero by symmetry never satisfy a relative
/// test; integrate those on a fixed grid.
pub fn converge<T, F>(spec: &QuadratureSpec, mut eval: F) -> Result<T>
where
    T: RelativeChange,
    F: FnMut(&QuadratureSpec) -> Result<T>,
{
    let mut current_spec = *spec;
    let mut value = eval(&current_spec)?;
    if spec.scheme == Scheme::FixedGrid {
        return Ok(value);
    }
    for _ in 0..MAX_REFINEMENTS {
        let next_spec = current_spec.doubled();
        let refined = eval(&next_spec)?;
        if value.relative_change(&refined) <= spec.relative_tolerance {
            return Ok(refined);
        }
        current_spec = next_spec;
        value = refined;
    }
    Err(Error::NonConvergence(format!(
        "relative change above {} after {} grid doublings from {}x{}x{} nodes",
        spec.relative_tolerance,
        MAX_REFINEMENTS,
        spec.radial_points,
        spec.azimuthal_points,
        spec.thickness_points
    )))
}
