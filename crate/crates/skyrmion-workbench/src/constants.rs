//! Physical constants shared across the workbench, SI units.

/// Electron gyromagnetic ratio magnitude, rad s^-1 T^-1. Sign conventions
/// (electron moments anti-parallel to spin) are carried explicitly by the
/// formulas that need them; this constant is always positive.
pub const GAMMA_E: f64 = 1.760_859e11;

/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;

/// Vacuum permeability, T m / A.
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Superconducting flux quantum h/(2e), Wb.
pub const PHI_0: f64 = 2.067_833_848e-15;
