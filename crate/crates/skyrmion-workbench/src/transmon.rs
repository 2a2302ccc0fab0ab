//! Flux-tunable transmon built on an asymmetric SQUID, and its coupling to
//! the gyration mode through the quantized flux threading the loop.
//!
//! Josephson and charging energies are carried as angular frequencies
//! (E / hbar, rad/s), which keeps every coupling formula free of hbar.

use crate::constants::PHI_0;
use crate::stray_field::FluxAmplitude;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Asymmetric-SQUID transmon parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonParams {
    /// Maximum Josephson energy E_J^max / hbar, rad/s.
    pub ej_max: f64,
    /// Charging energy E_C / hbar, rad/s.
    pub ec: f64,
    /// Junction asymmetry alpha_J = |E_J^1 - E_J^2| / E_J^max, in [0, 1].
    pub asymmetry: f64,
    /// Static bias flux phi_b, rad, in [0, pi).
    pub bias_flux: f64,
}

impl TransmonParams {
    pub fn new(ej_max: f64, ec: f64, asymmetry: f64, bias_flux: f64) -> Result<Self> {
        if !(ej_max > 0.0) {
            return Err(Error::InvalidInput(format!("E_J^max must be > 0 rad/s, got {ej_max}")));
        }
        if !(ec > 0.0) {
            return Err(Error::InvalidInput(format!("E_C must be > 0 rad/s, got {ec}")));
        }
        if !(0.0..=1.0).contains(&asymmetry) {
            return Err(Error::InvalidInput(format!(
                "asymmetry must lie in [0, 1], got {asymmetry}"
            )));
        }
        if !(0.0..PI).contains(&bias_flux) {
            return Err(Error::InvalidInput(format!(
                "bias flux must lie in [0, pi) rad, got {bias_flux}"
            )));
        }
        Ok(Self { ej_max, ec, asymmetry, bias_flux })
    }
}

/// Derived single-qubit quantities at the working point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonDerived {
    /// SQUID modulation factor S(phi_b) in [alpha_J, 1].
    pub s_factor: f64,
    /// Qubit frequency sqrt(E_J^max S E_C) - E_C, rad/s.
    pub omega_tr: f64,
    /// Regime parameter eta_T = E_J^max S / E_C; >> 1 is the transmon regime.
    pub eta_t: f64,
    /// Anharmonic correction parameter eta_lambda = sqrt(E_C / (2 S E_J^max)).
    pub eta_lambda: f64,
    /// Zero-point phase fluctuation (2 E_C / (E_J^max S))^(1/4).
    pub zpf_phase: f64,
}

/// Gyration-mode to transmon coupling rates, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkTransmonCoupling {
    /// Transverse (qubit-flip) coupling, non-negative.
    pub lambda_t: f64,
    /// Longitudinal (dispersive-like) coupling; signed with sin(2 phi_b).
    pub lambda_l: f64,
    /// Transverse coupling with the leading anharmonic correction (1 - eta_lambda).
    pub lambda_t_corrected: f64,
    /// Longitudinal coupling with the same correction.
    pub lambda_l_corrected: f64,
}

/// SQUID modulation factor S(phi_b) = sqrt(cos^2 phi_b + alpha_J^2 sin^2 phi_b).
pub fn s_factor(p: &TransmonParams) -> f64 {
    let (s, c) = p.bias_flux.sin_cos();
    (c * c + p.asymmetry * p.asymmetry * s * s).sqrt()
}

/// Qubit frequency at the working point, rad/s.
pub fn transmon_frequency(p: &TransmonParams) -> f64 {
    (p.ej_max * s_factor(p) * p.ec).sqrt() - p.ec
}

/// All derived working-point quantities in one pass.
pub fn regime_diagnostics(p: &TransmonParams) -> TransmonDerived {
    let s = s_factor(p);
    TransmonDerived {
        s_factor: s,
        omega_tr: (p.ej_max * s * p.ec).sqrt() - p.ec,
        eta_t: p.ej_max * s / p.ec,
        eta_lambda: (p.ec / (2.0 * s * p.ej_max)).sqrt(),
        zpf_phase: (2.0 * p.ec / (p.ej_max * s)).powf(0.25),
    }
}

/// Transverse and longitudinal coupling rates for a given flux amplitude.
/// The quantized loop flux enters as phi = pi Phi / Phi_0, so both rates are
/// proportional to pi flux_scale / Phi_0:
///
///   Lambda_T = (pi flux_scale / Phi_0) alpha_J (2 E_C E_J^3 / S^5)^(1/4),
///   Lambda_L = (pi flux_scale / Phi_0) (1 - alpha_J^2) sin(2 phi_b) / 2
///              * sqrt(2 E_C E_J / S^3).
///
/// The corrected values carry the leading quartic-phase correction factor
/// (1 - eta_lambda).
pub fn coupling_strengths(p: &TransmonParams, flux: &FluxAmplitude) -> SkTransmonCoupling {
    let s = s_factor(p);
    let drive = PI * flux.flux_scale / PHI_0;
    let lambda_t =
        drive * p.asymmetry * (2.0 * p.ec * p.ej_max.powi(3) / s.powi(5)).powf(0.25);
    let lambda_l = drive * (1.0 - p.asymmetry * p.asymmetry) * (2.0 * p.bias_flux).sin() / 2.0
        * (2.0 * p.ec * p.ej_max / s.powi(3)).sqrt();
    let correction = 1.0 - regime_diagnostics(p).eta_lambda;
    SkTransmonCoupling {
        lambda_t,
        lambda_l,
        lambda_t_corrected: lambda_t * correction,
        lambda_l_corrected: lambda_l * correction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::MU_0;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    fn params(bias: f64) -> TransmonParams {
        TransmonParams::new(2.0 * PI * 50e9, 2.0 * PI * 200e6, 0.06, bias).unwrap()
    }

    /// Flux amplitude frozen from the volume integral at loop center
    /// (0.5 R, 0, 0.1 R), loop radius 0.5 R, 100 nm disk, M_S = 1 MA/m.
    fn flux() -> FluxAmplitude {
        let modulus = 1.094673e-4;
        FluxAmplitude {
            modulus,
            phase: -3.0966,
            flux_scale: MU_0 * 1e6 * 1e-14 * modulus / (4.0 * PI),
        }
    }

    #[test]
    fn validation_rejects_out_of_range() {
        assert!(TransmonParams::new(2e9, 2e8, 1.5, 0.0).is_err());
        assert!(TransmonParams::new(2e9, 2e8, -0.1, 0.0).is_err());
        assert!(TransmonParams::new(2e9, 2e8, 0.06, PI).is_err());
        assert!(TransmonParams::new(2e9, 2e8, 0.06, -0.1).is_err());
        assert!(TransmonParams::new(-2e9, 2e8, 0.06, 0.0).is_err());
    }

    #[test]
    fn squid_factor_range_and_anchors() {
        assert_relative_eq!(s_factor(&params(0.0)), 1.0);
        assert_relative_eq!(s_factor(&params(FRAC_PI_2)), 0.06, max_relative = 1e-14);
        let mut last = 1.1;
        for k in 0..=20 {
            let s = s_factor(&params(FRAC_PI_2 * k as f64 / 20.0));
            assert!(s <= last && (0.06..=1.0).contains(&s));
            last = s;
        }
    }

    #[test]
    fn frequency_anchors_and_monotonicity() {
        // 50 GHz Josephson, 200 MHz charging: 2.9623 GHz at zero bias,
        // 574.6 MHz at the half-quantum point with 6% asymmetry.
        assert_relative_eq!(
            transmon_frequency(&params(0.0)) / (2.0 * PI * 1e9),
            2.9623,
            max_relative = 1e-4
        );
        assert_relative_eq!(
            transmon_frequency(&params(FRAC_PI_2)) / (2.0 * PI * 1e9),
            0.574597,
            max_relative = 1e-5
        );
        let mut last = f64::INFINITY;
        for k in 0..=10 {
            let w = transmon_frequency(&params(FRAC_PI_2 * k as f64 / 10.0));
            assert!(w < last, "omega_Tr must fall as S falls");
            last = w;
        }
    }

    #[test]
    fn regime_diagnostics_anchors() {
        let d = regime_diagnostics(&params(FRAC_PI_2));
        assert_relative_eq!(d.eta_t, 15.0, max_relative = 1e-12);
        assert_relative_eq!(d.eta_lambda, 0.182574, max_relative = 1e-5);
        assert_relative_eq!(d.zpf_phase, 0.60428, max_relative = 1e-4);
    }

    #[test]
    fn transverse_coupling_reference_value() {
        let c = coupling_strengths(&params(FRAC_PI_2), &flux());
        assert_relative_eq!(c.lambda_t / (2.0 * PI * 1e6), 5.0249, max_relative = 1e-4);
        assert_relative_eq!(c.lambda_t_corrected, c.lambda_t * (1.0 - 0.182574), max_relative = 1e-5);
        // Half-quantum bias kills the longitudinal channel (to rounding of
        // sin(2 phi_b) at phi_b = pi/2).
        assert!(c.lambda_l.abs() < 1e-12 * c.lambda_t);
    }

    #[test]
    fn coupling_parameter_structure() {
        // At zero bias S = 1 regardless of asymmetry, so Lambda_T is linear
        // in alpha_J there.
        let f = flux();
        let base = TransmonParams::new(2.0 * PI * 50e9, 2.0 * PI * 200e6, 0.03, 0.0).unwrap();
        let double = TransmonParams { asymmetry: 0.06, ..base };
        let c1 = coupling_strengths(&base, &f);
        let c2 = coupling_strengths(&double, &f);
        assert_relative_eq!(c2.lambda_t, 2.0 * c1.lambda_t, max_relative = 1e-12);
        // Longitudinal channel also vanishes at zero bias and turns on in
        // between, peaking near pi/4.
        assert_abs_diff_eq!(c1.lambda_l, 0.0, epsilon = 1e-30);
        let mid = coupling_strengths(&params(PI / 4.0), &f);
        assert!(mid.lambda_l > 0.0);
        assert!(mid.lambda_t > 0.0);
    }
}
