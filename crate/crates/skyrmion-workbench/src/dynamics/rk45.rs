//! Embedded Dormand-Prince 5(4) propagation of the vectorized master
//! equation. The generator is time independent, so the right-hand side is a
//! single sparse matvec per stage; FSAL reuses the last stage across steps.

use super::lindblad::Csr;
use crate::{Error, Result};
use num_complex::Complex64;

// Stored states must keep their eigenvalues above the -1e-9 positivity
// floor without renormalization, so the error control sits below it.
const RTOL: f64 = 1e-9;
const ATOL: f64 = 1e-12;

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
/// Fifth-order solution weights; also the last stage row, which makes the
/// scheme first-same-as-last.
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Propagate y' = L y from times[0], returning the state at every requested
/// time. Times must be strictly increasing; the first entry is the initial
/// time and maps to a copy of y0.
pub fn propagate_linear(l: &Csr, y0: &[Complex64], times: &[f64]) -> Result<Vec<Vec<Complex64>>> {
    if times.len() < 2 {
        return Err(Error::InvalidInput(
            "time grid needs at least an initial and one output time".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("output times must be strictly increasing".into()));
    }
    if y0.len() != l.n {
        return Err(Error::InvalidInput(format!(
            "state length {} does not match generator dimension {}",
            y0.len(),
            l.n
        )));
    }
    let n = l.n;
    let span = times[times.len() - 1] - times[0];
    let h_min = 1e-15 * span;

    let mut out = Vec::with_capacity(times.len());
    out.push(y0.to_vec());

    let mut y = y0.to_vec();
    let mut t = times[0];
    let mut h = 1e-4 * span;
    let mut k: Vec<Vec<Complex64>> = (0..7).map(|_| vec![Complex64::ZERO; n]).collect();
    let mut stage = vec![Complex64::ZERO; n];
    let mut y5 = vec![Complex64::ZERO; n];
    l.matvec(&y, &mut k[0]);

    for &t_out in &times[1..] {
        while t < t_out {
            let h_step = h.min(t_out - t);
            // Stages 2..6 from the lower-triangular tableau.
            let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
            for (s, row) in rows.iter().enumerate() {
                for i in 0..n {
                    let mut acc = Complex64::ZERO;
                    for (j, &a) in row.iter().enumerate() {
                        if a != 0.0 {
                            acc += a * k[j][i];
                        }
                    }
                    stage[i] = y[i] + h_step * acc;
                }
                let ks = &mut k[s + 1];
                l.matvec(&stage, ks);
            }
            for i in 0..n {
                let mut acc = Complex64::ZERO;
                for (j, &b) in B.iter().enumerate() {
                    if b != 0.0 {
                        acc += b * k[j][i];
                    }
                }
                y5[i] = y[i] + h_step * acc;
            }
            l.matvec(&y5, &mut k[6]);

            let mut err_sq = 0.0;
            for i in 0..n {
                let mut e = Complex64::ZERO;
                for (j, &c) in E.iter().enumerate() {
                    if c != 0.0 {
                        e += c * k[j][i];
                    }
                }
                let scale = ATOL + RTOL * y[i].norm().max(y5[i].norm());
                let r = h_step * e.norm() / scale;
                err_sq += r * r;
            }
            let err = (err_sq / n as f64).sqrt();

            if err <= 1.0 {
                t += h_step;
                std::mem::swap(&mut y, &mut y5);
                k.swap(0, 6);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h_step * factor).max(h_min);
            if h <= h_min && err > 1.0 {
                return Err(Error::StepFailure(format!(
                    "step size underflow at t = {t:.6e} (error ratio {err:.2e})"
                )));
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::lindblad::liouvillian;
    use crate::dynamics::operators::{sigma_minus, CMat};
    use approx::assert_relative_eq;

    /// Pure decay of the excited population: rho_ee(t) = exp(-gamma t).
    #[test]
    fn amplitude_damping_matches_exponential() {
        let gamma = 0.37;
        let h = CMat::zeros(2, 2);
        let l = liouvillian(&h, &[(sigma_minus(), gamma)]);
        let mut y0 = vec![Complex64::ZERO; 4];
        y0[3] = Complex64::ONE;
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.5).collect();
        let states = propagate_linear(&l, &y0, &times).unwrap();
        for (st, &t) in states.iter().zip(&times) {
            assert_relative_eq!(st[3].re, (-gamma * t).exp(), epsilon = 1e-7);
            assert_relative_eq!(st[0].re, 1.0 - (-gamma * t).exp(), epsilon = 1e-7);
        }
    }

    /// Coherent Rabi flopping under H = w sx: rho_ee = sin^2(w t).
    #[test]
    fn rabi_oscillation_matches_closed_form() {
        let w = 2.0;
        let h = crate::dynamics::operators::sigma_x().scale(w);
        let l = liouvillian(&h, &[]);
        let mut y0 = vec![Complex64::ZERO; 4];
        y0[0] = Complex64::ONE;
        let times: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        let states = propagate_linear(&l, &y0, &times).unwrap();
        for (st, &t) in states.iter().zip(&times) {
            assert_relative_eq!(st[3].re, (w * t).sin().powi(2), epsilon = 1e-6);
        }
    }

    #[test]
    fn rejects_bad_time_grids() {
        let l = liouvillian(&CMat::zeros(2, 2), &[]);
        let y0 = vec![Complex64::ZERO; 4];
        assert!(propagate_linear(&l, &y0, &[0.0]).is_err());
        assert!(propagate_linear(&l, &y0, &[0.0, 1.0, 1.0]).is_err());
    }
}
