//! Classical rigid-texture gyration: fixed-step integration of the massive
//! Thiele equation
//!
//!   M R" + R' x G + k R + d R' = F(t),
//!
//! spectral analysis of the orbit, and resonance extraction (peak frequency
//! and FWHM). The quantitative mass, stiffness, and damping scalar are
//! inputs here; only their mutual consistency is validated.

use crate::bp_skyrmion::{gyration_frequencies, GyrationModeParams};
use crate::{Error, Result};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Rigid-particle parameters entering the Thiele equation.
#[derive(Clone, Copy, Debug)]
pub struct ThieleParams {
    /// Inertial mass M (kg), > 0.
    pub inertial_mass: f64,
    /// Gyrocoupling G (kg/s), any sign; its sign sets the mode splitting.
    pub gyrocoupling: f64,
    /// Harmonic restoring stiffness k (kg/s^2), >= 0.
    pub stiffness: f64,
    /// Isotropic dissipation-tensor magnitude d (kg/s), >= 0.
    pub damping_scalar: f64,
}

impl ThieleParams {
    pub fn new(
        inertial_mass: f64,
        gyrocoupling: f64,
        stiffness: f64,
        damping_scalar: f64,
    ) -> Result<Self> {
        if !(inertial_mass.is_finite() && inertial_mass > 0.0) {
            return Err(Error::InvalidInput(format!(
                "inertial mass must be finite and positive, got {inertial_mass:e} kg"
            )));
        }
        if !gyrocoupling.is_finite() {
            return Err(Error::InvalidInput("gyrocoupling must be finite".into()));
        }
        if !(stiffness.is_finite() && stiffness >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "stiffness must be finite and nonnegative, got {stiffness:e} kg/s^2"
            )));
        }
        if !(damping_scalar.is_finite() && damping_scalar >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "damping must be finite and nonnegative, got {damping_scalar:e} kg/s"
            )));
        }
        Ok(Self {
            inertial_mass,
            gyrocoupling,
            stiffness,
            damping_scalar,
        })
    }

    /// The conservative part of the parameters, for the mode frequencies.
    fn mode_params(&self) -> GyrationModeParams {
        GyrationModeParams {
            inertial_mass: self.inertial_mass,
            gyrocoupling: self.gyrocoupling,
            stiffness: self.stiffness,
        }
    }
}

/// Band-limited in-plane drive F_x(t) = amplitude sinc[2 pi f_x (t - t0)].
#[derive(Clone, Copy, Debug)]
pub struct SincPulse {
    /// Effective force amplitude (kg m/s^2). Field amplitudes map onto this
    /// through a susceptibility; see [`force_amplitude`].
    pub amplitude: f64,
    /// Cutoff frequency f_x (Hz), > 0.
    pub cutoff_frequency: f64,
    /// Center of the pulse t0 (s).
    pub time_shift: f64,
}

impl SincPulse {
    pub fn new(amplitude: f64, cutoff_frequency: f64, time_shift: f64) -> Result<Self> {
        if !(cutoff_frequency.is_finite() && cutoff_frequency > 0.0) {
            return Err(Error::InvalidInput(format!(
                "pulse cutoff frequency must be finite and positive, got {cutoff_frequency:e} Hz"
            )));
        }
        if !amplitude.is_finite() || !time_shift.is_finite() {
            return Err(Error::InvalidInput(
                "pulse amplitude and time shift must be finite".into(),
            ));
        }
        Ok(Self {
            amplitude,
            cutoff_frequency,
            time_shift,
        })
    }

    /// Force at time t, directed along x.
    fn force(&self, t: f64) -> f64 {
        let u = 2.0 * std::f64::consts::PI * self.cutoff_frequency * (t - self.time_shift);
        if u.abs() < 1e-8 {
            self.amplitude * (1.0 - u * u / 6.0)
        } else {
            self.amplitude * u.sin() / u
        }
    }
}

/// Force amplitude for a field pulse of amplitude `drive_field` (T): the
/// texture has no first-principles force map here, so the linear
/// susceptibility is chosen to make the static displacement
/// `displacement_fraction * disk_radius`.
pub fn force_amplitude(
    stiffness: f64,
    disk_radius: f64,
    displacement_fraction: f64,
) -> f64 {
    displacement_fraction * disk_radius * stiffness
}

/// Integrated center-of-mass orbit on a uniform time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// (X, Y) in meters.
    pub positions: Vec<[f64; 2]>,
    /// (X', Y') in m/s, kept for energy diagnostics.
    pub velocities: Vec<[f64; 2]>,
}

/// One-sided power spectrum of X(t), peak normalized to one. The zero
/// frequency bin is excluded.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub power: Vec<f64>,
    /// Frequency resolution 1 / (N dt).
    pub bin_width: f64,
}

/// Resonance peak of a spectrum.
#[derive(Clone, Copy, Debug)]
pub struct Resonance {
    /// Peak frequency (Hz) after parabolic interpolation.
    pub f_peak: f64,
    /// Full width at half the peak power (Hz), linearly interpolated.
    pub fwhm: f64,
    /// Set when the measured width sits at the window-resolution floor
    /// (below two frequency bins) and reflects the grid, not the damping.
    pub resolution_limited: bool,
}

fn grid_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::NonUniformGrid(
            "time grid needs at least two points".into(),
        ));
    }
    let dt = times[1] - times[0];
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::NonUniformGrid(format!(
            "time step must be positive, got {dt:e} s"
        )));
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
            return Err(Error::NonUniformGrid(format!(
                "time grid is not uniform near t = {:e} s",
                w[0]
            )));
        }
    }
    Ok(dt)
}

/// Integrate the Thiele equation with a classical fourth-order Runge-Kutta
/// scheme on the supplied uniform grid. The step must resolve the fastest
/// gyration branch: dt < 0.1 / max(omega_cw, omega_ccw).
pub fn integrate(
    params: &ThieleParams,
    pulse: Option<&SincPulse>,
    x0: [f64; 2],
    v0: [f64; 2],
    times: &[f64],
) -> Result<Trajectory> {
    let dt = grid_step(times)?;
    let modes = gyration_frequencies(&params.mode_params())?;
    let omega_max = modes.omega_cw.abs().max(modes.omega_ccw.abs());
    if omega_max > 0.0 && dt >= 0.1 / omega_max {
        return Err(Error::StepInstability(format!(
            "time step {dt:e} s must stay below {:e} s to resolve the fastest \
             gyration branch",
            0.1 / omega_max
        )));
    }

    let m = params.inertial_mass;
    let g = params.gyrocoupling;
    let k = params.stiffness;
    let d = params.damping_scalar;
    // State (x, y, vx, vy); R' x G contributes (G vy, -G vx).
    let rhs = |t: f64, s: &[f64; 4]| -> [f64; 4] {
        let fx = pulse.map_or(0.0, |p| p.force(t));
        [
            s[2],
            s[3],
            (-g * s[3] - k * s[0] - d * s[2] + fx) / m,
            (g * s[2] - k * s[1] - d * s[3]) / m,
        ]
    };

    let mut state = [x0[0], x0[1], v0[0], v0[1]];
    let mut positions = Vec::with_capacity(times.len());
    let mut velocities = Vec::with_capacity(times.len());
    positions.push(x0);
    velocities.push(v0);
    for &t in &times[..times.len() - 1] {
        let k1 = rhs(t, &state);
        let mut s2 = state;
        for j in 0..4 {
            s2[j] += 0.5 * dt * k1[j];
        }
        let k2 = rhs(t + 0.5 * dt, &s2);
        let mut s3 = state;
        for j in 0..4 {
            s3[j] += 0.5 * dt * k2[j];
        }
        let k3 = rhs(t + 0.5 * dt, &s3);
        let mut s4 = state;
        for j in 0..4 {
            s4[j] += dt * k3[j];
        }
        let k4 = rhs(t + dt, &s4);
        for j in 0..4 {
            state[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        positions.push([state[0], state[1]]);
        velocities.push([state[2], state[3]]);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        positions,
        velocities,
    })
}

/// Initial condition of a circular gyration eigenmode of the conservative
/// equation: position (radius, 0) and the matching tangential velocity. The
/// branch at omega + G/(2M) rotates counterclockwise in standard axes; the
/// other branch clockwise. FFT analysis of either orbit peaks exactly at the
/// branch frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GyrationBranch {
    /// Branch at omega + G/(2M), the mode kept by the quantized treatment.
    Cw,
    /// Branch at omega - G/(2M).
    Ccw,
}

pub fn circular_mode_state(
    params: &ThieleParams,
    radius: f64,
    branch: GyrationBranch,
) -> Result<([f64; 2], [f64; 2])> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "orbit radius must be finite and positive, got {radius:e} m"
        )));
    }
    let modes = gyration_frequencies(&params.mode_params())?;
    let v = match branch {
        GyrationBranch::Cw => radius * modes.omega_cw,
        GyrationBranch::Ccw => -radius * modes.omega_ccw,
    };
    Ok(([radius, 0.0], [0.0, v]))
}

/// Hann-windowed one-sided power spectrum of X(t), mean removed, peak
/// normalized to one. Needs at least 1024 uniformly spaced samples.
pub fn spectrum(traj: &Trajectory) -> Result<Spectrum> {
    let n = traj.times.len();
    if n < 1024 {
        return Err(Error::NonUniformGrid(format!(
            "spectral analysis needs at least 1024 samples, got {n}"
        )));
    }
    let dt = grid_step(&traj.times)?;
    if traj.positions.len() != n {
        return Err(Error::InvalidInput(
            "trajectory positions and times disagree in length".into(),
        ));
    }
    let mean = traj.positions.iter().map(|p| p[0]).sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = traj
        .positions
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let w = 0.5 * (1.0 - (std::f64::consts::TAU * i as f64 / n as f64).cos());
            Complex::new((p[0] - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let bin_width = 1.0 / (n as f64 * dt);
    let half = n / 2;
    let mut frequencies = Vec::with_capacity(half);
    let mut power = Vec::with_capacity(half);
    for (k, c) in buf.iter().enumerate().take(half + 1).skip(1) {
        frequencies.push(k as f64 * bin_width);
        power.push(c.norm_sqr());
    }
    let peak = power.iter().cloned().fold(0.0_f64, f64::max);
    if peak == 0.0 {
        return Err(Error::InvalidInput(
            "trajectory has no spectral content to normalize".into(),
        ));
    }
    for p in &mut power {
        *p /= peak;
    }
    Ok(Spectrum {
        frequencies,
        power,
        bin_width,
    })
}

/// Locate the dominant resonance: parabolic interpolation of the peak bin
/// and linear interpolation of the half-power crossings. A second local
/// maximum within a third of the peak power (outside the peak's own lobe)
/// makes the extraction ambiguous.
pub fn extract_resonance(spec: &Spectrum) -> Result<Resonance> {
    let p = &spec.power;
    let n = p.len();
    if n < 3 {
        return Err(Error::InvalidInput("spectrum too short".into()));
    }
    let ipk = p
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();

    // Walk down both flanks of the peak's lobe to its surrounding minima.
    let mut lo = ipk;
    while lo > 0 && p[lo - 1] <= p[lo] {
        lo -= 1;
    }
    let mut hi = ipk;
    while hi + 1 < n && p[hi + 1] <= p[hi] {
        hi += 1;
    }
    let second = p[..lo]
        .iter()
        .chain(p[hi + 1..].iter())
        .cloned()
        .fold(0.0_f64, f64::max);
    if second > 0.0 && p[ipk] / second <= 3.0 {
        return Err(Error::MultiPeak(format!(
            "competing spectral peak at {:.3} of the main peak power",
            second / p[ipk]
        )));
    }

    let f_peak = if ipk > 0 && ipk + 1 < n {
        let (pm, p0, pp) = (p[ipk - 1], p[ipk], p[ipk + 1]);
        let denom = pm - 2.0 * p0 + pp;
        let delta = if denom == 0.0 { 0.0 } else { 0.5 * (pm - pp) / denom };
        spec.frequencies[ipk] + delta * spec.bin_width
    } else {
        spec.frequencies[ipk]
    };

    let half_power = 0.5 * p[ipk];
    let mut f_left = spec.frequencies[0];
    let mut found_left = false;
    for j in (0..ipk).rev() {
        if p[j] < half_power {
            let frac = (half_power - p[j]) / (p[j + 1] - p[j]);
            f_left = spec.frequencies[j] + frac * spec.bin_width;
            found_left = true;
            break;
        }
    }
    let mut f_right = spec.frequencies[n - 1];
    let mut found_right = false;
    for j in ipk + 1..n {
        if p[j] < half_power {
            let frac = (p[j - 1] - half_power) / (p[j - 1] - p[j]);
            f_right = spec.frequencies[j - 1] + frac * spec.bin_width;
            found_right = true;
            break;
        }
    }
    let fwhm = f_right - f_left;
    let resolution_limited = !found_left || !found_right || fwhm < 2.0 * spec.bin_width;
    Ok(Resonance {
        f_peak,
        fwhm,
        resolution_limited,
    })
}
