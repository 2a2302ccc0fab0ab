//! Open-system dynamics of the gyration mode coupled to an NV center and a
//! transmon: Hamiltonian builders on the truncated product space, Lindblad
//! evolution with state validation at every stored point, reduced two-qubit
//! models (dispersive exchange and adiabatic elimination of a lossy mode),
//! and the state-transfer experiments built on top of them.

pub mod effective;
pub mod lindblad;
pub mod operators;
pub mod rk45;
pub mod transfer;

pub use effective::{effective_coherent, effective_dissipative, EffectiveCoherent, EffectiveDissipative};
pub use operators::{CMat, HilbertSpec};
pub use transfer::{transfer_experiment, TransferDirection, TransferKind, TransferResult};

use crate::{Error, Result};
use num_complex::Complex64;
use operators::expectation;

/// Laboratory-frame parameters of the mode + NV + transmon system. All
/// frequencies and rates are angular (rad/s). `drives` lists NV microwave
/// tones as (rabi strength, tone frequency) pairs; the rotating-frame
/// builder requires exactly two.
#[derive(Clone, Debug, Default)]
pub struct TripartiteModel {
    pub omega_gm: f64,
    pub omega_nv: f64,
    pub omega_tr: f64,
    /// Mode-NV exchange coupling.
    pub lambda_sn: f64,
    /// Mode-transmon exchange coupling.
    pub lambda_st_t: f64,
    /// Mode-transmon longitudinal coupling; enters the Hamiltonian only when
    /// `include_longitudinal` is set. Off by default: the large detuning
    /// between mode and transmon suppresses it.
    pub lambda_st_l: f64,
    pub include_longitudinal: bool,
    /// NV drive tones (rabi strength, tone frequency).
    pub drives: Vec<(f64, f64)>,
    pub gamma_gm: f64,
    pub gamma_nv_decay: f64,
    pub gamma_nv_dephasing: f64,
    pub gamma_tr_decay: f64,
    pub gamma_tr_dephasing: f64,
}

impl TripartiteModel {
    /// Every dissipation rate must be finite and nonnegative.
    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("gamma_gm", self.gamma_gm),
            ("gamma_nv_decay", self.gamma_nv_decay),
            ("gamma_nv_dephasing", self.gamma_nv_dephasing),
            ("gamma_tr_decay", self.gamma_tr_decay),
            ("gamma_tr_dephasing", self.gamma_tr_dephasing),
        ];
        for (name, rate) in rates {
            if !rate.is_finite() || rate < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} must be finite and nonnegative, got {rate:e}"
                )));
            }
        }
        Ok(())
    }

    /// The two drive tones, or an error when the model does not carry
    /// exactly two.
    fn two_drives(&self) -> Result<((f64, f64), (f64, f64))> {
        match self.drives.as_slice() {
            &[first, second] => Ok((first, second)),
            other => Err(Error::InvalidInput(format!(
                "the rotating-frame construction needs exactly two drive tones, got {}",
                other.len()
            ))),
        }
    }
}

/// Full Hamiltonian: mode energy, the two qubit splittings, and exchange
/// couplings of the mode to each qubit,
///
///   H = w_GM a+a + (w_NV/2) sz + (w_Tr/2) sz^T
///       + L_SN (a s+ + a+ s-) + L_ST^T (a s+^T + a+ s-^T),
///
/// plus, when enabled, the longitudinal term L_ST^L (a + a+) s+^T s-^T.
/// Overall coupling signs are a gauge choice (absorbed by a -> -a); all
/// populations are unaffected.
pub fn build_tripartite(model: &TripartiteModel, spec: &HilbertSpec) -> Result<CMat> {
    model.validate()?;
    let a = spec.mode_annihilation();
    let adag = a.adjoint();
    let snv = spec.nv_lower();
    let str_ = spec.tr_lower();

    let mut h = spec.mode_number().scale(model.omega_gm)
        + spec.nv_z().scale(0.5 * model.omega_nv)
        + spec.tr_z().scale(0.5 * model.omega_tr)
        + (&a * snv.adjoint() + &adag * &snv).scale(model.lambda_sn)
        + (&a * str_.adjoint() + &adag * &str_).scale(model.lambda_st_t);
    if model.include_longitudinal {
        h += ((&a + &adag) * (str_.adjoint() * &str_)).scale(model.lambda_st_l);
    }
    Ok(h)
}

/// Hamiltonian in the frame of a strong two-tone NV drive. With the tones
/// tuned to w1 - w2 = 2 Omega_1, the frame of the first (strong) tone turns
/// the second tone's strength Omega_2 into the NV splitting, halves the
/// mode-NV coupling into a Rabi (a + a+) sx term, and detunes the other
/// subsystems by Delta_X = w_X - w1:
///
///   H_JR = (Omega_2/2) sz + (Delta_Tr/2) sz^T + Delta_GM a+a
///          + (L_SN/2) (a + a+) sx + L_ST^T (a s+^T + a+ s-^T).
pub fn build_driven_rotating(model: &TripartiteModel, spec: &HilbertSpec) -> Result<CMat> {
    model.validate()?;
    let ((omega1, tone1), (omega2, tone2)) = model.two_drives()?;
    let mismatch = tone1 - tone2 - 2.0 * omega1;
    let scale = tone1.abs().max(tone2.abs()).max(2.0 * omega1.abs());
    if mismatch.abs() > 1e-9 * scale {
        return Err(Error::DriveConditionViolated(format!(
            "tone spacing must equal twice the first rabi strength: \
             w1 - w2 = {:e}, 2 Omega_1 = {:e}",
            tone1 - tone2,
            2.0 * omega1
        )));
    }
    let delta_tr = model.omega_tr - tone1;
    let delta_gm = model.omega_gm - tone1;
    let a = spec.mode_annihilation();
    let adag = a.adjoint();
    let str_ = spec.tr_lower();

    Ok(spec.mode_number().scale(delta_gm)
        + spec.nv_z().scale(0.5 * omega2)
        + spec.tr_z().scale(0.5 * delta_tr)
        + ((&a + &adag) * spec.nv_x()).scale(0.5 * model.lambda_sn)
        + (&a * str_.adjoint() + &adag * &str_).scale(model.lambda_st_t))
}

/// Local dissipation channels as (jump operator, rate) pairs: mode decay,
/// qubit decay, and qubit pure dephasing. A dephasing rate gamma enters as
/// the pair (sigma_z, gamma/2), so off-diagonal elements decay as
/// exp(-gamma t). Zero-rate channels are omitted.
pub fn collapse_operators(model: &TripartiteModel, spec: &HilbertSpec) -> Result<Vec<(CMat, f64)>> {
    model.validate()?;
    let channels = [
        (spec.mode_annihilation(), model.gamma_gm),
        (spec.nv_lower(), model.gamma_nv_decay),
        (spec.nv_z(), model.gamma_nv_dephasing / 2.0),
        (spec.tr_lower(), model.gamma_tr_decay),
        (spec.tr_z(), model.gamma_tr_dephasing / 2.0),
    ];
    Ok(channels.into_iter().filter(|(_, rate)| *rate > 0.0).collect())
}

/// Validated density matrix.
#[derive(Clone, Debug)]
pub struct DensityState {
    pub matrix: CMat,
}

impl DensityState {
    /// Wrap a matrix after checking hermiticity, trace, and positivity.
    pub fn new(matrix: CMat) -> Result<Self> {
        let state = Self { matrix };
        state.check()?;
        Ok(state)
    }

    /// Product basis state |n, nv, tr><n, nv, tr|.
    pub fn basis(
        spec: &HilbertSpec,
        mode_quanta: usize,
        nv_excited: bool,
        tr_excited: bool,
    ) -> Result<Self> {
        if mode_quanta >= spec.gm_cutoff {
            return Err(Error::InvalidInput(format!(
                "mode occupation {mode_quanta} exceeds the cutoff {}",
                spec.gm_cutoff
            )));
        }
        let mut matrix = CMat::zeros(spec.dim(), spec.dim());
        let idx = spec.basis_index(mode_quanta, nv_excited, tr_excited);
        matrix[(idx, idx)] = Complex64::ONE;
        Ok(Self { matrix })
    }

    /// Hermitian and unit trace to 1e-9, and positive semidefinite down to
    /// an eigenvalue floor of -1e-9. Propagated states must stay inside
    /// these integration-scale tolerances; drift beyond them signals a
    /// defective generator, not roundoff.
    pub fn check(&self) -> Result<()> {
        let m = &self.matrix;
        let d = m.nrows();
        if m.ncols() != d {
            return Err(Error::InvariantViolation(
                "density matrix must be square".into(),
            ));
        }
        let mut herm: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                herm = herm.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if herm >= 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "hermiticity defect {herm:.3e} exceeds 1e-9"
            )));
        }
        let trace: Complex64 = (0..d).map(|i| m[(i, i)]).sum();
        if (trace - Complex64::ONE).norm() >= 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "trace defect {:.3e} exceeds 1e-9",
                (trace - Complex64::ONE).norm()
            )));
        }
        // Hermitian eigensolve: a complex Cholesky factorization would take
        // complex square roots of the pivots and never detect indefiniteness.
        let min_eig = self
            .matrix
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-9 {
            return Err(Error::InvariantViolation(format!(
                "density matrix eigenvalue {min_eig:.3e} below -1e-9"
            )));
        }
        Ok(())
    }
}

/// Time series from an evolution: validated states plus the populations of
/// interest at every grid point.
pub struct Evolution {
    pub times: Vec<f64>,
    pub states: Vec<DensityState>,
    /// NV excited-state population.
    pub nv_population: Vec<f64>,
    /// Transmon excited-state population.
    pub tr_population: Vec<f64>,
    /// Mode occupation <a+a>. Empty for two-qubit reductions, which carry
    /// no mode.
    pub mode_occupation: Vec<f64>,
}

/// Integrate the master equation and return the raw density matrices at the
/// requested times. Dimension-agnostic core shared by the tripartite model
/// and the two-qubit reductions.
pub(crate) fn propagate(
    h: &CMat,
    jumps: &[(CMat, f64)],
    rho0: &CMat,
    times: &[f64],
) -> Result<Vec<CMat>> {
    let d = h.nrows();
    if h.ncols() != d || rho0.nrows() != d || rho0.ncols() != d {
        return Err(Error::InvalidInput(
            "Hamiltonian and initial state dimensions disagree".into(),
        ));
    }
    for (op, rate) in jumps {
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::InvalidInput(
                "jump operator dimension disagrees with the Hamiltonian".into(),
            ));
        }
        if !rate.is_finite() || *rate < 0.0 {
            return Err(Error::InvalidInput(format!(
                "jump rates must be finite and nonnegative, got {rate:e}"
            )));
        }
    }
    let generator = lindblad::liouvillian(h, jumps);
    let y0: Vec<Complex64> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| rho0[(i, j)])
        .collect();
    let flat = rk45::propagate_linear(&generator, &y0, times)?;
    Ok(flat
        .into_iter()
        .map(|y| CMat::from_row_slice(d, d, &y))
        .collect())
}

/// Evolve a tripartite state, storing the validated state and the three
/// populations at every output time. A trace, hermiticity, or positivity
/// defect in any stored state is an error, never a warning.
pub fn evolve(
    h: &CMat,
    jumps: &[(CMat, f64)],
    rho0: &DensityState,
    times: &[f64],
    spec: &HilbertSpec,
) -> Result<Evolution> {
    if h.nrows() != spec.dim() {
        return Err(Error::InvalidInput(format!(
            "Hamiltonian dimension {} does not match the space dimension {}",
            h.nrows(),
            spec.dim()
        )));
    }
    rho0.check()?;
    let mats = propagate(h, jumps, &rho0.matrix, times)?;
    let number = spec.mode_number();
    let nv_proj = spec.nv_population();
    let tr_proj = spec.tr_population();

    let mut evolution = Evolution {
        times: times.to_vec(),
        states: Vec::with_capacity(mats.len()),
        nv_population: Vec::with_capacity(mats.len()),
        tr_population: Vec::with_capacity(mats.len()),
        mode_occupation: Vec::with_capacity(mats.len()),
    };
    for m in mats {
        let state = DensityState::new(m)?;
        evolution.nv_population.push(expectation(&nv_proj, &state.matrix));
        evolution.tr_population.push(expectation(&tr_proj, &state.matrix));
        evolution.mode_occupation.push(expectation(&number, &state.matrix));
        evolution.states.push(state);
    }
    Ok(evolution)
}
