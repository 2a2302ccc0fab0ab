//! Numerical workbench for hybrid quantum systems built around the gyration
//! mode of a magnetic skyrmion: a Belavin-Polyakov texture in a thin
//! ferromagnetic disk couples a single NV center (through its quantized
//! stray field) and a flux-tunable transmon (through the flux it threads
//! into the transmon SQUID loop).
//!
//! The modules follow the physical pipeline:
//!
//! - [`bp_skyrmion`]: static texture, gyration mode function, spin-wave
//!   amplitude, zero-point gyration radius, quantized mode frequencies.
//! - [`quadrature`]: Gauss-Legendre grids over the disk volume and the
//!   adaptive refinement driver shared by all field integrals.
//! - [`stray_field`]: quantized stray-field mode at arbitrary exterior
//!   points, the on-axis closed form, and the complex SQUID flux amplitude.
//! - [`nv_coupling`]: NV qubit frequency and the skyrmion-NV coupling rate.
//! - [`transmon`]: SQUID spectrum, skyrmion-transmon couplings, and
//!   dispersive-regime diagnostics.
//! - [`dynamics`]: tripartite Lindblad evolution, dispersive and
//!   adiabatic-elimination reductions, coherent and nonreciprocal state
//!   transfer experiments.
//! - [`thiele_sim`]: classical rigid-texture gyration (Thiele dynamics),
//!   spectra, and resonance extraction.
//! - [`config`], [`report`], [`cli`]: reproducible runs driven by TOML
//!   configs with deterministic CSV/JSON artifacts.
//!
//! Frequencies are angular (rad/s) everywhere inside the library; interfaces
//! that report plain Hz say so and divide by 2 pi at the boundary. Lengths
//! are SI meters; magnetic fields are Tesla.
//!
//! Every major capability has a runnable demonstration under `examples/`.

pub mod bp_skyrmion;
pub mod cli;
pub mod config;
pub mod constants;
pub mod dynamics;
pub mod nv_coupling;
pub mod quadrature;
pub mod report;
pub mod stray_field;
pub mod thiele_sim;
pub mod transmon;

/// Crate-wide error type. Variants map onto process exit codes in the CLI:
/// configuration problems exit 2, numerical failures exit 3, violated physics
/// invariants exit 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter fails its documented domain (non-positive length, count
    /// below minimum, tolerance out of range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A field was requested at a point inside the magnetic volume where the
    /// dipolar kernel diverges.
    #[error("field point ({x:.3e}, {y:.3e}, {z:.3e}) m lies inside the disk volume")]
    SingularPoint { x: f64, y: f64, z: f64 },

    /// Adaptive quadrature failed to reach the requested relative tolerance
    /// within the refinement budget.
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    /// Two-tone drive parameters do not satisfy the frequency-matching
    /// condition required by the rotating-frame Hamiltonian.
    #[error("drive condition violated: {0}")]
    DriveConditionViolated(String),

    /// The adaptive integrator could not take a step above its minimum size.
    #[error("integrator step failure: {0}")]
    StepFailure(String),

    /// A fixed-step trajectory was requested with a step too coarse for the
    /// fastest mode present.
    #[error("fixed-step instability: {0}")]
    StepInstability(String),

    /// Spectrum estimation needs uniformly spaced samples.
    #[error("non-uniform time grid: {0}")]
    NonUniformGrid(String),

    /// Resonance extraction found competing spectral peaks of similar height.
    #[error("ambiguous spectrum: {0}")]
    MultiPeak(String),

    /// A physics invariant (trace, positivity, hermiticity, normalization)
    /// failed during a run. This is never downgraded to a warning.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// Configuration file missing, unparsable, or incomplete for the
    /// requested command.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
