//! Dense operators on the GM (x) NV (x) Tr product space. The mode factor
//! comes first; qubit bases are ordered (ground, excited).

use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

/// Truncated-mode Hilbert space: gm_cutoff Fock states times two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpec {
    /// Number of gyration-mode Fock states kept (>= 2).
    pub gm_cutoff: usize,
}

impl HilbertSpec {
    pub fn new(gm_cutoff: usize) -> Result<Self> {
        if gm_cutoff < 2 {
            return Err(Error::InvalidInput(format!(
                "gyration-mode cutoff must be >= 2, got {gm_cutoff}"
            )));
        }
        Ok(Self { gm_cutoff })
    }

    /// Total dimension 4 * gm_cutoff.
    pub fn dim(&self) -> usize {
        4 * self.gm_cutoff
    }

    /// Mode annihilation operator on the product space.
    pub fn mode_annihilation(&self) -> CMat {
        kron3(&annihilation(self.gm_cutoff), &identity(2), &identity(2))
    }

    /// Mode number operator.
    pub fn mode_number(&self) -> CMat {
        let a = self.mode_annihilation();
        a.adjoint() * a
    }

    pub fn nv_lower(&self) -> CMat {
        kron3(&identity(self.gm_cutoff), &sigma_minus(), &identity(2))
    }

    pub fn nv_z(&self) -> CMat {
        kron3(&identity(self.gm_cutoff), &sigma_z(), &identity(2))
    }

    pub fn nv_x(&self) -> CMat {
        kron3(&identity(self.gm_cutoff), &sigma_x(), &identity(2))
    }

    pub fn tr_lower(&self) -> CMat {
        kron3(&identity(self.gm_cutoff), &identity(2), &sigma_minus())
    }

    pub fn tr_z(&self) -> CMat {
        kron3(&identity(self.gm_cutoff), &identity(2), &sigma_z())
    }

    /// NV excited-state projector.
    pub fn nv_population(&self) -> CMat {
        let s = self.nv_lower();
        s.adjoint() * s
    }

    /// Transmon excited-state projector.
    pub fn tr_population(&self) -> CMat {
        let s = self.tr_lower();
        s.adjoint() * s
    }

    /// Index of the product basis state |n, nv, tr>.
    pub fn basis_index(&self, n: usize, nv_excited: bool, tr_excited: bool) -> usize {
        debug_assert!(n < self.gm_cutoff);
        4 * n + 2 * usize::from(nv_excited) + usize::from(tr_excited)
    }
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Fock-space annihilation operator, a |k> = sqrt(k) |k-1>.
pub fn annihilation(n: usize) -> CMat {
    let mut a = CMat::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// Qubit lowering operator |g><e| in the (g, e) basis.
pub fn sigma_minus() -> CMat {
    let mut s = CMat::zeros(2, 2);
    s[(0, 1)] = Complex64::ONE;
    s
}

/// Pauli z with the excited state at +1: diag(-1, +1).
pub fn sigma_z() -> CMat {
    let mut s = CMat::zeros(2, 2);
    s[(0, 0)] = -Complex64::ONE;
    s[(1, 1)] = Complex64::ONE;
    s
}

pub fn sigma_x() -> CMat {
    let mut s = CMat::zeros(2, 2);
    s[(0, 1)] = Complex64::ONE;
    s[(1, 0)] = Complex64::ONE;
    s
}

pub fn kron3(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    a.kronecker(b).kronecker(c)
}

/// tr(op rho).
pub fn expectation_complex(op: &CMat, rho: &CMat) -> Complex64 {
    let n = op.nrows();
    let mut acc = Complex64::ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += op[(i, k)] * rho[(k, i)];
        }
    }
    acc
}

/// Re tr(op rho).
pub fn expectation(op: &CMat, rho: &CMat) -> f64 {
    expectation_complex(op, rho).re
}
