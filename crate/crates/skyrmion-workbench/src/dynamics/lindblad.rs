//! Sparse Lindblad superoperator in CSR form, acting on row-major
//! vectorized density matrices: vec(rho)[i d + j] = rho_ij, so
//! vec(A rho B) = (A kron B^T) vec(rho).

use super::operators::CMat;
use num_complex::Complex64;

/// Compressed sparse row matrix over Complex64.
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<u32>,
    pub val: Vec<Complex64>,
}

impl Csr {
    /// y = M x.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for row in 0..self.n {
            let mut acc = Complex64::ZERO;
            for idx in self.row_ptr[row]..self.row_ptr[row + 1] {
                acc += self.val[idx] * x[self.col[idx] as usize];
            }
            y[row] = acc;
        }
    }

    pub fn nnz(&self) -> usize {
        self.val.len()
    }
}

/// Append coeff * (A kron B) to the triplet list, skipping exact zeros.
fn kron_triplets(a: &CMat, b: &CMat, coeff: Complex64, out: &mut Vec<(u32, u32, Complex64)>) {
    let (na, nb) = (a.nrows(), b.nrows());
    for ia in 0..na {
        for ja in 0..na {
            let va = a[(ia, ja)];
            if va == Complex64::ZERO {
                continue;
            }
            let va = coeff * va;
            for ib in 0..nb {
                for jb in 0..nb {
                    let vb = b[(ib, jb)];
                    if vb == Complex64::ZERO {
                        continue;
                    }
                    out.push(((ia * nb + ib) as u32, (ja * nb + jb) as u32, va * vb));
                }
            }
        }
    }
}

/// Lindblad generator for Hamiltonian `h` and jump channels `(L, gamma)`:
/// L[rho] = -i [h, rho] + sum gamma (L rho L+ - {L+L, rho}/2). The
/// vectorized form is assembled from Kronecker triplets, sorted, and merged;
/// assembly order is fixed, so the result is bit-reproducible.
pub fn liouvillian(h: &CMat, jumps: &[(CMat, f64)]) -> Csr {
    let d = h.nrows();
    let id = CMat::identity(d, d);
    let mi = -Complex64::I;
    let mut trips: Vec<(u32, u32, Complex64)> = Vec::new();
    kron_triplets(h, &id, mi, &mut trips);
    kron_triplets(&id, &h.transpose(), -mi, &mut trips);
    for (l, gamma) in jumps {
        let g = Complex64::new(*gamma, 0.0);
        let ldag = l.adjoint();
        let ll = &ldag * l;
        kron_triplets(l, &l.conjugate(), g, &mut trips);
        kron_triplets(&ll, &id, -0.5 * g, &mut trips);
        kron_triplets(&id, &ll.transpose(), -0.5 * g, &mut trips);
    }
    trips.sort_unstable_by_key(|t| (t.0, t.1));

    let n = d * d;
    let mut row_ptr = vec![0usize; n + 1];
    let mut col: Vec<u32> = Vec::with_capacity(trips.len());
    let mut val: Vec<Complex64> = Vec::with_capacity(trips.len());
    let mut last: Option<(u32, u32)> = None;
    for (r, c, v) in trips {
        if last == Some((r, c)) {
            *val.last_mut().unwrap() += v;
        } else {
            col.push(c);
            val.push(v);
            row_ptr[r as usize + 1] += 1;
            last = Some((r, c));
        }
    }
    for r in 0..n {
        row_ptr[r + 1] += row_ptr[r];
    }
    Csr { n, row_ptr, col, val }
}
