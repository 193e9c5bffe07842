//! Dense complex matrix helpers over `faer`.
//!
//! Every Hermitian eigensolve in the crate goes through
//! [`hermitian_eigenvalues`], which bumps a per-thread counter. Tests use the
//! counter to assert that diagonalization-free paths really are.

use std::cell::Cell;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par, Side};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

thread_local! {
    static EIGENSOLVES: Cell<u64> = const { Cell::new(0) };
}

/// Number of Hermitian eigensolves performed on the current thread.
pub fn eigensolver_calls() -> u64 {
    EIGENSOLVES.with(|c| c.get())
}

/// Parallelism used for dense products and eigensolves.
pub fn parallelism() -> Par {
    faer::get_global_parallelism()
}

/// Sets the thread count used by dense kernels. `1` is sequential.
pub fn set_threads(n: usize) {
    let par = if n <= 1 { Par::Seq } else { Par::rayon(n) };
    faer::set_global_parallelism(par);
}

/// B†B.
pub fn gram(b: MatRef<'_, C64>) -> Mat<C64> {
    let n = b.ncols();
    let mut g = Mat::<C64>::zeros(n, n);
    matmul(&mut g, Accum::Replace, b.adjoint(), b, C64::new(1.0, 0.0), parallelism());
    g
}

/// B·B†.
pub fn outer_gram(b: MatRef<'_, C64>) -> Mat<C64> {
    let n = b.nrows();
    let mut g = Mat::<C64>::zeros(n, n);
    matmul(&mut g, Accum::Replace, b, b.adjoint(), C64::new(1.0, 0.0), parallelism());
    g
}

/// A†·B.
pub fn adjoint_product(a: MatRef<'_, C64>, b: MatRef<'_, C64>) -> Mat<C64> {
    let mut g = Mat::<C64>::zeros(a.ncols(), b.ncols());
    matmul(&mut g, Accum::Replace, a.adjoint(), b, C64::new(1.0, 0.0), parallelism());
    g
}

/// Σ|mᵢⱼ|², accumulated column by column.
pub fn frobenius_sqr(m: MatRef<'_, C64>) -> f64 {
    let mut s = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            s += m[(i, j)].norm_sqr();
        }
    }
    s
}

pub fn trace_re(m: MatRef<'_, C64>) -> f64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)].re).sum()
}

/// max |mᵢⱼ + mⱼᵢ| / ‖m‖_F.
pub fn antisymmetry_defect(m: MatRef<'_, C64>) -> f64 {
    let f = frobenius_sqr(m).sqrt();
    if f == 0.0 {
        return 0.0;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in j..n {
            worst = worst.max((m[(i, j)] + m[(j, i)]).norm());
        }
    }
    worst / f
}

/// max |mᵢⱼ − conj(mⱼᵢ)| / ‖m‖_F.
pub fn hermiticity_defect(m: MatRef<'_, C64>) -> f64 {
    let f = frobenius_sqr(m).sqrt();
    if f == 0.0 {
        return 0.0;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in j..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst / f
}

/// Eigenvalues of a Hermitian matrix in nondecreasing order.
pub fn hermitian_eigenvalues(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    EIGENSOLVES.with(|c| c.set(c.get() + 1));
    m.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::Eigensolver)
}

/// Row-major complex slice viewed as an `n × n` matrix.
pub fn square_from_row_major(data: &[C64], n: usize) -> MatRef<'_, C64> {
    assert_eq!(data.len(), n * n);
    // row-major (i, j) at i*n + j == column-major view of the transpose
    MatRef::from_column_major_slice(data, n, n).transpose()
}
