//! Dense linear algebra for small dimensions: Hermitian eigensolver, PSD
//! square roots, trace norms, root fidelity and Takagi factorization.

mod eigen;
mod matrix;
mod takagi;

pub use eigen::{eig_hermitian, EigenDecomposition};
pub use matrix::{bilinear, inner, norm_sqr, ComplexMatrix};
pub use takagi::{takagi, takagi_trace_norm, TakagiFactorization};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::tol;

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    if let Some(&min) = eig.eigenvalues.last() {
        if min < -tol::PSD_CLAMP {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()).hermitian_part())
}

/// Factor a PSD matrix as `X X†` with `X` of shape `dim × rank`, returned as
/// its columns `√λ_k |e_k⟩`. Eigenvalues below [`tol::RANK`] are dropped, so
/// pure states factor with exactly one column.
pub fn psd_factor(m: &ComplexMatrix) -> Result<Vec<Vec<C64>>> {
    let eig = eig_hermitian(m)?;
    if let Some(&min) = eig.eigenvalues.last() {
        if min < -tol::PSD_CLAMP {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > tol::RANK)
        .map(|(k, &l)| {
            let w = l.sqrt();
            eig.eigenvector(k).into_iter().map(|z| z * w).collect()
        })
        .collect())
}

/// Trace norm of a `rows × cols` matrix given row-major, computed from the
/// spectrum `±σ_j` of the Hermitian dilation `[[0, C], [C†, 0]]`. Small
/// singular values keep absolute (not square-root) accuracy this way.
pub fn trace_norm(rows: usize, cols: usize, entries: &[C64]) -> Result<f64> {
    assert_eq!(entries.len(), rows * cols);
    let n = rows + cols;
    if n == 0 {
        return Ok(0.0);
    }
    let mut dilation = ComplexMatrix::zeros(n);
    for i in 0..rows {
        for j in 0..cols {
            let z = entries[i * cols + j];
            dilation[(i, rows + j)] = z;
            dilation[(rows + j, i)] = z.conj();
        }
    }
    let eig = eig_hermitian(&dilation)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

/// `‖X† Y‖₁` for column lists `X`, `Y` of equal height.
pub(crate) fn overlap_trace_norm(x: &[Vec<C64>], y: &[Vec<C64>]) -> Result<f64> {
    let entries: Vec<C64> = x.iter().flat_map(|xi| y.iter().map(move |yj| inner(xi, yj))).collect();
    trace_norm(x.len(), y.len(), &entries)
}

/// Root fidelity `Tr√(√ρ σ √ρ)`, evaluated as `‖X† Y‖₁` for factorizations
/// `ρ = X X†`, `σ = Y Y†`. Clamped to `[0, 1]`.
pub fn root_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let x = psd_factor(rho.matrix())?;
    let y = psd_factor(sigma.matrix())?;
    Ok(overlap_trace_norm(&x, &y)?.clamp(0.0, 1.0))
}

/// Complex Gram-Schmidt on the columns of `m`.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        for _ in 0..2 {
            for b in &cols {
                let c = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let norm = norm_sqr(&v).sqrt();
        for z in &mut v {
            *z /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_columns(n, &cols)
}
