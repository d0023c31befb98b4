//! Takagi factorization `S = U diag(D) Uᵀ` of a complex symmetric matrix.
//!
//! Writing `S = X + iY` with real symmetric `X`, `Y`, the real symmetric
//! matrix `[[X, Y], [Y, -X]]` has eigenvalues `±D_j`. An eigenvector
//! `(a; b)` for `+D_j` gives `u = a + ib` with `S ū = D_j u`, and vectors
//! from distinct nonnegative eigenvalues are orthonormal as complex vectors.
//! The partner `(-b; a)` belongs to `-D_j` and maps to `iu`, so scanning the
//! spectrum from the top and keeping the vectors that are new under complex
//! Gram-Schmidt yields a full unitary, including inside degenerate blocks.

use num_complex::Complex64 as C64;

use super::eigen::eig_hermitian;
use super::matrix::{inner, norm_sqr, ComplexMatrix};
use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone)]
pub struct TakagiFactorization {
    pub unitary: ComplexMatrix,
    /// Nonnegative, sorted descending.
    pub singular_values: Vec<f64>,
}

impl TakagiFactorization {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = &self.unitary;
        let n = u.dim();
        let mut out = ComplexMatrix::zeros(n);
        for (k, &d) in self.singular_values.iter().enumerate() {
            for i in 0..n {
                let uik = u[(i, k)] * d;
                for j in 0..n {
                    out[(i, j)] += uik * u[(j, k)];
                }
            }
        }
        out
    }
}

pub fn takagi(s: &ComplexMatrix) -> Result<TakagiFactorization> {
    let defect = s.symmetry_defect();
    if defect > tol::SYMMETRIC {
        return Err(Error::NotSymmetric(defect));
    }
    let n = s.dim();
    let sym = (s + &s.transpose()).scale_real(0.5);

    let mut embed = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = sym[(i, j)];
            embed[(i, j)] = C64::new(z.re, 0.0);
            embed[(i, j + n)] = C64::new(z.im, 0.0);
            embed[(i + n, j)] = C64::new(z.im, 0.0);
            embed[(i + n, j + n)] = C64::new(-z.re, 0.0);
        }
    }
    let eig = eig_hermitian(&embed)?;

    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for k in 0..2 * n {
        if columns.len() == n {
            break;
        }
        let w = eig.eigenvector(k);
        let u: Vec<C64> = (0..n).map(|i| C64::new(w[i].re, w[i + n].re)).collect();
        if let Some(u) = orthonormal_residual(&columns, u) {
            columns.push(u);
        }
    }
    // The spectrum spans C^n, but guard against roundoff starving the scan.
    for e in 0..n {
        if columns.len() == n {
            break;
        }
        let mut u = vec![C64::new(0.0, 0.0); n];
        u[e] = C64::new(1.0, 0.0);
        if let Some(u) = orthonormal_residual(&columns, u) {
            columns.push(u);
        }
    }

    // Make each u† S ū real and nonnegative by a half-angle phase.
    let mut pairs: Vec<(f64, Vec<C64>)> = columns
        .into_iter()
        .map(|mut u| {
            let su = sym.mul_vec(&u.iter().map(|z| z.conj()).collect::<Vec<_>>());
            let d = inner(&u, &su);
            let half = C64::from_polar(1.0, 0.5 * d.arg());
            for z in &mut u {
                *z *= half;
            }
            (d.norm(), u)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let singular_values = pairs.iter().map(|p| p.0).collect();
    let cols: Vec<Vec<C64>> = pairs.into_iter().map(|p| p.1).collect();
    Ok(TakagiFactorization {
        unitary: ComplexMatrix::from_columns(n, &cols),
        singular_values,
    })
}

/// Complex Gram-Schmidt of `u` against `basis`; `None` if little survives.
fn orthonormal_residual(basis: &[Vec<C64>], mut u: Vec<C64>) -> Option<Vec<C64>> {
    for _ in 0..2 {
        for b in basis {
            let c = inner(b, &u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let norm = norm_sqr(&u).sqrt();
    if norm < 0.5 {
        return None;
    }
    for z in &mut u {
        *z /= norm;
    }
    Some(u)
}

/// Σ_j D_j for a symmetric matrix, i.e. its trace norm.
pub fn takagi_trace_norm(s: &ComplexMatrix) -> Result<f64> {
    Ok(takagi(s)?.singular_values.iter().sum())
}
