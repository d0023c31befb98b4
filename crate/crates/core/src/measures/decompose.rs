//! Decompositions attaining the convex roof.
//!
//! Factor `ρ = X X†` and take the Takagi factorization `XᵀX = U D Uᵀ`. The
//! columns of `V = X Ū` satisfy `V V† = ρ` and `VᵀV = D`, so member `j` has
//! weight `p_j = ‖v_j‖²` and witness `D_j / p_j`. The weighted witnesses sum
//! to `Σ D_j = ‖X†X̄‖₁ = √F(ρ, ρᵀ)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{bilinear, inner, psd_factor, takagi, ComplexMatrix};
use crate::states::{DensityMatrix, Ensemble};

/// Unnormalized members `v_j` with `VᵀV` diagonal.
fn takagi_members(rho: &DensityMatrix) -> Result<Vec<Vec<C64>>> {
    let x = psd_factor(rho.matrix())?;
    let r = x.len();
    let mut s = ComplexMatrix::zeros(r);
    for i in 0..r {
        for j in i..r {
            let z = bilinear(&x[i], &x[j]);
            s[(i, j)] = z;
            s[(j, i)] = z;
        }
    }
    let u = takagi(&s)?.unitary;
    let d = rho.dim();
    Ok((0..r)
        .map(|j| {
            let mut v = vec![C64::new(0.0, 0.0); d];
            for (i, xi) in x.iter().enumerate() {
                let w = u[(i, j)].conj();
                for (vk, xk) in v.iter_mut().zip(xi) {
                    *vk += xk * w;
                }
            }
            v
        })
        .collect())
}

/// Ensemble whose average witness equals `√F(ρ, ρᵀ)`. It attains the
/// geometric roof; for `M_gl`, which is strictly convex in the witness, it
/// attains the roof only once the member witnesses agree (see
/// [`equalized_decomposition`]).
pub fn optimal_decomposition(rho: &DensityMatrix) -> Result<Ensemble> {
    Ok(Ensemble::from_unnormalized(&takagi_members(rho)?))
}

/// Optimal ensemble whose members all carry the same witness, so every
/// member has exactly the mixed-state measure.
///
/// Starting from the optimal ensemble, real rotations of member pairs keep
/// `VᵀV` real and preserve `ρ`. With `r = Σ D_j`, member `j` has witness `r`
/// exactly when `B_jj = 0` for `B = Re(VᵀV) - r Re(V†V)`, a traceless real
/// symmetric matrix. Each step pairs a positive and a negative diagonal
/// entry and bisects the rotation angle until one of them vanishes.
pub fn equalized_decomposition(rho: &DensityMatrix) -> Result<Ensemble> {
    let mut v = takagi_members(rho)?;
    let k = v.len();
    let r: f64 = v.iter().map(|vj| bilinear(vj, vj).norm()).sum();
    let b = |v: &[Vec<C64>], i: usize, j: usize| bilinear(&v[i], &v[j]).re - r * inner(&v[i], &v[j]).re;

    let cap = 10 * rho.dim() * rho.dim();
    let mut settled = vec![false; k];
    for _ in 0..cap {
        let diag: Vec<f64> = (0..k).map(|j| b(&v, j, j)).collect();
        let scale: f64 = (0..k).map(|j| inner(&v[j], &v[j]).re).fold(0.0, f64::max);
        let open: Vec<usize> = (0..k).filter(|&j| !settled[j]).collect();
        let hi = open.iter().copied().max_by(|&a, &c| diag[a].total_cmp(&diag[c]));
        let lo = open.iter().copied().min_by(|&a, &c| diag[a].total_cmp(&diag[c]));
        let (Some(hi), Some(lo)) = (hi, lo) else {
            return Ok(Ensemble::from_unnormalized(&v));
        };
        if diag[hi] <= 1e-15 * scale.max(1.0) && diag[lo] >= -1e-15 * scale.max(1.0) {
            return Ok(Ensemble::from_unnormalized(&v));
        }
        let (bii, bjj, bij) = (diag[hi], diag[lo], b(&v, hi, lo));
        let g = |t: f64| {
            let (s, c) = t.sin_cos();
            c * c * bii + 2.0 * s * c * bij + s * s * bjj
        };
        // g(0) > 0 > g(π/2), so a root lies in between.
        let (mut a, mut z) = (0.0, std::f64::consts::FRAC_PI_2);
        for _ in 0..200 {
            let mid = 0.5 * (a + z);
            if mid <= a || mid >= z {
                break;
            }
            if g(mid) > 0.0 {
                a = mid;
            } else {
                z = mid;
            }
        }
        let t = if g(a).abs() <= g(z).abs() { a } else { z };
        let (s, c) = t.sin_cos();
        let (vi, vj) = (v[hi].clone(), v[lo].clone());
        v[hi] = vi.iter().zip(&vj).map(|(x, y)| x * c + y * s).collect();
        v[lo] = vi.iter().zip(&vj).map(|(x, y)| -x * s + y * c).collect();
        settled[hi] = true;
        if open.len() <= 2 {
            settled[lo] = true;
        }
    }
    Err(Error::NoConvergence(cap))
}
