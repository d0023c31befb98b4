//! Seeded random states, orthogonal matrices and isometries.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{inner, norm_sqr, ComplexMatrix};
use crate::states::{DensityMatrix, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Haar-random pure state.
pub fn random_pure(rng: &mut impl Rng, dim: usize) -> PureState {
    let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Random real pure state.
pub fn random_real_pure(rng: &mut impl Rng, dim: usize) -> PureState {
    let v: Vec<C64> = (0..dim).map(|_| C64::new(gaussian(rng), 0.0)).collect();
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Ginibre state `G G† / Tr` with `G` of shape `dim × rank`.
pub fn random_density_with_rank(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for _ in 0..rank {
        let g: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        m = &m + &ComplexMatrix::outer(&g);
    }
    let t = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / t)).expect("ginibre state is valid")
}

/// Density matrix of random rank in `1..=dim`.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=dim);
    random_density_with_rank(rng, dim, rank)
}

/// Real Ginibre state of random rank.
pub fn random_real_density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=dim);
    let mut m = ComplexMatrix::zeros(dim);
    for _ in 0..rank {
        let g: Vec<C64> = (0..dim).map(|_| C64::new(gaussian(rng), 0.0)).collect();
        m = &m + &ComplexMatrix::outer(&g);
    }
    let t = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / t)).expect("real ginibre state is valid")
}

/// Columns of a real `rows × cols` isometry (`rows ≥ cols`), from
/// Gram-Schmidt QR of a Gaussian matrix.
pub fn random_real_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    assert!(rows >= cols);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(cols);
    while out.len() < cols {
        let mut v: Vec<f64> = (0..rows).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &out {
                let c: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= c * a;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

/// Random real orthogonal matrix.
pub fn random_orthogonal(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let cols = random_real_isometry(rng, dim, dim);
    let cols: Vec<Vec<C64>> = cols
        .into_iter()
        .map(|c| c.into_iter().map(|x| C64::new(x, 0.0)).collect())
        .collect();
    ComplexMatrix::from_columns(dim, &cols)
}

/// Columns of a Haar-ish unitary.
pub fn random_unitary_columns(rng: &mut impl Rng, dim: usize) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while out.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &out {
                let c = inner(q, &v);
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= c * a;
                }
            }
        }
        let norm = norm_sqr(&v).sqrt();
        if norm > 1e-8 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut rng = seeded(3);
        let o = random_orthogonal(&mut rng, 4);
        assert!((&o.transpose() * &o).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        assert_eq!(o.max_abs_imag(), 0.0);
    }

    #[test]
    fn unitary_columns_orthonormal() {
        let mut rng = seeded(5);
        let u = ComplexMatrix::from_columns(3, &random_unitary_columns(&mut rng, 3));
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = random_density(&mut seeded(9), 3);
        let b = random_density(&mut seeded(9), 3);
        assert_eq!(a, b);
    }
}
