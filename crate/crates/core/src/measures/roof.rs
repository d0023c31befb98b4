//! Brute-force convex roof by local search over decompositions.
//!
//! Every decomposition of `ρ = X X†` into `k` members is `V = X W` for an
//! `r × k` matrix `W` with orthonormal rows. The search starts from random
//! `W` and applies two-member unitary rotations
//!
//! ```text
//! v_a' =  c v_a + s e^{-iφ} v_b
//! v_b' = -s e^{iφ} v_a + c v_b
//! ```
//!
//! which keep `V V† = ρ`. A member contributes `(p - |S|)/2` to the
//! geometric roof and `p - √(p (p + |S|)/2)` to the geometric-like one,
//! where `p = ‖v‖²` and `S = vᵀv`. Both are evaluated for a rotated pair from
//! six cached scalars, so each trial rotation costs O(1).

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{measure_pure, MeasureKind};
use crate::error::{Error, Result};
use crate::numerics::{bilinear, inner, norm_sqr, psd_factor};
use crate::sampling::random_unitary_columns;
use crate::states::{DensityMatrix, Ensemble};

pub const DEFAULT_RESTARTS: usize = 20;

/// Sweeps stop once a full pass gains less than this.
const SWEEP_IMPROVEMENT: f64 = 1e-10;
const MAX_SWEEPS: usize = 2000;
const GRID: usize = 12;
const MIN_STEP: f64 = 1e-10;
/// A compass move must gain at least this much; the roof has flat valleys
/// where roundoff alone would otherwise keep the search moving.
const MIN_GAIN: f64 = 1e-15;
const MAX_MOVES: usize = 400;

#[derive(Debug, Clone)]
pub struct RoofResult {
    pub value: f64,
    pub ensemble: Ensemble,
    /// Total sweeps across all restarts.
    pub iterations: usize,
}

fn contribution(p: f64, s: f64, kind: MeasureKind) -> f64 {
    match kind {
        MeasureKind::Geometric => 0.5 * (p - s),
        MeasureKind::GeometricLike => p - (0.5 * p * (p + s)).max(0.0).sqrt(),
    }
}

fn member_value(v: &[C64], kind: MeasureKind) -> f64 {
    contribution(norm_sqr(v), bilinear(v, v).norm(), kind)
}

/// Cached scalars of a member pair.
struct Pair {
    pa: f64,
    pb: f64,
    c: C64,
    saa: C64,
    sbb: C64,
    sab: C64,
}

impl Pair {
    fn new(a: &[C64], b: &[C64]) -> Self {
        Self {
            pa: norm_sqr(a),
            pb: norm_sqr(b),
            c: inner(a, b),
            saa: bilinear(a, a),
            sbb: bilinear(b, b),
            sab: bilinear(a, b),
        }
    }

    fn value(&self, theta: f64, phi: f64, kind: MeasureKind) -> f64 {
        let (s, c) = theta.sin_cos();
        let w = C64::from_polar(1.0, -phi);
        let cross = 2.0 * c * s * (w * self.c).re;
        let pa = c * c * self.pa + s * s * self.pb + cross;
        let pb = s * s * self.pa + c * c * self.pb - cross;
        let sa = self.saa * (c * c) + w * self.sab * (2.0 * c * s) + w * w * self.sbb * (s * s);
        let wc = w.conj();
        let sb = wc * wc * self.saa * (s * s) - wc * self.sab * (2.0 * s * c) + self.sbb * (c * c);
        contribution(pa.max(0.0), sa.norm(), kind) + contribution(pb.max(0.0), sb.norm(), kind)
    }
}

/// Best rotation of one pair: coarse grid, then compass search.
fn optimize_pair(pair: &Pair, kind: MeasureKind) -> (f64, f64, f64) {
    let mut best = (0.0, 0.0, pair.value(0.0, 0.0, kind));
    for i in 0..GRID {
        let theta = std::f64::consts::FRAC_PI_2 * i as f64 / GRID as f64;
        for j in 0..GRID {
            let phi = std::f64::consts::TAU * j as f64 / GRID as f64;
            let f = pair.value(theta, phi, kind);
            if f < best.2 {
                best = (theta, phi, f);
            }
        }
    }
    let mut step = std::f64::consts::PI / GRID as f64;
    let mut moves = 0;
    while step > MIN_STEP && moves < MAX_MOVES {
        moves += 1;
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let (t, p) = (best.0 + dt, best.1 + dp);
            let f = pair.value(t, p, kind);
            if f < best.2 - MIN_GAIN {
                best = (t, p, f);
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

fn rotate(v: &mut [Vec<C64>], a: usize, b: usize, theta: f64, phi: f64) {
    let (s, c) = theta.sin_cos();
    let w = C64::from_polar(1.0, -phi);
    let (va, vb) = (v[a].clone(), v[b].clone());
    v[a] = va.iter().zip(&vb).map(|(x, y)| x * c + y * w * s).collect();
    v[b] = va.iter().zip(&vb).map(|(x, y)| -x * w.conj() * s + y * c).collect();
}

fn total(v: &[Vec<C64>], kind: MeasureKind) -> f64 {
    v.iter().map(|m| member_value(m, kind)).sum()
}

/// One restart: returns the final members, their value and the sweep count.
fn descend(x: &[Vec<C64>], k: usize, kind: MeasureKind, seed: u64) -> (Vec<Vec<C64>>, f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary_columns(&mut rng, k);
    let d = x[0].len();
    let mut v: Vec<Vec<C64>> = (0..k)
        .map(|j| {
            let mut m = vec![C64::new(0.0, 0.0); d];
            for (i, xi) in x.iter().enumerate() {
                let w = u[j][i];
                for (mk, xk) in m.iter_mut().zip(xi) {
                    *mk += xk * w;
                }
            }
            m
        })
        .collect();

    let mut current = total(&v, kind);
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let before = current;
        for a in 0..k {
            for b in a + 1..k {
                let pair = Pair::new(&v[a], &v[b]);
                let base = pair.value(0.0, 0.0, kind);
                let (theta, phi, f) = optimize_pair(&pair, kind);
                if f < base - MIN_GAIN {
                    rotate(&mut v, a, b, theta, phi);
                }
            }
        }
        current = total(&v, kind);
        if before - current < SWEEP_IMPROVEMENT {
            break;
        }
    }
    (v, current, sweeps)
}

/// Smallest `Σ p_j M(ψ_j)` found over `restarts` local searches with
/// `ensemble_size` members. Restart `i` is seeded with `seed + i`.
pub fn convex_roof_oracle(
    rho: &DensityMatrix,
    kind: MeasureKind,
    restarts: usize,
    ensemble_size: usize,
    seed: u64,
) -> Result<RoofResult> {
    let x = psd_factor(rho.matrix())?;
    if ensemble_size < x.len() || ensemble_size == 0 {
        return Err(Error::BadEnsembleSize {
            size: ensemble_size,
            rank: x.len(),
        });
    }
    if restarts == 0 {
        return Err(Error::BadParameter("restarts must be positive".into()));
    }
    let mut best: Option<(Vec<Vec<C64>>, f64)> = None;
    let mut iterations = 0;
    for i in 0..restarts {
        let (v, value, sweeps) = descend(&x, ensemble_size, kind, seed.wrapping_add(i as u64));
        iterations += sweeps;
        if best.as_ref().is_none_or(|b| value < b.1) {
            best = Some((v, value));
        }
    }
    let (v, _) = best.expect("at least one restart");
    let ensemble = Ensemble::from_unnormalized(&v);
    let value = ensemble.average(|m| measure_pure(m, kind));
    Ok(RoofResult {
        value,
        ensemble,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::measure_mixed;
    use crate::numerics::ComplexMatrix;
    use crate::states::PureState;

    fn example_state() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_rows(&[
            vec![C64::new(0.75, 0.0), C64::new(0.0, -0.25)],
            vec![C64::new(0.0, 0.25), C64::new(0.25, 0.0)],
        ]))
        .unwrap()
    }

    #[test]
    fn pair_value_matches_explicit_rotation() {
        let v = vec![
            vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.4)],
            vec![C64::new(0.1, -0.3), C64::new(0.5, 0.2)],
        ];
        let pair = Pair::new(&v[0], &v[1]);
        for kind in MeasureKind::ALL {
            let mut w = v.clone();
            rotate(&mut w, 0, 1, 0.7, 2.1);
            assert!((pair.value(0.7, 2.1, kind) - total(&w, kind)).abs() < 1e-14);
        }
    }

    #[test]
    fn example_matches_closed_form() {
        let rho = example_state();
        let res = convex_roof_oracle(&rho, MeasureKind::GeometricLike, DEFAULT_RESTARTS, 4, 0).unwrap();
        let closed = measure_mixed(&rho, MeasureKind::GeometricLike).unwrap();
        assert!((res.value - closed).abs() < 1e-6, "{} vs {closed}", res.value);
        assert!(res.ensemble.density_matrix().max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn rank_one_and_real_inputs() {
        let psi = PureState::canonical(0.3).unwrap();
        let res = convex_roof_oracle(&psi.density(), MeasureKind::Geometric, 2, 3, 1).unwrap();
        assert!((res.value - 0.35).abs() < 1e-12);
        let real = DensityMatrix::new(ComplexMatrix::diag(&[0.6, 0.4])).unwrap();
        let res = convex_roof_oracle(&real, MeasureKind::GeometricLike, 3, 2, 1).unwrap();
        assert!(res.value < 1e-10);
    }

    #[test]
    fn rejects_small_ensembles() {
        let rho = DensityMatrix::maximally_mixed(3);
        let err = convex_roof_oracle(&rho, MeasureKind::Geometric, 1, 2, 0).unwrap_err();
        assert_eq!(err, Error::BadEnsembleSize { size: 2, rank: 3 });
    }

    #[test]
    fn deterministic_per_seed() {
        let rho = example_state();
        let a = convex_roof_oracle(&rho, MeasureKind::Geometric, 3, 3, 7).unwrap();
        let b = convex_roof_oracle(&rho, MeasureKind::Geometric, 3, 3, 7).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.iterations, b.iterations);
    }
}
