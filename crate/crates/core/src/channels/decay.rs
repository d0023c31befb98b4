//! Imaginarity lost by the canonical qubit state `√((1+A)/2)|0⟩ + i√((1-A)/2)|1⟩`
//! under bit flip (parameter m), phase damping (n) and amplitude damping (p).
//!
//! The closed forms are written in terms of auxiliary quantities `s_i`,
//! `t_i`, and the output root fidelity is `(√(s - t) + √(s + t)) / 2` up to
//! a channel-dependent factor. Where `s ≈ t` the difference cancels
//! catastrophically in f64 (about 4e-9 at `A = 1`), so every expression is
//! evaluated in double-double arithmetic and rounded once at the end.

use twofloat::TwoFloat;

use super::{apply, make_noise_channel, NoiseKind};
use crate::error::{Error, Result};
use crate::measures::{measure_mixed, measure_pure, MeasureKind};
use crate::states::PureState;

fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

/// Square root with roundoff negatives clamped to zero.
fn sqrt0(x: TwoFloat) -> TwoFloat {
    if x.hi() <= 0.0 {
        dd(0.0)
    } else {
        x.sqrt()
    }
}

fn check_witness(a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::BadParameter(format!("witness {a} outside [0, 1]")));
    }
    Ok(())
}

/// `ΔM = M(ρ) - M(ε(ρ))` from the closed-form expressions.
pub fn decay_closed_form(kind: NoiseKind, a: f64, measure: MeasureKind) -> Result<f64> {
    let x = kind.check()?;
    check_witness(a)?;
    let (a, x) = (dd(a), dd(x));
    let one = dd(1.0);
    let two = dd(2.0);
    let sqrt2 = two.sqrt();
    let a2 = a * a;

    let value = match kind {
        NoiseKind::BitFlip(_) => {
            let m = x;
            let u = one - two * m;
            let s1 = a2 * u * u - two * (m - one) * m;
            let t1 = a * u * sqrt0(a2 * u * u - dd(4.0) * (m - one) * m);
            let roots = sqrt0(s1 - t1) + sqrt0(s1 + t1);
            match measure {
                MeasureKind::GeometricLike => (two * sqrt0(roots / sqrt2 + one) - two * sqrt0(a + one)) / (two * sqrt2),
                MeasureKind::Geometric => (sqrt2 * roots - two * a) / dd(4.0),
            }
        }
        NoiseKind::PhaseDamping(_) => {
            let n = x;
            let s2 = n - a2 * (n - two);
            let t2 = two * sqrt0(a2 * a2 * (-n) + a2 * n + a2 * a2);
            match measure {
                MeasureKind::GeometricLike => {
                    (sqrt0(sqrt0(s2 - t2) + sqrt0(s2 + t2) + two) - sqrt2 * sqrt0(a + one)) / two
                }
                MeasureKind::Geometric => -a / two + sqrt0(s2 - t2) / dd(4.0) + sqrt0(s2 + t2) / dd(4.0),
            }
        }
        NoiseKind::AmplitudeDamping(_) => {
            let p = x;
            let s3 = a2 * (p - two) * (p - one) - two * a * (p - one) * p + p * p + p;
            let w = a * (-p) + a + p;
            let t3 = two * sqrt0((p - a2 * (p - one)) * w * w);
            match measure {
                MeasureKind::GeometricLike => {
                    (sqrt0(sqrt0(s3 - t3) + sqrt0(s3 + t3) + two) - sqrt2 * sqrt0(a + one)) / two
                }
                MeasureKind::Geometric => (-two * a + sqrt0(s3 - t3) + sqrt0(s3 + t3)) / dd(4.0),
            }
        }
    };
    Ok(value.hi() + value.lo())
}

/// `ΔM` by applying the channel to the canonical state and evaluating the
/// mixed-state measure directly.
pub fn decay_simulated(kind: NoiseKind, a: f64, measure: MeasureKind) -> Result<f64> {
    check_witness(a)?;
    let channel = make_noise_channel(kind)?;
    let psi = PureState::canonical(a)?;
    let out = apply(&channel, &psi.density())?;
    Ok(measure_pure(&psi, measure) - measure_mixed(&out, measure)?)
}

/// One point of a decay surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceRow {
    pub a: f64,
    pub parameter: f64,
    pub delta_gl: f64,
    pub delta_g: f64,
}

/// `n × n` grid with `A_i = i/(n-1)` and `x_j = j/(n-1)`, rows ordered with
/// `A` major. The parameter carried by `family` is ignored.
pub fn decay_surface(family: NoiseKind, n: usize) -> Result<Vec<SurfaceRow>> {
    if n < 2 {
        return Err(Error::BadParameter(format!("grid size {n} is below 2")));
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (a, x) = (step(i), step(j));
            let kind = family.with_parameter(x);
            rows.push(SurfaceRow {
                a,
                parameter: x,
                delta_gl: decay_closed_form(kind, a, MeasureKind::GeometricLike)?,
                delta_g: decay_closed_form(kind, a, MeasureKind::Geometric)?,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    const FAMILIES: [NoiseKind; 3] = [
        NoiseKind::BitFlip(0.0),
        NoiseKind::PhaseDamping(0.0),
        NoiseKind::AmplitudeDamping(0.0),
    ];

    #[test]
    fn real_input_has_no_decay() {
        for f in FAMILIES {
            for &x in &[0.0, 0.3, 1.0] {
                for m in MeasureKind::ALL {
                    assert!(decay_closed_form(f.with_parameter(x), 1.0, m).unwrap().abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn full_dephasing_of_maximally_imaginary_state() {
        let pd = NoiseKind::PhaseDamping(1.0);
        let gl = decay_closed_form(pd, 0.0, MeasureKind::GeometricLike).unwrap();
        assert!((gl - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-15);
        assert!((decay_closed_form(pd, 0.0, MeasureKind::Geometric).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_parameters_have_no_decay() {
        for kind in [
            NoiseKind::BitFlip(1.0),
            NoiseKind::PhaseDamping(0.0),
            NoiseKind::AmplitudeDamping(0.0),
        ] {
            for &a in &[0.0, 0.4, 0.9] {
                for m in MeasureKind::ALL {
                    assert!(decay_simulated(kind, a, m).unwrap().abs() < 1e-14);
                    assert!(decay_closed_form(kind, a, m).unwrap().abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_simulation_on_coarse_grid() {
        for f in FAMILIES {
            for i in 0..=20 {
                for j in 0..=20 {
                    let (a, x) = (i as f64 / 20.0, j as f64 / 20.0);
                    for m in MeasureKind::ALL {
                        let k = f.with_parameter(x);
                        let c = decay_closed_form(k, a, m).unwrap();
                        let s = decay_simulated(k, a, m).unwrap();
                        assert!((c - s).abs() < 1e-9, "{k:?} A={a} {m:?}: {c} vs {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn surface_layout() {
        let rows = decay_surface(NoiseKind::BitFlip(0.0), 2).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[1].a, rows[1].parameter), (0.0, 1.0));
        let corner = rows[3];
        assert_eq!((corner.a, corner.parameter), (1.0, 1.0));
        assert!(corner.delta_gl.abs() < 1e-15 && corner.delta_g.abs() < 1e-15);
        assert!(decay_surface(NoiseKind::BitFlip(0.0), 1).is_err());
    }

    #[test]
    fn out_of_range_inputs() {
        assert!(decay_closed_form(NoiseKind::PhaseDamping(0.5), 1.2, MeasureKind::Geometric).is_err());
        assert!(decay_simulated(NoiseKind::BitFlip(-0.5), 0.5, MeasureKind::Geometric).is_err());
    }
}
