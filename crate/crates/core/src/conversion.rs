//! Conversion probabilities under real operations, fidelity balls and
//! stochastic-approximate conversion.
//!
//! Angles follow `M_gl(|θ⟩) = 1 - cos θ` for `|θ⟩ = cos θ|0⟩ + i sin θ|1⟩`:
//! a state with geometric-like imaginarity `M` sits at angle
//! `α = arccos(1 - M) ∈ [0, π/4]`, and a fidelity threshold `f` is a Bures
//! angle `k = arccos √f`.

use std::f64::consts::FRAC_PI_4;

use rand::Rng;

use crate::channels::{apply_stochastic, Completeness, KrausChannel};
use crate::error::{Error, Result};
use crate::measures::{equalized_decomposition, measure_mixed, measure_pure, MeasureKind};
use crate::numerics::{root_fidelity, ComplexMatrix};
use crate::sampling::{complex_gaussian, random_density, random_real_density};
use crate::states::{canonical_form, DensityMatrix, PureState};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Reachable with probability one.
    Deterministic,
    /// Needs a probabilistic filter.
    Filtered,
}

#[derive(Debug, Clone)]
pub struct ConversionResult {
    pub probability: f64,
    pub branch: Branch,
    /// Filter on the canonical qubit forms, when one is known.
    pub protocol: Option<KrausChannel>,
    /// The target has (numerically) zero imaginarity, so the probability is
    /// one by convention.
    pub target_is_free: bool,
}

impl ConversionResult {
    fn certain(target_is_free: bool) -> Self {
        Self {
            probability: 1.0,
            branch: Branch::Deterministic,
            protocol: None,
            target_is_free,
        }
    }

    fn ratio(numerator: f64, denominator: f64) -> Self {
        if denominator <= tol::FREE_MEASURE {
            return Self::certain(true);
        }
        let p = numerator / denominator;
        if p >= 1.0 {
            return Self::certain(false);
        }
        Self {
            probability: p.max(0.0),
            branch: Branch::Filtered,
            protocol: None,
            target_is_free: false,
        }
    }
}

/// `α = arccos(1 - M)`, written as `2 asin √(M/2)` for accuracy near zero.
pub fn imaginarity_angle(m_gl: f64) -> f64 {
    2.0 * (m_gl.max(0.0) / 2.0).sqrt().min(1.0).asin()
}

/// `k = arccos √f`, written as `asin √(1 - f)`.
pub fn fidelity_angle(f: f64) -> f64 {
    (1.0 - f).max(0.0).sqrt().min(1.0).asin()
}

/// `1 - cos x` without cancellation.
fn one_minus_cos(x: f64) -> f64 {
    let h = (0.5 * x).sin();
    2.0 * h * h
}

fn check_fidelity(f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::BadFidelity(f));
    }
    Ok(f)
}

/// `min{M(ρ)/M(σ), 1}`, the monotonicity bound on any conversion probability.
pub fn conversion_bound(rho: &DensityMatrix, sigma: &DensityMatrix, kind: MeasureKind) -> Result<ConversionResult> {
    Ok(ConversionResult::ratio(
        measure_mixed(rho, kind)?,
        measure_mixed(sigma, kind)?,
    ))
}

/// `min{(√2 - √(1 + A_ψ)) / (√2 - √(1 + A_φ)), 1}`.
///
/// When the source has the larger witness, the filter from
/// [`filter_protocol`] is attached.
pub fn pure_to_pure_probability(psi: &PureState, phi: &PureState) -> Result<ConversionResult> {
    let mut out = ConversionResult::ratio(
        measure_pure(psi, MeasureKind::GeometricLike),
        measure_pure(phi, MeasureKind::GeometricLike),
    );
    if out.branch == Branch::Filtered {
        out.protocol = Some(filter_protocol(psi.witness(), phi.witness())?.channel);
    }
    Ok(out)
}

/// Diagonal filter `K₀ = diag(a, 1)` acting on the canonical qubit forms.
#[derive(Debug, Clone)]
pub struct FilterProtocol {
    pub a: f64,
    /// Probability of the `K₀` branch.
    pub probability: f64,
    /// Witness of the `K₀` branch output.
    pub output_witness: f64,
    /// `{K₀}` as a sub-normalized channel; [`KrausChannel::completed`]
    /// appends `K₁ = √(I - K₀²)`.
    pub channel: KrausChannel,
}

/// Filter taking the canonical state of witness `a_source` to that of
/// `a_target ≤ a_source`. `a` is chosen so the kept branch has exactly the
/// target witness, `a² = (1 - A_s)(1 + A_t) / ((1 + A_s)(1 - A_t))`, and the
/// branch probability and witness are then obtained by applying the filter.
pub fn filter_protocol(a_source: f64, a_target: f64) -> Result<FilterProtocol> {
    for w in [a_source, a_target] {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::BadParameter(format!("witness {w} outside [0, 1]")));
        }
    }
    if a_source < a_target {
        return Err(Error::BadRegime {
            source_witness: a_source,
            target_witness: a_target,
        });
    }
    let a = if a_target >= 1.0 {
        1.0
    } else {
        (((1.0 - a_source) * (1.0 + a_target)) / ((1.0 + a_source) * (1.0 - a_target))).sqrt()
    };
    let channel = KrausChannel::new(vec![ComplexMatrix::diag(&[a, 1.0])], Completeness::SubNormalized)?;
    let source = PureState::canonical(a_source)?.density();
    let branches = apply_stochastic(&channel, &source)?;
    let (probability, output_witness) = match branches.first() {
        Some((p, rho)) => {
            let out = rho.as_pure(1e-9).ok_or(Error::NotPsd(0.0))?;
            (*p, out.witness())
        }
        None => (0.0, 1.0),
    };
    Ok(FilterProtocol {
        a,
        probability,
        output_witness,
        channel,
    })
}

/// `min{M_gl(ψ) / M_gl(ρ), 1}`.
pub fn pure_to_mixed_probability(psi: &PureState, rho: &DensityMatrix) -> Result<ConversionResult> {
    Ok(ConversionResult::ratio(
        measure_pure(psi, MeasureKind::GeometricLike),
        measure_mixed(rho, MeasureKind::GeometricLike)?,
    ))
}

/// States `ρ'` with `F(ρ, ρ') ≥ f`.
#[derive(Debug, Clone)]
pub struct FidelityBall {
    pub center: DensityMatrix,
    pub f: f64,
}

impl FidelityBall {
    pub fn new(center: DensityMatrix, f: f64) -> Result<Self> {
        Ok(Self {
            center,
            f: check_fidelity(f)?,
        })
    }

    pub fn contains(&self, rho: &DensityMatrix) -> Result<bool> {
        let r = root_fidelity(&self.center, rho)?;
        Ok(r * r >= self.f)
    }
}

/// Minimum of `M_gl` over the ball, `1 - cos(max{α - k, 0})`, with a state
/// attaining it.
///
/// The witness state rotates every member `cos α|a_i⟩ + i sin α|a_i⊥⟩` of an
/// equalized decomposition to `cos β|a_i⟩ + i sin β|a_i⊥⟩` with
/// `β = max{α - k, 0}`, reweighted by the member overlaps.
pub fn min_mgl_fidelity_ball(ball: &FidelityBall) -> Result<(f64, DensityMatrix)> {
    check_fidelity(ball.f)?;
    let m = measure_mixed(&ball.center, MeasureKind::GeometricLike)?;
    let beta = (imaginarity_angle(m) - fidelity_angle(ball.f)).max(0.0);
    let value = one_minus_cos(beta);
    if ball.center.dim() < 2 {
        return Ok((value, ball.center.clone()));
    }
    let ensemble = equalized_decomposition(&ball.center)?;
    let mut total = 0.0;
    let mut acc = ComplexMatrix::zeros(ball.center.dim());
    for (p, psi) in ensemble.weights.iter().zip(&ensemble.members) {
        let phi = canonical_form(psi)?.with_angle(beta);
        let q = p * psi.fidelity(&phi);
        total += q;
        acc = &acc + &ComplexMatrix::outer(phi.amplitudes()).scale_real(q);
    }
    Ok((value, DensityMatrix::new(acc.scale_real(1.0 / total))?))
}

/// Maximum of `M_gl` over the ball around a pure state,
/// `1 - cos(min{α + k, π/4})`, with the pure state attaining it.
pub fn max_mgl_fidelity_ball(psi: &PureState, f: f64) -> Result<(f64, PureState)> {
    check_fidelity(f)?;
    if psi.dim() < 2 {
        return Err(Error::DegenerateDimension);
    }
    let alpha = imaginarity_angle(measure_pure(psi, MeasureKind::GeometricLike));
    let theta = (alpha + fidelity_angle(f)).min(FRAC_PI_4);
    Ok((one_minus_cos(theta), canonical_form(psi)?.with_angle(theta)))
}

/// Largest probability of reaching some state within fidelity `f` of `ρ`:
/// one if `α_ψ ≥ α_ρ - k`, else `M_gl(ψ) / (1 - cos(α_ρ - k))`.
pub fn stochastic_approx_probability(psi: &PureState, rho: &DensityMatrix, f: f64) -> Result<ConversionResult> {
    check_fidelity(f)?;
    let m_psi = measure_pure(psi, MeasureKind::GeometricLike);
    let target_angle = imaginarity_angle(measure_mixed(rho, MeasureKind::GeometricLike)?) - fidelity_angle(f);
    if target_angle <= 0.0 {
        return Ok(ConversionResult::certain(true));
    }
    if imaginarity_angle(m_psi) - target_angle >= 0.0 {
        return Ok(ConversionResult::certain(false));
    }
    Ok(ConversionResult::ratio(m_psi, one_minus_cos(target_angle)))
}

/// Draws states from the fidelity ball by rejection.
///
/// Proposals perturb the center as `K ρ K† / Tr` with `K = I + εG` (`G`
/// complex Gaussian), or mix it with a random state or a random real state
/// at weight up to `ε`. The radius `ε` adapts to keep roughly a third of the
/// proposals inside the ball.
pub fn sample_fidelity_ball(ball: &FidelityBall, count: usize, rng: &mut impl Rng) -> Result<Vec<DensityMatrix>> {
    let d = ball.center.dim();
    let mut eps = (1.0 - ball.f).sqrt().max(1e-3);
    let mut out = Vec::with_capacity(count);
    let (mut tried, mut hit) = (0usize, 0usize);
    while out.len() < count {
        let proposal = match rng.random_range(0..3) {
            0 => {
                let mut k = ComplexMatrix::identity(d);
                for i in 0..d {
                    for j in 0..d {
                        k[(i, j)] += complex_gaussian(rng) * eps;
                    }
                }
                let m = k.sandwich(ball.center.matrix()).hermitian_part();
                let t = m.trace().re;
                if t <= 0.0 {
                    continue;
                }
                DensityMatrix::new(m.scale_real(1.0 / t))?
            }
            kind => {
                let other = if kind == 1 {
                    random_density(rng, d)
                } else {
                    random_real_density(rng, d)
                };
                let t = rng.random::<f64>() * eps.min(1.0);
                let m = &ball.center.matrix().scale_real(1.0 - t) + &other.matrix().scale_real(t);
                DensityMatrix::new(m)?
            }
        };
        tried += 1;
        if ball.contains(&proposal)? {
            hit += 1;
            out.push(proposal);
        }
        if tried % 64 == 0 {
            let rate = hit as f64 / tried as f64;
            eps *= if rate > 0.4 {
                1.3
            } else if rate < 0.2 {
                0.7
            } else {
                1.0
            };
            eps = eps.clamp(1e-6, 4.0);
            tried = 0;
            hit = 0;
        }
    }
    Ok(out)
}

/// Success probability and output fidelity of a filter applied to `ψ`,
/// compared with `ρ`: `(Σ_j Tr K_j ψ K_j†, F(Φ(ψ)/Tr, ρ))`.
pub fn filter_outcome(channel: &KrausChannel, psi: &PureState, rho: &DensityMatrix) -> Result<Option<(f64, f64)>> {
    let branches = apply_stochastic(channel, &psi.density())?;
    let p: f64 = branches.iter().map(|b| b.0).sum();
    if p < tol::ZERO_WEIGHT {
        return Ok(None);
    }
    let mix = branches.iter().fold(ComplexMatrix::zeros(psi.dim()), |acc, (q, s)| {
        &acc + &s.matrix().scale_real(q / p)
    });
    let r = root_fidelity(&DensityMatrix::new(mix)?, rho)?;
    Ok(Some((p, r * r)))
}
