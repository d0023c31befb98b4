//! Kraus channels, real operations and the qubit noise families.

mod decay;

pub use decay::{decay_closed_form, decay_simulated, decay_surface, SurfaceRow};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, psd_factor, sqrt_psd, ComplexMatrix};
use crate::sampling::{random_real_isometry, seeded};
use crate::states::{validate_density, DensityMatrix};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Completeness {
    /// `Σ K†K = I`
    TracePreserving,
    /// `Σ K†K ⪯ I`, a filter.
    SubNormalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
    completeness: Completeness,
}

impl KrausChannel {
    /// Checks the operator dimensions and the claimed completeness.
    pub fn new(kraus_ops: Vec<ComplexMatrix>, completeness: Completeness) -> Result<Self> {
        let Some(first) = kraus_ops.first() else {
            return Err(Error::NotTracePreserving);
        };
        let dim = first.dim();
        if let Some(k) = kraus_ops.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, k.dim()));
        }
        let sum = gram_sum(&kraus_ops, dim);
        let ok = match completeness {
            Completeness::TracePreserving => sum.max_abs_diff(&ComplexMatrix::identity(dim)) <= tol::TRACE,
            Completeness::SubNormalized => eig_hermitian(&sum.hermitian_part())?.eigenvalues[0] <= 1.0 + tol::TRACE,
        };
        if !ok {
            return Err(Error::NotTracePreserving);
        }
        Ok(Self {
            dim,
            kraus_ops,
            completeness,
        })
    }

    pub fn trace_preserving(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(kraus_ops, Completeness::TracePreserving)
    }

    pub fn sub_normalized(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(kraus_ops, Completeness::SubNormalized)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    /// Trace-preserving channel with `√(I - Σ K†K)` appended, or `self` when
    /// already complete.
    pub fn completed(&self) -> Result<KrausChannel> {
        if self.completeness == Completeness::TracePreserving {
            return Ok(self.clone());
        }
        let rest = &ComplexMatrix::identity(self.dim) - &gram_sum(&self.kraus_ops, self.dim);
        let mut ops = self.kraus_ops.clone();
        ops.push(sqrt_psd(&rest.hermitian_part())?);
        KrausChannel::trace_preserving(ops)
    }
}

fn gram_sum(ops: &[ComplexMatrix], dim: usize) -> ComplexMatrix {
    ops.iter()
        .fold(ComplexMatrix::zeros(dim), |acc, k| &acc + &(&k.adjoint() * k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseKind {
    BitFlip(f64),
    PhaseDamping(f64),
    AmplitudeDamping(f64),
}

impl NoiseKind {
    pub fn parameter(self) -> f64 {
        match self {
            NoiseKind::BitFlip(x) | NoiseKind::PhaseDamping(x) | NoiseKind::AmplitudeDamping(x) => x,
        }
    }

    /// Same family with another parameter.
    pub fn with_parameter(self, x: f64) -> Self {
        match self {
            NoiseKind::BitFlip(_) => NoiseKind::BitFlip(x),
            NoiseKind::PhaseDamping(_) => NoiseKind::PhaseDamping(x),
            NoiseKind::AmplitudeDamping(_) => NoiseKind::AmplitudeDamping(x),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            NoiseKind::BitFlip(_) => "bf",
            NoiseKind::PhaseDamping(_) => "pd",
            NoiseKind::AmplitudeDamping(_) => "ad",
        }
    }

    pub(crate) fn check(self) -> Result<f64> {
        let x = self.parameter();
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::BadParameter(format!(
                "{} parameter {x} outside [0, 1]",
                self.short_name()
            )));
        }
        Ok(x)
    }
}

/// The two-operator qubit channel of the given family.
///
/// * bit flip: `√m I` and `√(1-m) X`
/// * phase damping: `diag(1, √(1-n))` and `diag(0, √n)`
/// * amplitude damping: `diag(1, √(1-p))` and `√p |0⟩⟨1|`
pub fn make_noise_channel(kind: NoiseKind) -> Result<KrausChannel> {
    let x = kind.check()?;
    let (a, b) = (x.sqrt(), (1.0 - x).sqrt());
    let ops = match kind {
        NoiseKind::BitFlip(_) => vec![
            ComplexMatrix::from_real_rows(&[&[a, 0.0], &[0.0, a]]),
            ComplexMatrix::from_real_rows(&[&[0.0, b], &[b, 0.0]]),
        ],
        NoiseKind::PhaseDamping(_) => vec![
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, b]]),
            ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, a]]),
        ],
        NoiseKind::AmplitudeDamping(_) => vec![
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, b]]),
            ComplexMatrix::from_real_rows(&[&[0.0, a], &[0.0, 0.0]]),
        ],
    };
    KrausChannel::trace_preserving(ops)
}

/// `Σ_l K_l ρ K_l†`, validated.
pub fn apply(channel: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if channel.dim != rho.dim() {
        return Err(Error::DimensionMismatch(channel.dim, rho.dim()));
    }
    if channel.completeness != Completeness::TracePreserving {
        return Err(Error::NotTracePreserving);
    }
    let out = channel
        .kraus_ops
        .iter()
        .fold(ComplexMatrix::zeros(rho.dim()), |acc, k| {
            &acc + &k.sandwich(rho.matrix())
        });
    validate_density(&out.hermitian_part())
}

/// Real operations have real Kraus operators.
pub fn is_real_operation(channel: &KrausChannel, tol: f64) -> bool {
    channel.kraus_ops.iter().all(|k| k.max_abs_imag() <= tol)
}

/// Branches `(p_j, K_j ρ K_j† / p_j)`, omitting `p_j` below
/// [`tol::ZERO_WEIGHT`].
///
/// Branch states are assembled as `Y Y† / p` with `Y = K X` and `ρ = X X†`,
/// so they stay positive semidefinite even for tiny `p_j`.
pub fn apply_stochastic(channel: &KrausChannel, rho: &DensityMatrix) -> Result<Vec<(f64, DensityMatrix)>> {
    if channel.dim != rho.dim() {
        return Err(Error::DimensionMismatch(channel.dim, rho.dim()));
    }
    let x = psd_factor(rho.matrix())?;
    let mut out = Vec::new();
    for k in &channel.kraus_ops {
        let y: Vec<Vec<C64>> = x.iter().map(|col| k.mul_vec(col)).collect();
        let p: f64 = y.iter().map(|v| crate::numerics::norm_sqr(v)).sum();
        if p < tol::ZERO_WEIGHT {
            continue;
        }
        let m = y
            .iter()
            .fold(ComplexMatrix::zeros(rho.dim()), |acc, v| {
                &acc + &ComplexMatrix::outer(v)
            })
            .scale_real(1.0 / p);
        out.push((p, validate_density(&m)?));
    }
    Ok(out)
}

/// Real trace-preserving channel from a random real isometry of shape
/// `(dim · n_kraus) × dim`; block `l` of rows is `K_l`.
pub fn random_real_channel(dim: usize, n_kraus: usize, seed: u64) -> Result<KrausChannel> {
    if dim == 0 || n_kraus == 0 {
        return Err(Error::BadParameter("dim and n_kraus must be positive".into()));
    }
    let cols = random_real_isometry(&mut seeded(seed), dim * n_kraus, dim);
    let ops = (0..n_kraus)
        .map(|l| {
            let mut k = ComplexMatrix::zeros(dim);
            for i in 0..dim {
                for (j, col) in cols.iter().enumerate() {
                    k[(i, j)] = C64::new(col[l * dim + i], 0.0);
                }
            }
            k
        })
        .collect();
    KrausChannel::trace_preserving(ops)
}
