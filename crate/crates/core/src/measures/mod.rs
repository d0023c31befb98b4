//! Geometric imaginarity `M_g` and geometric-like imaginarity `M_gl`.
//!
//! For a pure state with witness `A`:
//!
//! * `M_g = (1 - A) / 2`
//! * `M_gl = 1 - √((1 + A) / 2)`
//!
//! Mixed states use the root fidelity `r = √F(ρ, ρᵀ)` in place of `A`, which
//! is the value of the convex roof of either pure-state formula.

mod decompose;
mod roof;

pub use decompose::{equalized_decomposition, optimal_decomposition};
pub use roof::{convex_roof_oracle, RoofResult, DEFAULT_RESTARTS};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::root_fidelity;
use crate::states::{DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    Geometric,
    GeometricLike,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 2] = [MeasureKind::GeometricLike, MeasureKind::Geometric];

    /// Upper end of the range, reached by maximally imaginary states.
    pub fn max_value(self) -> f64 {
        match self {
            MeasureKind::Geometric => 0.5,
            MeasureKind::GeometricLike => 1.0 - std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            MeasureKind::Geometric => "g",
            MeasureKind::GeometricLike => "gl",
        }
    }
}

/// Measure as a function of the witness (or of the root fidelity with the
/// transpose). The `M_gl` branch is written as `M_g / (1 + √(1 - M_g))`,
/// which equals `1 - √((1 + A)/2)` without cancellation near `A = 1`.
pub fn measure_from_witness(a: f64, kind: MeasureKind) -> f64 {
    let a = a.clamp(0.0, 1.0);
    let mg = (1.0 - a) / 2.0;
    match kind {
        MeasureKind::Geometric => mg,
        MeasureKind::GeometricLike => mg / (1.0 + (1.0 - mg).sqrt()),
    }
}

pub fn measure_pure(psi: &PureState, kind: MeasureKind) -> f64 {
    measure_from_witness(psi.witness(), kind)
}

pub fn measure_mixed(rho: &DensityMatrix, kind: MeasureKind) -> Result<f64> {
    Ok(measure_from_witness(transpose_fidelity(rho)?, kind))
}

/// `√F(ρ, ρᵀ)`, equal to 1 exactly for real states.
pub fn transpose_fidelity(rho: &DensityMatrix) -> Result<f64> {
    root_fidelity(rho, &rho.transpose())
}

/// `M_gl = 1 - √(1 - M_g)`, exact for both closed forms.
pub fn geometric_like_from_geometric(mg: f64) -> f64 {
    mg / (1.0 + (1.0 - mg).sqrt())
}
