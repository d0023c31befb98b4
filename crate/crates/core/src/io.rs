//! JSON state files.
//!
//! ```json
//! {"dim": 2, "kind": "pure", "data": [[0.7071, 0.0], [0.0, 0.7071]]}
//! ```
//!
//! `data` holds `[re, im]` pairs: the amplitudes of a pure state, or the
//! row-major entries of a density matrix. Inputs may drift from unit norm
//! (or trace) by at most `1e-8`; they are renormalized on load.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{norm_sqr, ComplexMatrix};
use crate::states::{validate_density, DensityMatrix, Ensemble, PureState};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

/// A parsed state file.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Density(DensityMatrix),
}

impl State {
    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(psi) => psi.density(),
            State::Density(rho) => rho.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            State::Pure(psi) => psi.dim(),
            State::Density(rho) => rho.dim(),
        }
    }
}

fn to_complex(data: &[[f64; 2]]) -> Vec<C64> {
    data.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn to_pairs(data: &[C64]) -> Vec<[f64; 2]> {
    data.iter().map(|z| [z.re, z.im]).collect()
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            dim: psi.dim(),
            kind: StateKind::Pure,
            data: to_pairs(psi.amplitudes()),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self {
            dim: rho.dim(),
            kind: StateKind::Density,
            data: to_pairs(rho.matrix().as_slice()),
        }
    }

    pub fn into_state(self) -> Result<State> {
        if self.dim == 0 {
            return Err(Error::Format("dim must be positive".into()));
        }
        let values = to_complex(&self.data);
        match self.kind {
            StateKind::Pure => {
                if values.len() != self.dim {
                    return Err(Error::Format(format!(
                        "pure state of dim {} needs {} amplitudes, found {}",
                        self.dim,
                        self.dim,
                        values.len()
                    )));
                }
                let norm = norm_sqr(&values).sqrt();
                if (norm - 1.0).abs() > tol::PARSE_NORM {
                    return Err(Error::NotNormalized(norm));
                }
                Ok(State::Pure(PureState::normalized(values)?))
            }
            StateKind::Density => {
                let m = ComplexMatrix::from_row_major(self.dim, values)?;
                let trace = m.trace().re;
                if (trace - 1.0).abs() > tol::PARSE_NORM {
                    return Err(Error::BadTrace(trace));
                }
                Ok(State::Density(validate_density(&m.scale_real(1.0 / trace))?))
            }
        }
    }
}

pub fn parse_state(json: &str) -> Result<State> {
    let file: StateFile = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    file.into_state()
}

pub fn pure_to_json(psi: &PureState) -> String {
    serde_json::to_string(&StateFile::from_pure(psi)).expect("serializable")
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&StateFile::from_density(rho)).expect("serializable")
}

/// Ensemble as `{"weights": [...], "members": [<pure state objects>]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub weights: Vec<f64>,
    pub members: Vec<StateFile>,
}

impl EnsembleFile {
    pub fn from_ensemble(ensemble: &Ensemble) -> Self {
        Self {
            weights: ensemble.weights.clone(),
            members: ensemble.members.iter().map(StateFile::from_pure).collect(),
        }
    }

    pub fn into_ensemble(self) -> Result<Ensemble> {
        if self.weights.len() != self.members.len() || self.weights.is_empty() {
            return Err(Error::Format(
                "weights and members must be nonempty and of equal length".into(),
            ));
        }
        let members = self
            .members
            .into_iter()
            .map(|m| match m.into_state()? {
                State::Pure(psi) => Ok(psi),
                State::Density(_) => Err(Error::Format("ensemble members must be pure".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble {
            weights: self.weights,
            members,
        })
    }
}

pub fn ensemble_to_json(ensemble: &Ensemble) -> String {
    serde_json::to_string_pretty(&EnsembleFile::from_ensemble(ensemble)).expect("serializable")
}

pub fn parse_ensemble(json: &str) -> Result<Ensemble> {
    let file: EnsembleFile = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    file.into_ensemble()
}
