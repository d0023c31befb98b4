//! Imaginarity of quantum states: geometric measures, their convex roofs,
//! decay under noise, and state conversion bounds.
//!
//! Every state is finite dimensional and given in a fixed reference basis.
//! A state is free (real) when its density matrix has real entries.

pub mod channels;
pub mod conversion;
pub mod error;
pub mod io;
pub mod measures;
pub mod numerics;
pub mod sampling;
pub mod states;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::ComplexMatrix;
pub use states::{DensityMatrix, Ensemble, PureState};
