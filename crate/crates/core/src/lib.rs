//! Effective one-electron pseudopotentials for n-electron atoms, solved in a
//! B-spline Galerkin basis and checked against the exact Coulomb spectrum.

pub mod banded;
pub mod bspline;
pub mod cli;
pub mod compare;
pub mod config;
pub mod eigen;
pub mod error;
pub mod model;
pub mod operators;
pub mod reference;
pub mod spectra;
pub mod tridiag;
pub mod units;

pub use error::{Error, Result};
pub use model::{AtomSpec, PseudopotentialModel};
pub use spectra::{BasisConfig, LabeledState, RadialSolver};
pub use units::UnitSystem;
