//! Spin tomography for two qubits and a spin-3/2 qudit.
//!
//! The same 4×4 density matrix is read either as a two-qubit state or as a
//! single spin-3/2 state; tomograms in both pictures, the kernels connecting
//! them and the correlation/steering diagnostics are built on top of that.

pub mod error;
pub mod frames;
pub mod kernel;
pub mod matrix;
pub mod selftest;
pub mod steering;
pub mod su2;

pub use error::{Error, Result};
pub use frames::{
    make_grid, FramePoint, FramePoint2Q, FramePointQudit, QuadratureGrid, QuditFrame,
    Representation, TomogramTable, TwoQubitFrame,
};
pub use matrix::{
    kron, random_density, validate_density, werner, Basis, ComplexMatrix, DensityMatrix, C64,
};
pub use su2::{Direction, EulerAngles, HalfInt};
