//! Exact super-derivations and local super-derivations of finite-dimensional
//! Lie superalgebras given by structure constants.
//!
//! All arithmetic is over the rationals. Every structure constant in scope is
//! rational, and the dimension of the solution space of a rational linear
//! system does not change under field extension, so the dimensions computed
//! here are the dimensions over the complex numbers as well.

pub mod derivations;
pub mod exactla;
pub mod exec;
pub mod format;
pub mod localder;
pub mod scalar;
pub mod superalg;

pub use exactla::{ExactError, Matrix, Subspace};
pub use exec::Exec;
pub use scalar::Scalar;
pub use superalg::{catalog, Element, Parity, SuperAlgebra};
