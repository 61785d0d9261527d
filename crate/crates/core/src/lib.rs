//! Hurwitz quaternion lattices and lattice sphere-packing bounds.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod error;
pub mod hlattice;
pub mod linalg;
pub mod minima;
pub mod quat;
pub mod real;
pub mod verify;

pub use error::{Error, Result};
pub use quat::{HurwitzInteger, Quaternion};
pub use real::{Precision, Real};
