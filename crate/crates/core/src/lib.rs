//! Degenerate principal series of the complex symplectic group.
//!
//! Special functions, harmonic polynomials, the SU(2) weight calculus,
//! K-type branching, grid Fourier transforms and the non-standard model,
//! each with the numerical checks that certify its identities.

pub mod cli;
pub mod error;
pub mod ktypes;
pub mod nonstd;
pub mod polyharm;
pub mod specfun;
pub mod su2;
pub mod transforms;

pub use error::{Error, PoleReport, Result};
pub use specfun::{Parameter, Parity};
