//! Radial and angular kinetic energies of D-dimensional central-field states
//! in the wavefunction picture and in the Weyl-Wigner phase-space picture.
//!
//! The crate is split along the two pictures:
//!
//! - [`moyal`] is an exact (rational, symbolic in ħ) Weyl-correspondence
//!   engine. It builds operators such as `L̂²`, `T̂_rad` and `p̂_r` as ordered
//!   operator words and maps them to phase space with the Moyal star product.
//! - [`states`], [`wigner`] and [`phasespace`] evaluate expectation values
//!   numerically: operator-picture averages by radial quadrature, phase-space
//!   averages by integrating against analytic Wigner functions of Gaussian
//!   superpositions.
//! - [`hydrofit`] builds Gaussian expansions of the D-dimensional hydrogen
//!   ground state by the Rayleigh-Ritz method.
//!
//! Units are ħ = M = 1 throughout the numeric modules.

pub mod cli;
pub mod error;
pub mod geometry;
pub mod hydrofit;
pub mod moyal;
pub mod phasespace;
pub mod quadrature;
pub mod states;
pub mod wigner;

pub use error::{Error, Result};
pub use geometry::Dimension;
