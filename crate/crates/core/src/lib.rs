//! Exact-arithmetic certificates for Morse–Bott inequalities on compact
//! manifolds with boundary.
//!
//! Critical data goes in as a [`descriptor::MorseBottDescriptor`]; the
//! [`counting`] module turns it into counting polynomials and certifies the
//! `(1 + t)` factorizations, [`morsify`] replays them through a perturbed Morse
//! function, and [`flow`] audits Morse complexes built from supplied flow data.

pub mod catalog;
pub mod cli;
pub mod counting;
pub mod descriptor;
pub mod error;
pub mod flow;
pub mod homology;
pub mod intpoly;
pub mod morsify;

pub use error::{Error, Result};
pub use intpoly::IntPolynomial;
