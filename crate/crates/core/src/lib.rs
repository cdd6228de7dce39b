//! Core library for constructing translation surfaces from Thurston-Veech
//! combinatorial data (permutation pairs plus Dehn twist vectors), computing
//! their saddle-connection and virtual-triangle spectra with certified
//! arithmetic, evaluating quantitative bounds, and enumerating lattice-surface
//! candidates at desk scale.
//!
//! The crate is `no_std` + `alloc`; all IO, file formats and the CLI live in
//! the companion `flatlatt-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod catalog;
pub mod combinat;
pub mod construct;
pub mod error;
pub mod geom;
pub mod numeric;
pub mod sweep;

pub use error::{Error, Result};
pub use numeric::{Precision, Scalar};
