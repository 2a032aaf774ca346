//! Local exponents of Diophantine approximation measured at finite height.
//!
//! Everything that decides a minimum or a sign runs on exact integers and
//! outward-rounded dyadic intervals; `f64` is only used to screen candidates.

#![no_std]

extern crate alloc;

pub mod bestapprox;
pub mod bounds;
pub mod config;
pub mod constructions;
pub mod dyadic;
mod error;
pub mod exponents;
pub mod intpoly;
pub mod lattice;
pub mod realnum;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use intpoly::IntPoly;
pub use realnum::{CertifiedReal, NumberSpec};
