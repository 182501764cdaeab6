//! Numerical Kähler and hyperkähler geometry.
//!
//! Everything is evaluated pointwise with second-order forward-mode jets
//! ([`numcore::Jet2`]) and cross-checked against central differences.

pub mod error;
pub mod geometry;
pub mod kahler;
pub mod mechanics;
pub mod models;
pub mod numcore;
pub mod reduction;

pub use error::{Error, Result};
