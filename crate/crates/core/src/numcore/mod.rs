//! Coordinates, second-order jets, the finite-difference oracle, sampling
//! and quadrature.

mod diff;
mod field;
mod jet;
mod point;
pub mod quadrature;
mod sample;

pub use diff::{evaluate_jet, fd_gradient, fd_oracle, fd_step, Exclusion};
pub use field::{Field, JetFn, ScalarField, ScalarFn};
pub use jet::{sum, Jet2};
pub use point::Point;
pub use sample::{sample_points, SampleSpec};
