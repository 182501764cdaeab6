//! Real Riemannian geometry on coordinate charts: Levi-Civita connection,
//! covariant derivatives, Killing checks, curvature and the Gauss–Bonnet
//! integral.

mod connection;
mod curvature;
mod metric;

pub use connection::{christoffel, covariant_derivative_02, killing_deviation, Array3, Christoffel};
pub use curvature::{
    euler_characteristic, gaussian_curvature, gaussian_curvature_polar, riemann, POLAR_CORE, scalar_curvature, RadialDomain, Riemann,
};
pub use metric::{MetricField, MetricJet, VectorField};
