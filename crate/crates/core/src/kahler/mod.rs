//! Complex charts: Hermitian metrics and Kähler potentials, `Sp(n)` and its
//! cosets, the heavenly condition, complex-structure triples and the spin
//! connection trace.

mod heavenly;
mod hermitian;
mod spin;
mod symplectic;
mod triple;

pub use heavenly::{
    heavenly_check, heavenly_sweep, proportionality, sp_algebra_residual, HeavenlySweep, Proportionality,
};
pub use hermitian::{
    metric_from_potential, wirtinger_hessian, ComplexChart, HermitianJet, HermitianMetricField,
};
pub use spin::{spin_connection_trace, SpinTrace};
pub use symplectic::{coset_metric, hermitian_exp, sp_generators, SymplecticMatrix};
pub use triple::{triple_at, triple_forms, Triple, TripleValue};
