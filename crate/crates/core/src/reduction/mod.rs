//! Forms, moment maps, pullbacks and `U(1)` quotients.

mod embedding;
mod forms;
mod quotient;

pub use embedding::{
    pullback_form, pullback_form_field, pullback_metric, pullback_metric_field, EmbeddingMap, Pullback,
};
pub use forms::{contract, contract_field, exterior_derivative, recover_moment_map, FormField, FormValue};
pub use quotient::{quotient_form, quotient_metric, ReductionSpec, FIBER_TOL};
