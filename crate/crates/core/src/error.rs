use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A field produced NaN or infinity. `component` is the offending
    /// gradient/Hessian coordinate index, `None` when the value itself is bad.
    #[error("non-finite evaluation of `{field}` (coordinate {component:?})")]
    NonFinite {
        field: String,
        component: Option<usize>,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid sample spec: {0}")]
    InvalidSpec(String),

    #[error("finite-difference stencil hits excluded locus `{predicate}`")]
    StencilExcluded { predicate: String },

    #[error("sampling exhausted: {accepted}/{requested} points after {attempts} candidates")]
    SamplingExhausted {
        requested: usize,
        accepted: usize,
        attempts: usize,
    },

    /// Cholesky / linear solve failure (metric not positive-definite or singular).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integral did not converge (error estimate {estimate:e})")]
    Divergent { estimate: f64 },

    #[error("metric is not rotationally symmetric in the angular coordinate (deviation {deviation:e})")]
    NotRotational { deviation: f64 },

    #[error("1-form is not closed along the integration path (residual {residual:e})")]
    NotExact { residual: f64 },

    #[error("degenerate fiber: g(V,V) = {norm:e}")]
    DegenerateFiber { norm: f64 },

    #[error("fiber components of the form do not cancel (max residual {residual:e})")]
    Obstruction { residual: f64 },

    #[error("heavenly condition violated: ‖M − CΩ‖ = {residual:e} (C ≈ {c})")]
    ConditionViolated { c: f64, residual: f64 },

    #[error("heavenly constant is not positive: C = {c}")]
    NonPositive { c: f64 },

    #[error("degenerate Lagrangian: kinetic matrix is singular")]
    DegenerateLagrangian,

    #[error("coordinate {index} is not cyclic: {{p, H}} residual {residual:e}")]
    InvalidConstraint { index: usize, residual: f64 },

    #[error("point too close to the monopole gauge string or origin")]
    SingularGauge,

    #[error("embedding has no Jacobian field")]
    MissingJacobian,

    #[error("internal consistency: {0}")]
    Internal(String),
}
