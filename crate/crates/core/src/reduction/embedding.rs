use nalgebra::DMatrix;

use super::forms::{check_same_dim, FormField};
use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::numcore::{Field, Jet2, JetFn};

/// Smooth map between charts, optionally with an analytic Jacobian field.
///
/// Pointwise pullbacks only need `map` (its jets give the Jacobian). Pulled-back
/// *fields* need the Jacobian as a jet field of its own, so that their
/// derivatives are exact.
#[derive(Clone, Debug)]
pub struct EmbeddingMap {
    map: Field,
    jacobian: Option<Field>,
}

impl EmbeddingMap {
    pub fn new<F>(name: impl Into<String>, source_dim: usize, target_dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self {
            map: Field::new(name, source_dim, target_dim, f),
            jacobian: None,
        }
    }

    /// `j` returns `∂φ^M/∂x^m` at row-major index `M · source_dim + m`.
    pub fn with_jacobian<F>(mut self, j: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        let (s, t) = (self.source_dim(), self.target_dim());
        self.jacobian = Some(Field::new(format!("D{}", self.map.name()), s, s * t, j));
        self
    }

    /// Affine map `x ↦ A x + b` (Jacobian `A`, row-major `target × source`).
    pub fn affine(name: impl Into<String>, a: DMatrix<f64>, b: Vec<f64>) -> Self {
        let (t, s) = a.shape();
        assert_eq!(b.len(), t);
        let rows: Vec<f64> = a.transpose().as_slice().to_vec();
        let rows_j = rows.clone();
        Self::new(name, s, t, move |x| {
            (0..t)
                .map(|i| {
                    (0..s).fold(Jet2::constant(b[i]), |acc, k| acc + rows[i * s + k] * &x[k])
                })
                .collect()
        })
        .with_jacobian(move |_| Jet2::constants(&rows_j))
    }

    pub fn identity(dim: usize) -> Self {
        Self::affine(format!("id{dim}"), DMatrix::identity(dim, dim), vec![0.0; dim])
    }

    pub fn name(&self) -> &str {
        self.map.name()
    }

    pub fn source_dim(&self) -> usize {
        self.map.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.map.len()
    }

    pub fn map_field(&self) -> &Field {
        &self.map
    }

    pub fn has_jacobian_field(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn apply(&self, x: &[Jet2]) -> Vec<Jet2> {
        self.map.apply(x)
    }

    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.map.values(p)
    }

    /// Jacobian from the jets of the map itself (`target × source`).
    pub fn jacobian(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let j = self.map.jets(p)?;
        let s = self.source_dim();
        Ok(DMatrix::from_fn(self.target_dim(), s, |i, k| j[i].d(k)))
    }

    /// Jacobian from the analytic Jacobian field.
    pub fn jacobian_field_value(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let jf = self.jacobian.as_ref().ok_or(Error::MissingJacobian)?;
        Ok(DMatrix::from_row_slice(
            self.target_dim(),
            self.source_dim(),
            &jf.values(p)?,
        ))
    }

    fn jacobian_closure(&self) -> Result<crate::numcore::JetFn> {
        Ok(self.jacobian.as_ref().ok_or(Error::MissingJacobian)?.closure())
    }
}

/// Pointwise pullback; `degenerate` flags a rank-deficient Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct Pullback {
    pub matrix: DMatrix<f64>,
    pub degenerate: bool,
}

const RANK_TOL: f64 = 1e-10;

fn is_degenerate(j: &DMatrix<f64>) -> bool {
    let sv = j.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    max == 0.0 || min <= RANK_TOL * max
}

/// `(φ*g)_{mn} = ∂_m φ^M ∂_n φ^N g_{MN}(φ(p))`
pub fn pullback_metric(g: &MetricField, phi: &EmbeddingMap, p: &[f64]) -> Result<Pullback> {
    check_same_dim(phi.target_dim(), g.dim())?;
    let j = phi.jacobian(p)?;
    let gm = g.matrix(&phi.eval(p)?)?;
    Ok(Pullback {
        matrix: j.transpose() * gm * &j,
        degenerate: is_degenerate(&j),
    })
}

/// Pullback of a 1-form (`Jᵀ α`, as an `n × 1` matrix) or 2-form (`Jᵀ ω J`).
pub fn pullback_form(omega: &FormField, phi: &EmbeddingMap, p: &[f64]) -> Result<Pullback> {
    check_same_dim(phi.target_dim(), omega.dim())?;
    let j = phi.jacobian(p)?;
    let y = phi.eval(p)?;
    let matrix = match omega.degree() {
        1 => j.transpose() * DMatrix::from_column_slice(omega.dim(), 1, &omega.values(&y)?),
        _ => j.transpose() * omega.matrix(&y)? * &j,
    };
    Ok(Pullback {
        matrix,
        degenerate: is_degenerate(&j),
    })
}

fn pull_rank2(
    inner: JetFn,
    map: JetFn,
    jac: JetFn,
    s: usize,
    t: usize,
) -> impl Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static {
    move |x: &[Jet2]| {
        let y = map(x);
        let g = inner(&y);
        let j = jac(x);
        // (J^T G)_{m N} then (J^T G J)_{mn}
        let jtg: Vec<Jet2> = (0..s)
            .flat_map(|m| (0..t).map(move |nn| (m, nn)))
            .map(|(m, nn)| {
                (0..t).fold(Jet2::constant(0.0), |acc, mm| {
                    acc + &j[mm * s + m] * &g[mm * t + nn]
                })
            })
            .collect();
        (0..s)
            .flat_map(|m| (0..s).map(move |k| (m, k)))
            .map(|(m, k)| {
                (0..t).fold(Jet2::constant(0.0), |acc, nn| {
                    acc + &jtg[m * t + nn] * &j[nn * s + k]
                })
            })
            .collect()
    }
}

/// `φ*g` as a metric field on the source chart.
pub fn pullback_metric_field(g: &MetricField, phi: &EmbeddingMap) -> Result<MetricField> {
    check_same_dim(phi.target_dim(), g.dim())?;
    let (s, t) = (phi.source_dim(), phi.target_dim());
    let f = pull_rank2(
        g.field().closure(),
        phi.map_field().closure(),
        phi.jacobian_closure()?,
        s,
        t,
    );
    Ok(MetricField::new(format!("{}*{}", phi.name(), g.name()), s, f))
}

/// `φ*ω` as a form field on the source chart.
pub fn pullback_form_field(omega: &FormField, phi: &EmbeddingMap) -> Result<FormField> {
    check_same_dim(phi.target_dim(), omega.dim())?;
    let (s, t) = (phi.source_dim(), phi.target_dim());
    let name = format!("{}*{}", phi.name(), omega.name());
    let (inner, map, jac) = (omega.field().closure(), phi.map_field().closure(), phi.jacobian_closure()?);
    match omega.degree() {
        1 => Ok(FormField::one_form(name, s, move |x| {
            let a = inner(&map(x));
            let j = jac(x);
            (0..s)
                .map(|m| (0..t).fold(Jet2::constant(0.0), |acc, mm| acc + &j[mm * s + m] * &a[mm]))
                .collect()
        })),
        _ => Ok(FormField::two_form(name, s, pull_rank2(inner, map, jac, s, t))),
    }
}
