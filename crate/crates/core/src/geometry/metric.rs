use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};
use crate::numcore::{Field, Jet2};

/// A Riemannian metric on a chart. Only the upper triangle of the closure's
/// output is read; the lower triangle is mirrored from it, so symmetry is exact.
#[derive(Clone, Debug)]
pub struct MetricField {
    field: Field,
}

impl MetricField {
    /// `f` returns the `dim × dim` components row-major.
    pub fn new<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self::from_field(Field::new(name, dim, dim * dim, f))
    }

    /// Diagonal metric from its `dim` diagonal entries.
    pub fn diagonal<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self::new(name, dim, move |x| {
            let d = f(x);
            let mut g = vec![Jet2::constant(0.0); dim * dim];
            for (i, v) in d.into_iter().enumerate() {
                g[i * dim + i] = v;
            }
            g
        })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::diagonal(format!("euclidean{dim}"), dim, move |_| {
            vec![Jet2::constant(1.0); dim]
        })
    }

    pub fn from_field(field: Field) -> Self {
        let n = field.dim();
        assert_eq!(field.len(), n * n, "metric field must have dim² components");
        let inner = field.closure();
        let name = field.name().to_string();
        Self {
            field: Field::new(name, n, n * n, move |x| symmetrize(inner(x), n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn name(&self) -> &str {
        self.field.name()
    }

    /// The symmetrized component field (`dim²` entries, row-major).
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn apply(&self, x: &[Jet2]) -> Vec<Jet2> {
        self.field.apply(x)
    }

    pub fn matrix(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim();
        Ok(DMatrix::from_row_slice(n, n, &self.field.values(p)?))
    }

    pub fn jets(&self, p: &[f64]) -> Result<MetricJet> {
        Ok(MetricJet {
            n: self.dim(),
            g: self.field.jets(p)?,
        })
    }

    /// Cholesky-based positive-definiteness check at `p`.
    pub fn check_positive(&self, p: &[f64]) -> Result<()> {
        cholesky(self.matrix(p)?, self.name()).map(|_| ())
    }
}

fn symmetrize(mut g: Vec<Jet2>, n: usize) -> Vec<Jet2> {
    for i in 0..n {
        for j in 0..i {
            g[i * n + j] = g[j * n + i].clone();
        }
    }
    g
}

pub(crate) fn cholesky(m: DMatrix<f64>, what: &str) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    Cholesky::new(m).ok_or_else(|| Error::Domain(format!("`{what}` is not positive-definite")))
}

/// Metric components with first and second derivatives at one point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    n: usize,
    g: Vec<Jet2>,
}

impl MetricJet {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.n + j].value()
    }

    /// `∂_k g_ij`
    pub fn d(&self, k: usize, i: usize, j: usize) -> f64 {
        self.g[i * self.n + j].d(k)
    }

    /// `∂_k ∂_l g_ij`
    pub fn dd(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        self.g[i * self.n + j].hessian(k, l)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Jet2 {
        &self.g[i * self.n + j]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.value(i, j))
    }

    pub fn inverse(&self, what: &str) -> Result<DMatrix<f64>> {
        Ok(cholesky(self.matrix(), what)?.inverse())
    }
}

/// A real vector field on a chart.
#[derive(Clone, Debug)]
pub struct VectorField {
    field: Field,
}

impl VectorField {
    pub fn new<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self {
            field: Field::new(name, dim, dim, f),
        }
    }

    /// Constant vector field with the given components.
    pub fn constant(name: impl Into<String>, components: Vec<f64>) -> Self {
        let dim = components.len();
        Self::new(name, dim, move |_| Jet2::constants(&components))
    }

    /// The coordinate vector field `∂_index`.
    pub fn coordinate(dim: usize, index: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[index] = 1.0;
        Self::constant(format!("d/dx{index}"), c)
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn name(&self) -> &str {
        self.field.name()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn apply(&self, x: &[Jet2]) -> Vec<Jet2> {
        self.field.apply(x)
    }

    pub fn values(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.field.values(p)
    }

    pub fn jets(&self, p: &[f64]) -> Result<Vec<Jet2>> {
        self.field.jets(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_triangle_is_ignored() {
        let g = MetricField::new("lopsided", 2, |_| {
            Jet2::constants(&[1.0, 0.25, 99.0, 2.0])
        });
        let m = g.matrix(&[0.0, 0.0]).unwrap();
        assert_eq!(m[(1, 0)], 0.25);
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let g = MetricField::diagonal("bad", 2, |x| vec![Jet2::constant(1.0), x[0].clone()]);
        assert!(g.check_positive(&[1.0, 0.0]).is_ok());
        assert!(matches!(g.check_positive(&[-1.0, 0.0]), Err(Error::Domain(_))));
    }
}
