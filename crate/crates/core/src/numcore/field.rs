use std::fmt;
use std::sync::Arc;

use super::jet::Jet2;
use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(&[Jet2]) -> Jet2 + Send + Sync>;
pub type JetFn = Arc<dyn Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync>;

/// A smooth real function on a chart, written once against [`Jet2`] so the
/// same closure serves plain evaluation, jets and finite differences.
#[derive(Clone)]
pub struct ScalarField {
    name: String,
    dim: usize,
    f: ScalarFn,
}

impl ScalarField {
    pub fn new<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Jet2 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            dim,
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, x: &[Jet2]) -> Jet2 {
        (self.f)(x)
    }

    pub fn value(&self, p: &[f64]) -> Result<f64> {
        check_dim(self.dim, p.len())?;
        let v = self.apply(&Jet2::constants(p)).value();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                field: self.name.clone(),
                component: None,
            })
        }
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

/// A jet-typed map from a `dim`-dimensional chart to `len` real components.
/// Metrics, vector fields, forms and embeddings are all thin views over this.
#[derive(Clone)]
pub struct Field {
    name: String,
    dim: usize,
    len: usize,
    f: JetFn,
}

impl Field {
    pub fn new<F>(name: impl Into<String>, dim: usize, len: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            dim,
            len,
            f: Arc::new(f),
        }
    }

    pub fn from_arc(name: impl Into<String>, dim: usize, len: usize, f: JetFn) -> Self {
        Self {
            name: name.into(),
            dim,
            len,
            f,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn closure(&self) -> JetFn {
        Arc::clone(&self.f)
    }

    /// Raw application to caller-supplied jets (used for composition).
    pub fn apply(&self, x: &[Jet2]) -> Vec<Jet2> {
        let out = (self.f)(x);
        debug_assert_eq!(out.len(), self.len, "field `{}` returned wrong length", self.name);
        out
    }

    /// Value, gradient and Hessian of every component at `p`.
    pub fn jets(&self, p: &[f64]) -> Result<Vec<Jet2>> {
        check_dim(self.dim, p.len())?;
        let out = self.apply(&Jet2::seed(p));
        for j in &out {
            if let Some(component) = j.first_non_finite() {
                return Err(Error::NonFinite {
                    field: self.name.clone(),
                    component,
                });
            }
        }
        Ok(out)
    }

    pub fn values(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, p.len())?;
        let out: Vec<f64> = self.apply(&Jet2::constants(p)).iter().map(Jet2::value).collect();
        if out.iter().all(|v| v.is_finite()) {
            Ok(out)
        } else {
            Err(Error::NonFinite {
                field: self.name.clone(),
                component: None,
            })
        }
    }

    /// Component `k` as a standalone scalar field.
    pub fn component(&self, k: usize) -> ScalarField {
        let f = Arc::clone(&self.f);
        ScalarField::new(format!("{}[{k}]", self.name), self.dim, move |x| {
            f(x).swap_remove(k)
        })
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("len", &self.len)
            .finish()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
