//! Concrete charts, metrics, forms and targets, and a registry of them by name.

mod gh;
mod heavenly;
mod r8;
mod toy;

pub use gh::{
    cartesian_triple, gh_flat_metric, gh_flat_triple, gibbons_hawking_metric, gibbons_hawking_triple,
    monopole_jets, monopole_potential, origin_exclusion, psi_branch_exclusion, r4_rotation, string_exclusion,
    var_change, var_change_inverse, MONOPOLE_CURL_SIGN, STRING_EPS,
};
pub use heavenly::{monge_ampere, monge_ampere_exclusion, non_unimodular};
pub use r8::{
    d5_metric, r8_cartesian_killing, r8_cartesian_metric, r8_cartesian_triple, r8_gh_killing, r8_gh_metric,
    r8_gh_triple, r8_level, r8_moment_maps, taub_nut_metric, taub_nut_metric_field, taub_nut_reduction,
    taub_nut_triple, taub_nut_triple_forms,
};
pub use toy::{
    curvature_target, gaussian_curvature_exact, toy_form, toy_killing, toy_lagrangian, toy_level, toy_level_metric,
    toy_metric, toy_moment_map, toy_reduced_form, toy_reduced_metric, toy_reduction, EULER_TARGET,
};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{MetricField, VectorField};
use crate::numcore::{Exclusion, SampleSpec, ScalarField};
use crate::reduction::{EmbeddingMap, FormField};

/// Names understood by [`ModelRegistry::get`].
pub const MODEL_NAMES: [&str; 5] = ["toy-parent", "toy-reduced", "gh-flat", "r8-parent", "taub-nut"];

/// A chart with its metric, forms, isometries, embeddings, scalar fields and
/// sampling domain.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: &'static str,
    pub a: Option<f64>,
    pub metric: MetricField,
    pub forms: Vec<FormField>,
    pub killing: Vec<VectorField>,
    pub embeddings: Vec<EmbeddingMap>,
    pub scalars: Vec<ScalarField>,
    pub bounds: Vec<(f64, f64)>,
    pub exclusions: Vec<Exclusion>,
}

impl Model {
    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn sample_spec(&self, count: usize, seed: u64) -> Result<SampleSpec> {
        Ok(SampleSpec::new(self.bounds.clone(), count, seed)?.with_exclusions(self.exclusions.iter().cloned()))
    }

    /// Every scalar field of the model: declared scalars, metric components
    /// and form coefficients (upper triangle).
    pub fn all_scalar_fields(&self) -> Vec<ScalarField> {
        let n = self.dim();
        let mut out = self.scalars.clone();
        for i in 0..n {
            for j in i..n {
                out.push(self.metric.field().component(i * n + j));
            }
        }
        for w in &self.forms {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(w.field().component(i * n + j));
                }
            }
        }
        out
    }
}

const ANGLE: (f64, f64) = (0.1, 5.9);
const R_BOX: (f64, f64) = (0.3, 3.0);
const X_BOX: (f64, f64) = (-2.0, 2.0);

fn gh_exclusions() -> Vec<Exclusion> {
    vec![string_exclusion(0.1), origin_exclusion(0.3)]
}

pub fn toy_parent(a: f64) -> Result<Model> {
    toy_reduction(a)?;
    Ok(Model {
        name: "toy-parent",
        a: Some(a),
        metric: toy_metric(a),
        forms: vec![toy_form(a)],
        killing: vec![toy_killing()],
        embeddings: vec![toy_level(a)],
        scalars: vec![toy_moment_map(a)],
        bounds: vec![R_BOX, ANGLE, X_BOX, ANGLE],
        exclusions: vec![],
    })
}

pub fn toy_reduced(a: f64) -> Result<Model> {
    toy_reduction(a)?;
    Ok(Model {
        name: "toy-reduced",
        a: Some(a),
        metric: toy_reduced_metric(a),
        forms: vec![toy_reduced_form()],
        killing: vec![VectorField::coordinate(2, 1)],
        embeddings: vec![],
        scalars: vec![],
        bounds: vec![R_BOX, ANGLE],
        exclusions: vec![],
    })
}

pub fn gh_flat() -> Model {
    let mono = |k: usize| {
        ScalarField::new(format!("A{}", k + 1), 4, move |x| monopole_jets(x)[k].clone())
    };
    Model {
        name: "gh-flat",
        a: None,
        metric: gh_flat_metric(),
        forms: gh_flat_triple().into(),
        killing: vec![VectorField::coordinate(4, 3)],
        embeddings: vec![var_change_inverse()],
        scalars: vec![mono(0), mono(1)],
        bounds: vec![X_BOX, X_BOX, X_BOX, (0.1, 4.0 * PI - 0.1)],
        exclusions: gh_exclusions(),
    }
}

pub fn r8_parent(a: f64) -> Result<Model> {
    taub_nut_reduction(a)?;
    let gh_mu = |name: &'static str, k: usize| {
        ScalarField::new(name, 8, move |x| 0.5 * x[k].clone() + a * &x[4 + k])
    };
    Ok(Model {
        name: "r8-parent",
        a: Some(a),
        metric: r8_gh_metric(a),
        forms: r8_gh_triple(a).into(),
        killing: vec![r8_gh_killing()],
        embeddings: vec![r8_level(a)],
        scalars: vec![gh_mu("mu_I", 2), gh_mu("mu_J", 0), gh_mu("mu_K", 1)],
        bounds: vec![X_BOX, X_BOX, X_BOX, (0.1, 4.0 * PI - 0.1), X_BOX, X_BOX, X_BOX, ANGLE],
        exclusions: gh_exclusions(),
    })
}

pub fn taub_nut(a: f64) -> Result<Model> {
    taub_nut_reduction(a)?;
    Ok(Model {
        name: "taub-nut",
        a: Some(a),
        metric: taub_nut_metric_field(a),
        forms: taub_nut_triple_forms(a).into(),
        killing: vec![VectorField::coordinate(4, 3)],
        embeddings: vec![],
        scalars: vec![],
        bounds: vec![X_BOX, X_BOX, X_BOX, ANGLE],
        exclusions: gh_exclusions(),
    })
}

/// Immutable collection of the models for one value of `a`.
#[derive(Clone, Debug)]
pub struct ModelRegistry {
    models: Vec<Model>,
}

impl ModelRegistry {
    pub fn new(a: f64) -> Result<Self> {
        Ok(Self {
            models: vec![toy_parent(a)?, toy_reduced(a)?, gh_flat(), r8_parent(a)?, taub_nut(a)?],
        })
    }

    pub fn get(&self, name: &str) -> Result<&Model> {
        self.models
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown model `{name}`")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Model> {
        self.models.iter()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.models.iter().map(|m| m.name).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::killing_deviation;
    use crate::numcore::sample_points;
    use crate::reduction::exterior_derivative;

    #[test]
    fn names_are_registered() {
        let reg = ModelRegistry::new(1.0).unwrap();
        assert_eq!(reg.names(), MODEL_NAMES);
        assert!(reg.get("eguchi-hanson").is_err());
        assert!(ModelRegistry::new(0.0).is_err());
    }

    #[test]
    fn isometries_and_closed_forms() {
        let reg = ModelRegistry::new(0.7).unwrap();
        for m in reg.iter() {
            for p in sample_points(&m.sample_spec(5, 3).unwrap()).unwrap() {
                for v in &m.killing {
                    assert!(killing_deviation(&m.metric, v, &p).unwrap().amax() < 1e-10, "{}", m.name);
                }
                for w in &m.forms {
                    assert!(exterior_derivative(w, &p).unwrap().max_abs() < 1e-8, "{} {}", m.name, w.name());
                }
            }
        }
    }
}
