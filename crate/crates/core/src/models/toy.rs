//! `R² × (R × S¹)` reduced by the simultaneous rotation to a 2D surface.
//!
//! Parent chart `(r, φ, x, θ)`; level-set chart `(r, θ, χ)` with
//! `φ = χ + θ`, `x = −r²/(2a)`; quotient chart `(r, χ)`.

use crate::error::{Error, Result};
use crate::geometry::{MetricField, VectorField};
use crate::mechanics::QuadraticKinetic;
use crate::numcore::{Jet2, ScalarField};
use crate::reduction::{EmbeddingMap, FormField, ReductionSpec};

/// Stated Euler characteristic of the quotient.
pub const EULER_TARGET: f64 = 2.0;

pub(crate) fn check_radius(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("circle radius must be positive, got {a}")))
    }
}

/// `dr² + r² dφ² + dx² + a² dθ²`
pub fn toy_metric(a: f64) -> MetricField {
    MetricField::diagonal("toy-parent", 4, move |x| {
        vec![Jet2::constant(1.0), x[0].square(), Jet2::constant(1.0), Jet2::constant(a * a)]
    })
}

/// `r dr∧dφ + a dx∧dθ`
pub fn toy_form(a: f64) -> FormField {
    FormField::two_form_terms("omega", 4, move |x| vec![(0, 1, x[0].clone()), (2, 3, Jet2::constant(a))])
}

/// `V = ∂_φ + ∂_θ`
pub fn toy_killing() -> VectorField {
    VectorField::constant("V", vec![0.0, 1.0, 0.0, 1.0])
}

/// `μ = r²/2 + a x`
pub fn toy_moment_map(a: f64) -> ScalarField {
    ScalarField::new("mu", 4, move |x| 0.5 * x[0].square() + a * &x[2])
}

/// `(r, θ, χ) ↦ (r, χ + θ, −r²/(2a), θ)`
pub fn toy_level(a: f64) -> EmbeddingMap {
    EmbeddingMap::new("toy-level", 3, 4, move |x| {
        vec![x[0].clone(), &x[2] + &x[1], -x[0].square() / (2.0 * a), x[1].clone()]
    })
    .with_jacobian(move |x| {
        let (z, o) = (Jet2::constant(0.0), Jet2::constant(1.0));
        vec![
            o.clone(), z.clone(), z.clone(),
            z.clone(), o.clone(), o.clone(),
            -&x[0] / a, z.clone(), z.clone(),
            z.clone(), o, z,
        ]
    })
}

/// Closed-form level-set metric
/// `(1 + r²/a²) dr² + r² (dθ + dχ)² + a² dθ²` in `(r, θ, χ)`.
pub fn toy_level_metric(a: f64) -> MetricField {
    MetricField::new("toy-level", 3, move |x| {
        let r2 = x[0].square();
        let z = Jet2::constant(0.0);
        vec![
            1.0 + &r2 / (a * a), z.clone(), z.clone(),
            z.clone(), &r2 + a * a, r2.clone(),
            z, r2.clone(), r2,
        ]
    })
}

/// Closed-form quotient metric `(1 + r²/a²) dr² + a²r²/(r² + a²) dχ²`.
pub fn toy_reduced_metric(a: f64) -> MetricField {
    MetricField::diagonal("toy-reduced", 2, move |x| {
        let r2 = x[0].square();
        vec![1.0 + &r2 / (a * a), a * a * &r2 / (&r2 + a * a)]
    })
}

/// `r dr∧dχ`
pub fn toy_reduced_form() -> FormField {
    FormField::two_form_terms("omega~", 2, |x| vec![(0, 1, x[0].clone())])
}

/// Stated curvature target `8a⁴/(r² + a²)³`. This is the scalar curvature
/// of [`toy_reduced_metric`], i.e. twice its Gaussian curvature.
pub fn curvature_target(r: f64, a: f64) -> f64 {
    8.0 * a.powi(4) / (r * r + a * a).powi(3)
}

/// Gaussian curvature of [`toy_reduced_metric`], `4a⁴/(r² + a²)³`.
pub fn gaussian_curvature_exact(r: f64, a: f64) -> f64 {
    4.0 * a.powi(4) / (r * r + a * a).powi(3)
}

pub fn toy_reduction(a: f64) -> Result<ReductionSpec> {
    check_radius(a)?;
    ReductionSpec::new(
        "toy",
        toy_metric(a),
        vec![toy_form(a)],
        toy_killing(),
        toy_level(a),
        vec![0, 2],
        1,
    )
}

/// Particle on the level set, `L = ½ q̇ᵀ M q̇` in `(r, χ, θ)`.
pub fn toy_lagrangian(a: f64) -> Result<QuadraticKinetic> {
    check_radius(a)?;
    let mass = MetricField::new("toy-lagrangian", 3, move |x| {
        let r2 = x[0].square();
        let z = Jet2::constant(0.0);
        vec![
            1.0 + &r2 / (a * a), z.clone(), z.clone(),
            z.clone(), r2.clone(), r2.clone(),
            z, r2.clone(), r2 + a * a,
        ]
    });
    QuadraticKinetic::new(vec!["r".into(), "chi".into(), "theta".into()], mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{euler_characteristic, gaussian_curvature_polar, scalar_curvature, RadialDomain};
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    #[test]
    fn parent_values() {
        let m = toy_metric(1.5).matrix(&[2.0, 0.1, 0.3, 4.0]).unwrap();
        assert_eq!(m, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 4.0, 1.0, 2.25])));
        assert_eq!(toy_moment_map(1.0).value(&[2.0, 0.0, 0.7, 0.0]).unwrap(), 2.7);
    }

    #[test]
    fn reduced_values() {
        let m = toy_reduced_metric(1.0).matrix(&[1.0, 0.0]).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]));
        assert_eq!(curvature_target(0.0, 1.0), 8.0);
        assert_eq!(curvature_target(0.0, 2.0), 2.0);
    }

    #[test]
    fn level_embedding_jacobian() {
        let phi = toy_level(1.7);
        let p = [0.8, 0.3, 1.1];
        assert!((phi.jacobian(&p).unwrap() - phi.jacobian_field_value(&p).unwrap()).amax() < 1e-15);
    }

    #[test]
    fn curvature_and_topology_of_quotient() {
        for a in [0.5, 1.0, 2.0] {
            let g = toy_reduced_metric(a);
            for r in [1e-6, 0.1, 1.0, 3.0, 10.0] {
                let k = gaussian_curvature_polar(&g, r, 0.0).unwrap();
                assert!((k - gaussian_curvature_exact(r, a)).abs() < 1e-6, "a={a} r={r} K={k}");
            }
            let s = scalar_curvature(&g, &[1.0, 0.0]).unwrap();
            assert!((s - curvature_target(1.0, a)).abs() < 1e-8);
            let chi = euler_characteristic(&g, RadialDomain::new(a), 2.0 * PI).unwrap();
            assert!((chi.value - 1.0).abs() < 1e-8, "a={a} chi={chi:?}");
        }
    }

    #[test]
    fn invalid_radius() {
        assert!(toy_reduction(0.0).is_err());
        assert!(toy_lagrangian(-1.0).is_err());
    }
}
