//! Jet evaluation of scalar fields and the central-difference oracle.

use std::fmt;
use std::sync::Arc;

use super::field::{check_dim, ScalarField};
use super::jet::Jet2;
use crate::error::{Error, Result};

/// Named guard for a singular locus; `rejects(p)` is true on points to avoid.
#[derive(Clone)]
pub struct Exclusion {
    name: String,
    reject: Arc<dyn Fn(&[f64]) -> bool + Send + Sync>,
}

impl Exclusion {
    pub fn new<F>(name: impl Into<String>, reject: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            reject: Arc::new(reject),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rejects(&self, p: &[f64]) -> bool {
        (self.reject)(p)
    }
}

impl fmt::Debug for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Exclusion").field(&self.name).finish()
    }
}

/// Exact-to-roundoff value, gradient and Hessian of `f` at `p`.
pub fn evaluate_jet(f: &ScalarField, p: &[f64]) -> Result<Jet2> {
    check_dim(f.dim(), p.len())?;
    let j = f.apply(&Jet2::seed(p));
    if let Some(component) = j.first_non_finite() {
        return Err(Error::NonFinite {
            field: f.name().to_string(),
            component,
        });
    }
    let n = p.len();
    Ok(Jet2::from_parts(j.value(), j.gradient_padded(n), j.hessian_padded(n)))
}

/// Central-difference step for coordinate value `x`.
pub fn fd_step(x: f64) -> f64 {
    (1e-5 * x.abs()).max(1e-5)
}

/// Central-difference estimate of value, gradient and Hessian of `f` at `p`.
///
/// Only plain values of `f` are used, so this is independent of the jet
/// derivative rules. Fails if any stencil point is rejected by `exclusions`.
pub fn fd_oracle(f: &ScalarField, p: &[f64], exclusions: &[Exclusion]) -> Result<Jet2> {
    check_dim(f.dim(), p.len())?;
    let n = p.len();
    let h: Vec<f64> = p.iter().map(|&x| fd_step(x)).collect();
    let eval = |offsets: &[(usize, f64)]| -> Result<f64> {
        let mut q = p.to_vec();
        for &(i, s) in offsets {
            q[i] += s * h[i];
        }
        if let Some(e) = exclusions.iter().find(|e| e.rejects(&q)) {
            return Err(Error::StencilExcluded {
                predicate: e.name().to_string(),
            });
        }
        f.value(&q)
    };
    let f0 = eval(&[])?;
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n * n];
    for i in 0..n {
        let fp = eval(&[(i, 1.0)])?;
        let fm = eval(&[(i, -1.0)])?;
        grad[i] = (fp - fm) / (2.0 * h[i]);
        hess[i * n + i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for j in 0..i {
            let fpp = eval(&[(i, 1.0), (j, 1.0)])?;
            let fpm = eval(&[(i, 1.0), (j, -1.0)])?;
            let fmp = eval(&[(i, -1.0), (j, 1.0)])?;
            let fmm = eval(&[(i, -1.0), (j, -1.0)])?;
            let d = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hess[i * n + j] = d;
            hess[j * n + i] = d;
        }
    }
    Ok(Jet2::from_parts(f0, grad, hess))
}

/// Central-difference gradient of a plain function (values only).
pub fn fd_gradient<F>(f: F, p: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut q = p.to_vec();
    (0..p.len())
        .map(|i| {
            let h = fd_step(p[i]);
            q[i] = p[i] + h;
            let fp = f(&q)?;
            q[i] = p[i] - h;
            let fm = f(&q)?;
            q[i] = p[i];
            Ok((fp - fm) / (2.0 * h))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moment_map(a: f64) -> ScalarField {
        ScalarField::new("mu", 4, move |x| 0.5 * x[0].square() + a * &x[2])
    }

    #[test]
    fn constant_field() {
        let f = ScalarField::new("seven", 3, |_| Jet2::constant(7.0));
        let j = evaluate_jet(&f, &[0.3, -1.0, 2.0]).unwrap();
        assert_eq!(j.value(), 7.0);
        assert_eq!(j.gradient(), &[0.0; 3]);
        assert!((0..3).all(|i| (0..3).all(|k| j.hessian(i, k) == 0.0)));
        let o = fd_oracle(&f, &[0.3, -1.0, 2.0], &[]).unwrap();
        assert!(o.gradient().iter().all(|g| g.abs() < 1e-10));
    }

    #[test]
    fn toy_moment_map_jet() {
        let j = evaluate_jet(&moment_map(2.0), &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(j.value(), 0.5);
        assert_eq!(j.gradient(), &[1.0, 0.0, 2.0, 0.0]);
        for i in 0..4 {
            for k in 0..4 {
                let expected = if i == 0 && k == 0 { 1.0 } else { 0.0 };
                assert_eq!(j.hessian(i, k), expected);
            }
        }
    }

    #[test]
    fn toy_moment_map_fd() {
        let o = fd_oracle(&moment_map(2.0), &[1.0, 0.0, 0.0, 0.0], &[]).unwrap();
        for (g, e) in o.gradient().iter().zip([1.0, 0.0, 2.0, 0.0]) {
            assert!((g - e).abs() < 1e-8);
        }
    }

    #[test]
    fn stencil_exclusion() {
        let f = ScalarField::new("x", 1, |x| x[0].clone());
        let ex = Exclusion::new("x<=0", |p| p[0] <= 0.0);
        let e = fd_oracle(&f, &[1e-6], &[ex]).unwrap_err();
        assert_eq!(
            e,
            Error::StencilExcluded {
                predicate: "x<=0".into()
            }
        );
    }

    #[test]
    fn non_finite_reports_coordinate() {
        let f = ScalarField::new("sqrt-y", 2, |x| x[1].sqrt());
        match evaluate_jet(&f, &[1.0, 0.0]).unwrap_err() {
            Error::NonFinite { component, .. } => assert_eq!(component, Some(1)),
            e => panic!("unexpected {e:?}"),
        }
    }
}
