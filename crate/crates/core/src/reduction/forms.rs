//! Differential 1- and 2-forms.
//!
//! A 2-form is stored as the antisymmetric matrix `ω_{MN}` whose `M < N`
//! entries are the coefficients of `dx^M ∧ dx^N`; as a bilinear form
//! `ω(U, W) = U^M ω_{MN} W^N`. With this convention the contraction
//! `(ι ω)_M = ω_{MN} V^N` of `r dr∧dφ + a dx∧dθ` with `∂_φ + ∂_θ` is
//! exactly `r dr + a dx`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{Array3, VectorField};
use crate::numcore::quadrature::integrate;
use crate::numcore::{Field, Jet2};

#[derive(Clone, Debug)]
pub struct FormField {
    degree: usize,
    field: Field,
}

impl FormField {
    pub fn one_form<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self {
            degree: 1,
            field: Field::new(name, dim, dim, f),
        }
    }

    /// `f` returns `dim²` row-major entries; only `M < N` is read.
    pub fn two_form<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self {
            degree: 2,
            field: Field::new(name, dim, dim * dim, move |x| antisymmetrize(f(x), dim)),
        }
    }

    /// 2-form written as a sum of terms `c · dx^i ∧ dx^j` (any order of `i, j`).
    pub fn two_form_terms<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<(usize, usize, Jet2)> + Send + Sync + 'static,
    {
        Self {
            degree: 2,
            field: Field::new(name, dim, dim * dim, move |x| {
                let mut w = vec![Jet2::constant(0.0); dim * dim];
                for (i, j, c) in f(x) {
                    if i == j {
                        continue;
                    }
                    w[j * dim + i] = &w[j * dim + i] - &c;
                    w[i * dim + j] = &w[i * dim + j] + &c;
                }
                w
            }),
        }
    }

    /// Reinterprets a `dim²` field as a 2-form (antisymmetric part kept by storage).
    pub fn two_form_from_field(field: Field) -> Self {
        let dim = field.dim();
        let inner = field.closure();
        Self {
            degree: 2,
            field: Field::new(field.name().to_string(), dim, dim * dim, move |x| {
                antisymmetrize(inner(x), dim)
            }),
        }
    }

    pub fn one_form_from_field(field: Field) -> Self {
        assert_eq!(field.len(), field.dim());
        Self { degree: 1, field }
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    /// Coefficients at `p`: length `dim` (1-form) or `dim²` row-major (2-form).
    pub fn values(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.field.values(p)
    }

    pub fn matrix(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.expect_degree(2)?;
        let n = self.dim();
        Ok(DMatrix::from_row_slice(n, n, &self.values(p)?))
    }

    fn expect_degree(&self, k: usize) -> Result<()> {
        if self.degree == k {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: k,
                found: self.degree,
            })
        }
    }
}

fn antisymmetrize(mut w: Vec<Jet2>, n: usize) -> Vec<Jet2> {
    for i in 0..n {
        w[i * n + i] = Jet2::constant(0.0);
        for j in 0..i {
            w[i * n + j] = -&w[j * n + i];
        }
    }
    w
}

/// Value of a differential form at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum FormValue {
    One(Vec<f64>),
    Two(DMatrix<f64>),
    /// Totally antisymmetric; `(L, M, N)` entry is the coefficient of
    /// `dx^L ∧ dx^M ∧ dx^N` for `L < M < N`.
    Three(Array3),
}

impl FormValue {
    pub fn max_abs(&self) -> f64 {
        match self {
            FormValue::One(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            FormValue::Two(m) => m.amax(),
            FormValue::Three(a) => a.max_abs(),
        }
    }
}

/// `(ι_V ω)_M = ω_{MN} V^N`
pub fn contract(omega: &FormField, v: &VectorField, p: &[f64]) -> Result<Vec<f64>> {
    omega.expect_degree(2)?;
    check_same_dim(omega.dim(), v.dim())?;
    let n = omega.dim();
    let w = omega.values(p)?;
    let vv = v.values(p)?;
    Ok((0..n)
        .map(|m| (0..n).map(|k| w[m * n + k] * vv[k]).sum())
        .collect())
}

/// The 1-form field `ι_V ω`.
pub fn contract_field(omega: &FormField, v: &VectorField) -> Result<FormField> {
    omega.expect_degree(2)?;
    check_same_dim(omega.dim(), v.dim())?;
    let n = omega.dim();
    let (wf, vf) = (omega.field().closure(), v.field().closure());
    Ok(FormField::one_form(
        format!("i_{}({})", v.name(), omega.name()),
        n,
        move |x| {
            let w = wf(x);
            let vv = vf(x);
            (0..n)
                .map(|m| {
                    (0..n).fold(Jet2::constant(0.0), |acc, k| acc + &w[m * n + k] * &vv[k])
                })
                .collect()
        },
    ))
}

/// Coordinate exterior derivative.
pub fn exterior_derivative(omega: &FormField, p: &[f64]) -> Result<FormValue> {
    let n = omega.dim();
    let j = omega.field().jets(p)?;
    match omega.degree() {
        1 => Ok(FormValue::Two(DMatrix::from_fn(n, n, |m, k| {
            j[k].d(m) - j[m].d(k)
        }))),
        2 => {
            let d = |l: usize, m: usize, k: usize| j[m * n + k].d(l);
            let mut out = Array3::zeros(n);
            for l in 0..n {
                for m in 0..n {
                    for k in 0..n {
                        out.set(l, m, k, d(l, m, k) + d(m, k, l) + d(k, l, m));
                    }
                }
            }
            Ok(FormValue::Three(out))
        }
        k => Err(Error::DimensionMismatch {
            expected: 2,
            found: k,
        }),
    }
}

/// Closure tolerance along the integration path.
const EXACTNESS_TOL: f64 = 1e-6;

/// Recovers `μ` with `dμ = α` by integrating `α` along the straight segment
/// from `base` (where `μ = base_value`) to `p`.
pub fn recover_moment_map(alpha: &FormField, base: &[f64], base_value: f64, p: &[f64]) -> Result<f64> {
    alpha.expect_degree(1)?;
    check_same_dim(alpha.dim(), base.len())?;
    check_same_dim(alpha.dim(), p.len())?;
    let delta: Vec<f64> = p.iter().zip(base).map(|(x, b)| x - b).collect();
    let at = |t: f64| -> Vec<f64> { base.iter().zip(&delta).map(|(b, d)| b + t * d).collect() };
    let residual = [0.0, 0.25, 0.5, 0.75, 1.0]
        .into_iter()
        .map(|t| exterior_derivative(alpha, &at(t)).map(|d| d.max_abs()))
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))?;
    if residual > EXACTNESS_TOL {
        return Err(Error::NotExact { residual });
    }
    let line = integrate(
        |t| {
            let a = alpha.values(&at(t))?;
            Ok(a.iter().zip(&delta).map(|(a, d)| a * d).sum())
        },
        0.0,
        1.0,
        1e-12,
    )?;
    Ok(base_value + line.value)
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_form(a: f64) -> FormField {
        // coordinates (r, φ, x, θ)
        FormField::two_form_terms("toy", 4, move |x| {
            vec![(0, 1, x[0].clone()), (2, 3, Jet2::constant(a))]
        })
    }

    fn toy_rotation() -> VectorField {
        VectorField::constant("V", vec![0.0, 1.0, 0.0, 1.0])
    }

    #[test]
    fn toy_contraction() {
        let c = contract(&toy_form(1.5), &toy_rotation(), &[0.7, 0.1, -0.3, 2.0]).unwrap();
        assert_eq!(c, vec![0.7, 0.0, 1.5, 0.0]);
    }

    #[test]
    fn zero_vector_contracts_to_zero() {
        let z = VectorField::constant("0", vec![0.0; 4]);
        let c = contract(&toy_form(1.0), &z, &[0.7, 0.1, -0.3, 2.0]).unwrap();
        assert!(c.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn toy_contraction_is_closed() {
        let alpha = contract_field(&toy_form(2.0), &toy_rotation()).unwrap();
        let d = exterior_derivative(&alpha, &[1.1, 0.4, 0.2, 0.9]).unwrap();
        assert!(d.max_abs() < 1e-15);
        assert!(exterior_derivative(&toy_form(2.0), &[1.1, 0.4, 0.2, 0.9]).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn non_closed_forms_are_detected() {
        let w = FormField::two_form_terms("x dy^dz", 3, |x| vec![(1, 2, x[0].clone())]);
        let d = exterior_derivative(&w, &[0.0, 0.0, 0.0]).unwrap();
        match d {
            FormValue::Three(a) => {
                assert_eq!(a.get(0, 1, 2), 1.0);
                assert_eq!(a.get(1, 0, 2), -1.0);
            }
            _ => unreachable!(),
        }
        let rot = FormField::one_form("-y dx + x dy", 2, |x| vec![-&x[1], x[0].clone()]);
        assert!(matches!(
            recover_moment_map(&rot, &[1.0, 0.0], 0.0, &[0.0, 1.0]),
            Err(Error::NotExact { .. })
        ));
    }

    #[test]
    fn moment_map_recovery_toy() {
        let a = 2.0;
        let alpha = contract_field(&toy_form(a), &toy_rotation()).unwrap();
        let mu = |p: &[f64]| 0.5 * p[0] * p[0] + a * p[2];
        let base = [1.0, 0.5, 0.0, 0.5];
        let p = [2.3, 1.0, -0.7, 3.0];
        let got = recover_moment_map(&alpha, &base, mu(&base), &p).unwrap();
        assert!((got - mu(&p)).abs() < 1e-12);
    }

    #[test]
    fn zero_form_gives_constant() {
        let z = FormField::one_form("0", 2, |_| Jet2::constants(&[0.0, 0.0]));
        assert_eq!(recover_moment_map(&z, &[0.0, 0.0], 3.5, &[1.0, 2.0]).unwrap(), 3.5);
    }

    #[test]
    fn constant_one_form_is_closed() {
        let c = FormField::one_form("dx+2dy", 2, |_| Jet2::constants(&[1.0, 2.0]));
        assert_eq!(exterior_derivative(&c, &[0.3, 0.3]).unwrap().max_abs(), 0.0);
    }
}
