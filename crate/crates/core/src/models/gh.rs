//! Gibbons–Hawking charts `(x₁, x₂, x₃, Ψ)`, the Dirac monopole and the
//! Cartesian ↔ GH coordinate change on `R⁴`.

use crate::error::{Error, Result};
use crate::geometry::{MetricField, VectorField};
use crate::numcore::{Exclusion, Jet2};
use crate::reduction::{EmbeddingMap, FormField};

/// Distance to the gauge string / origin below which the monopole is refused.
pub const STRING_EPS: f64 = 1e-8;

/// Sign `s` in `∇ × A = s x / r³`, fixed by a finite-difference curl.
pub const MONOPOLE_CURL_SIGN: f64 = -1.0;

/// `A = (x₂, −x₁, 0) / (r (r + x₃))`
pub fn monopole_potential(x: &[f64]) -> Result<[f64; 3]> {
    if x.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: x.len(),
        });
    }
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r <= STRING_EPS {
        return Err(Error::SingularGauge);
    }
    let d = r + x[2];
    if d <= STRING_EPS * r {
        return Err(Error::SingularGauge);
    }
    Ok([x[1] / (r * d), -x[0] / (r * d), 0.0])
}

pub(crate) fn radius(x: &[Jet2]) -> Jet2 {
    (x[0].square() + x[1].square() + x[2].square()).sqrt()
}

/// Jet version of [`monopole_potential`] (no domain check).
pub fn monopole_jets(x: &[Jet2]) -> [Jet2; 3] {
    let r = radius(x);
    let inv = (&r * (&r + &x[2])).recip();
    [&x[1] * &inv, -(&x[0] * &inv), Jet2::constant(0.0)]
}

/// Rejects points within `fraction · r` of the monopole string `x₁ = x₂ = 0, x₃ < 0`.
pub fn string_exclusion(fraction: f64) -> Exclusion {
    Exclusion::new("monopole string", move |p| {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        r + p[2] < fraction * r
    })
}

pub fn origin_exclusion(r_min: f64) -> Exclusion {
    Exclusion::new("origin", move |p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() < r_min)
}

/// `ds² = ¼ V dx·dx + (dΨ + A·dx)² / (4V)` with `V = 1/r + c`.
///
/// `c = 0` is flat `R⁴`; `c = 1/a²` is Taub-NUT.
pub fn gibbons_hawking_metric(name: impl Into<String>, c: f64) -> MetricField {
    MetricField::new(name, 4, move |x| {
        let v = radius(x).recip() + c;
        let a = monopole_jets(x);
        let w = (4.0 * &v).recip();
        let mut g = vec![Jet2::constant(0.0); 16];
        for i in 0..3 {
            for j in i..3 {
                let mut e = &a[i] * &a[j] * &w;
                if i == j {
                    e = e + 0.25 * &v;
                }
                g[i * 4 + j] = e;
            }
            g[i * 4 + 3] = &a[i] * &w;
        }
        g[15] = w;
        g
    })
}

/// The triple
/// `ω_I = ¼V dx₁∧dx₂ + ¼ dx₃∧(dΨ + A·dx)` and cyclic, with `V = 1/r + c`.
pub fn gibbons_hawking_triple(c: f64) -> [FormField; 3] {
    let form = move |name: &str, (p, q, s): (usize, usize, usize)| {
        FormField::two_form_terms(name.to_string(), 4, move |x| {
            let v = radius(x).recip() + c;
            let a = monopole_jets(x);
            let mut t = vec![(p, q, 0.25 * v), (s, 3, Jet2::constant(0.25))];
            for (k, ak) in a.into_iter().enumerate() {
                t.push((s, k, 0.25 * ak));
            }
            t
        })
    };
    [
        form("omega_I", (0, 1, 2)),
        form("omega_J", (1, 2, 0)),
        form("omega_K", (2, 0, 1)),
    ]
}

pub fn gh_flat_metric() -> MetricField {
    gibbons_hawking_metric("gh-flat", 0.0)
}

pub fn gh_flat_triple() -> [FormField; 3] {
    gibbons_hawking_triple(0.0)
}

/// `y ↦ (x(y), Ψ(y))` with `Ψ = −2 atan2(y₁, y₂)`.
pub fn var_change() -> EmbeddingMap {
    EmbeddingMap::new("var-change", 4, 4, |y| {
        vec![
            2.0 * (&y[0] * &y[3] + &y[1] * &y[2]),
            2.0 * (&y[1] * &y[3] - &y[0] * &y[2]),
            y[0].square() + y[1].square() - y[2].square() - y[3].square(),
            -2.0 * y[0].atan2(&y[1]),
        ]
    })
}

/// Inverse of [`var_change`] on the branch `Ψ ∈ (−2π, 2π)`.
pub fn var_change_inverse() -> EmbeddingMap {
    EmbeddingMap::new("var-change^-1", 4, 4, |x| {
        let r = radius(x);
        let u2 = 0.5 * (&r + &x[2]);
        let u = u2.sqrt();
        let half = 0.5 * &x[3];
        let y1 = -(&u * half.sin());
        let y2 = &u * half.cos();
        let inv = u2.recip();
        let y3 = (&y2 * &x[0] - &y1 * &x[1]) * 0.5 * &inv;
        let y4 = (&y1 * &x[0] + &y2 * &x[1]) * 0.5 * &inv;
        vec![y1, y2, y3, y4]
    })
}

/// Flat `R⁴` triple `dy₁∧dy₂ + dy₃∧dy₄`, `dy₁∧dy₃ − dy₂∧dy₄`, `dy₁∧dy₄ + dy₂∧dy₃`.
pub fn cartesian_triple() -> [FormField; 3] {
    let one = || Jet2::constant(1.0);
    [
        FormField::two_form_terms("omega_I", 4, move |_| vec![(0, 1, one()), (2, 3, one())]),
        FormField::two_form_terms("omega_J", 4, move |_| vec![(0, 2, one()), (1, 3, -one())]),
        FormField::two_form_terms("omega_K", 4, move |_| vec![(0, 3, one()), (1, 2, one())]),
    ]
}

/// Generator `(−y₂, y₁, y₄, −y₃)` of the rotation of `R⁴` that shifts `Ψ`.
pub fn r4_rotation() -> VectorField {
    VectorField::new("R4 rotation", 4, |y| vec![-&y[1], y[0].clone(), y[3].clone(), -&y[2]])
}

/// Rejects Cartesian points near the `y₂ = 0` axis, where `Ψ` meets its branch cut.
pub fn psi_branch_exclusion(width: f64) -> Exclusion {
    Exclusion::new("psi branch", move |y| y[1].abs() < width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::fd_gradient;
    use crate::reduction::{exterior_derivative, pullback_form, pullback_metric};
    use nalgebra::DMatrix;

    const X: [f64; 3] = [0.7, -0.4, 0.3];

    #[test]
    fn monopole_values_and_domain() {
        assert_eq!(monopole_potential(&[0.0, 0.0, 1.0]).unwrap(), [0.0, 0.0, 0.0]);
        assert_eq!(monopole_potential(&[1.0, 0.0, 0.0]).unwrap(), [0.0, -1.0, 0.0]);
        assert!(matches!(monopole_potential(&[0.0, 0.0, -1.0]), Err(Error::SingularGauge)));
        assert!(matches!(monopole_potential(&[0.0, 0.0, 0.0]), Err(Error::SingularGauge)));
    }

    #[test]
    fn monopole_curl_sign() {
        let comp = |k: usize| move |p: &[f64]| Ok(monopole_potential(p)?[k]);
        let grads: Vec<Vec<f64>> = (0..3).map(|k| fd_gradient(comp(k), &X).unwrap()).collect();
        let curl = [
            grads[2][1] - grads[1][2],
            grads[0][2] - grads[2][0],
            grads[1][0] - grads[0][1],
        ];
        let r3 = X.iter().map(|v| v * v).sum::<f64>().powf(1.5);
        for i in 0..3 {
            assert!((curl[i] - MONOPOLE_CURL_SIGN * X[i] / r3).abs() < 1e-6);
        }
    }

    #[test]
    fn var_change_examples() {
        let x = var_change().eval(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(x, vec![0.0, 0.0, 1.0, 0.0]);
        let y = [0.3, 0.9, -0.5, 0.4];
        let x = var_change().eval(&y).unwrap();
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        assert!((r - y.iter().map(|v| v * v).sum::<f64>()).abs() < 1e-14);
        let back = var_change_inverse().eval(&x).unwrap();
        for i in 0..4 {
            assert!((back[i] - y[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn gh_metric_pulls_back_to_cartesian() {
        let y = [0.3, 0.9, -0.5, 0.4];
        let pb = pullback_metric(&gh_flat_metric(), &var_change(), &y).unwrap();
        assert!((pb.matrix - DMatrix::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn cartesian_triple_pulls_back_to_gh_triple() {
        let p = [X[0], X[1], X[2], 1.3];
        for (cart, gh) in cartesian_triple().iter().zip(gh_flat_triple().iter()) {
            let pb = pullback_form(cart, &var_change_inverse(), &p).unwrap();
            assert!((pb.matrix - gh.matrix(&p).unwrap()).amax() < 1e-12, "{}", gh.name());
        }
    }

    #[test]
    fn gh_triples_are_closed() {
        let p = [X[0], X[1], X[2], 0.5];
        for c in [0.0, 0.25] {
            for w in gibbons_hawking_triple(c) {
                assert!(exterior_derivative(&w, &p).unwrap().max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_shifts_psi_by_two() {
        let y = [0.3, 0.9, -0.5, 0.4];
        let j = var_change().jacobian(&y).unwrap();
        let v = nalgebra::DVector::from_vec(r4_rotation().values(&y).unwrap());
        let push = j * v;
        assert!(push.rows(0, 3).amax() < 1e-14);
        assert!((push[3] - 2.0).abs() < 1e-14);
    }
}
