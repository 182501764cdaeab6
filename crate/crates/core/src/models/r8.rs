//! `R⁴ × (R³ × S¹)` and its hyperkähler quotient, Taub-NUT.
//!
//! Cartesian chart `(y₁..y₄, X₁, X₂, X₃, θ)`; GH chart `(x₁, x₂, x₃, Ψ, X₁, X₂, X₃, θ)`;
//! level set `(x₁, x₂, x₃, χ, θ)` with `Ψ = χ + 2θ`, `X = −x/(2a)`;
//! quotient `(x₁, x₂, x₃, χ)`.

use nalgebra::DMatrix;

use super::gh::{gibbons_hawking_metric, gibbons_hawking_triple, monopole_jets, monopole_potential, radius};
use super::toy::check_radius;
use crate::error::Result;
use crate::geometry::{MetricField, VectorField};
use crate::numcore::{Jet2, ScalarField};
use crate::reduction::{EmbeddingMap, FormField, ReductionSpec};

/// `dy·dy + dX·dX + a² dθ²`
pub fn r8_cartesian_metric(a: f64) -> MetricField {
    MetricField::diagonal("r8-cartesian", 8, move |_| {
        let mut d = vec![Jet2::constant(1.0); 8];
        d[7] = Jet2::constant(a * a);
        d
    })
}

/// Flat `R⁴` triple plus the `R³ × S¹` triple
/// `dX₁∧dX₂ + dX₃∧(a dθ)`, `dX₂∧dX₃ + dX₁∧(a dθ)`, `−dX₁∧dX₃ + dX₂∧(a dθ)`.
pub fn r8_cartesian_triple(a: f64) -> [FormField; 3] {
    let c = |v: f64| Jet2::constant(v);
    [
        FormField::two_form_terms("omega_I", 8, move |_| {
            vec![(0, 1, c(1.0)), (2, 3, c(1.0)), (4, 5, c(1.0)), (6, 7, c(a))]
        }),
        FormField::two_form_terms("omega_J", 8, move |_| {
            vec![(0, 2, c(1.0)), (1, 3, c(-1.0)), (5, 6, c(1.0)), (4, 7, c(a))]
        }),
        FormField::two_form_terms("omega_K", 8, move |_| {
            vec![(0, 3, c(1.0)), (1, 2, c(1.0)), (4, 6, c(-1.0)), (5, 7, c(a))]
        }),
    ]
}

/// `V = (−y₂, y₁, y₄, −y₃, 0, 0, 0, 1)`
pub fn r8_cartesian_killing() -> VectorField {
    VectorField::new("V", 8, |y| {
        let z = Jet2::constant(0.0);
        vec![-&y[1], y[0].clone(), y[3].clone(), -&y[2], z.clone(), z.clone(), z, Jet2::constant(1.0)]
    })
}

fn hopf(y: &[Jet2]) -> [Jet2; 3] {
    [
        2.0 * (&y[0] * &y[3] + &y[1] * &y[2]),
        2.0 * (&y[1] * &y[3] - &y[0] * &y[2]),
        y[0].square() + y[1].square() - y[2].square() - y[3].square(),
    ]
}

/// `μ_I = x₃/2 + aX₃`, `μ_J = x₁/2 + aX₁`, `μ_K = x₂/2 + aX₂` on the Cartesian chart.
pub fn r8_moment_maps(a: f64) -> [ScalarField; 3] {
    let mu = move |name: &str, k: usize| {
        ScalarField::new(name.to_string(), 8, move |y| 0.5 * hopf(y)[k].clone() + a * &y[4 + k])
    };
    [mu("mu_I", 2), mu("mu_J", 0), mu("mu_K", 1)]
}

/// Flat GH metric on the `R⁴` factor plus `dX·dX + a² dθ²`.
pub fn r8_gh_metric(a: f64) -> MetricField {
    let gh = gibbons_hawking_metric("gh", 0.0).field().closure();
    MetricField::new("r8-parent", 8, move |x| {
        let g4 = gh(&x[..4]);
        let mut g = vec![Jet2::constant(0.0); 64];
        for i in 0..4 {
            for j in 0..4 {
                g[i * 8 + j] = g4[i * 4 + j].clone();
            }
        }
        for i in 4..7 {
            g[i * 8 + i] = Jet2::constant(1.0);
        }
        g[63] = Jet2::constant(a * a);
        g
    })
}

/// Triple on the GH chart of `R⁸`.
pub fn r8_gh_triple(a: f64) -> [FormField; 3] {
    let flat = gibbons_hawking_triple(0.0);
    let extra: [[(usize, usize, f64); 2]; 3] = [
        [(4, 5, 1.0), (6, 7, a)],
        [(5, 6, 1.0), (4, 7, a)],
        [(4, 6, -1.0), (5, 7, a)],
    ];
    let mut out = Vec::with_capacity(3);
    for (w, ex) in flat.into_iter().zip(extra) {
        let inner = w.field().closure();
        out.push(FormField::two_form(w.name().to_string(), 8, move |x| {
            let w4 = inner(&x[..4]);
            let mut m = vec![Jet2::constant(0.0); 64];
            for i in 0..4 {
                for j in 0..4 {
                    m[i * 8 + j] = w4[i * 4 + j].clone();
                }
            }
            for &(i, j, c) in &ex {
                m[i * 8 + j] = Jet2::constant(c);
            }
            m
        }));
    }
    let [i, j, k]: [FormField; 3] = out.try_into().expect("three forms");
    [i, j, k]
}

/// `V = 2∂_Ψ + ∂_θ`
pub fn r8_gh_killing() -> VectorField {
    VectorField::constant("V", vec![0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0])
}

/// `(x, χ, θ) ↦ (x, χ + 2θ, −x/(2a), θ)`
pub fn r8_level(a: f64) -> EmbeddingMap {
    let mut m = DMatrix::zeros(8, 5);
    for i in 0..3 {
        m[(i, i)] = 1.0;
        m[(4 + i, i)] = -0.5 / a;
    }
    m[(3, 3)] = 1.0;
    m[(3, 4)] = 2.0;
    m[(7, 4)] = 1.0;
    EmbeddingMap::affine("r8-level", m, vec![0.0; 8])
}

/// Closed-form level-set metric
/// `¼(1/r + 1/a²) dx² + (r/4)(dχ + 2dθ + A·dx)² + a² dθ²` in `(x, χ, θ)`.
pub fn d5_metric(a: f64) -> MetricField {
    MetricField::new("d5", 5, move |x| {
        let r = radius(x);
        let v = r.recip() + 1.0 / (a * a);
        let am = monopole_jets(x);
        // one-form dχ + 2dθ + A·dx
        let e = [am[0].clone(), am[1].clone(), am[2].clone(), Jet2::constant(1.0), Jet2::constant(2.0)];
        let w = 0.25 * &r;
        let mut g = vec![Jet2::constant(0.0); 25];
        for i in 0..5 {
            for j in i..5 {
                let mut c = &w * &e[i] * &e[j];
                if i == j && i < 3 {
                    c = c + 0.25 * &v;
                }
                g[i * 5 + j] = c;
            }
        }
        g[24] = &g[24] + a * a;
        g
    })
}

pub fn taub_nut_reduction(a: f64) -> Result<ReductionSpec> {
    check_radius(a)?;
    ReductionSpec::new(
        "taub-nut",
        r8_gh_metric(a),
        r8_gh_triple(a).into(),
        r8_gh_killing(),
        r8_level(a),
        vec![0, 1, 2, 3],
        4,
    )
}

/// Taub-NUT metric field over `(x, χ)`.
pub fn taub_nut_metric_field(a: f64) -> MetricField {
    gibbons_hawking_metric("taub-nut", 1.0 / (a * a))
}

/// Taub-NUT triple: the flat GH triple with `1/r → 1/r + 1/a²`.
pub fn taub_nut_triple_forms(a: f64) -> [FormField; 3] {
    gibbons_hawking_triple(1.0 / (a * a))
}

/// `¼(1/r + 1/a²) dx² + (dχ + A·dx)² / (4(1/r + 1/a²))` at `x`.
pub fn taub_nut_metric(x: &[f64], a: f64) -> Result<DMatrix<f64>> {
    check_radius(a)?;
    let am = monopole_potential(x)?;
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let v = 1.0 / r + 1.0 / (a * a);
    let e = [am[0], am[1], am[2], 1.0];
    Ok(DMatrix::from_fn(4, 4, |i, j| {
        e[i] * e[j] / (4.0 * v) + if i == j && i < 3 { 0.25 * v } else { 0.0 }
    }))
}

/// The three Taub-NUT Kähler forms at `(x, χ)`.
pub fn taub_nut_triple(x: &[f64], a: f64) -> Result<[DMatrix<f64>; 3]> {
    check_radius(a)?;
    let am = monopole_potential(x)?;
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let v = 1.0 / r + 1.0 / (a * a);
    let e = [am[0], am[1], am[2], 1.0];
    let build = |(p, q, s): (usize, usize, usize)| {
        let mut w = DMatrix::zeros(4, 4);
        let mut add = |i: usize, j: usize, c: f64| {
            w[(i, j)] += c;
            w[(j, i)] -= c;
        };
        add(p, q, 0.25 * v);
        for (k, ek) in e.iter().enumerate() {
            if k != s {
                add(s, k, 0.25 * ek);
            }
        }
        w
    };
    Ok([build((0, 1, 2)), build((1, 2, 0)), build((2, 0, 1))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::killing_deviation;
    use crate::models::gh::gh_flat_metric;
    use crate::reduction::{contract, pullback_metric};

    #[test]
    fn moment_map_example() {
        let mu = r8_moment_maps(2.0);
        assert_eq!(mu[0].value(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), 0.5);
    }

    #[test]
    fn cartesian_contractions_are_moment_map_gradients() {
        let a = 1.3;
        let p = [0.3, -0.8, 0.5, 1.1, 0.2, -0.4, 0.9, 2.0];
        for (w, mu) in r8_cartesian_triple(a).iter().zip(r8_moment_maps(a).iter()) {
            let c = contract(w, &r8_cartesian_killing(), &p).unwrap();
            let jet = crate::numcore::evaluate_jet(mu, &p).unwrap();
            for m in 0..8 {
                assert!((c[m] - jet.d(m)).abs() < 1e-14, "{} {m}", w.name());
            }
        }
    }

    #[test]
    fn killing_vectors() {
        let p = [0.3, -0.8, 0.5, 1.1, 0.2, -0.4, 0.9, 2.0];
        assert!(killing_deviation(&r8_cartesian_metric(2.0), &r8_cartesian_killing(), &p).unwrap().amax() < 1e-15);
        let q = [0.4, 0.5, -0.2, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert!(killing_deviation(&r8_gh_metric(2.0), &r8_gh_killing(), &q).unwrap().amax() < 1e-15);
    }

    #[test]
    fn taub_nut_values() {
        let m = taub_nut_metric(&[0.0, 0.0, 1.0], 1.0).unwrap();
        let mut expect = DMatrix::from_diagonal_element(4, 4, 0.5);
        expect[(3, 3)] = 0.125;
        assert!((m - expect).amax() < 1e-15);
        let x = [0.4, -0.7, 0.2];
        let big = taub_nut_metric(&x, 1e6).unwrap();
        let flat = gh_flat_metric().matrix(&[x[0], x[1], x[2], 0.0]).unwrap();
        assert!((big - flat).amax() < 1e-5);
        let field = taub_nut_metric_field(0.7).matrix(&[x[0], x[1], x[2], 0.3]).unwrap();
        assert!((field - taub_nut_metric(&x, 0.7).unwrap()).amax() < 1e-15);
    }

    #[test]
    fn level_pullback_is_d5() {
        let a = 0.8;
        let p = [0.4, -0.7, 0.2, 1.0, 0.6];
        let pb = pullback_metric(&r8_gh_metric(a), &r8_level(a), &p).unwrap();
        assert!((pb.matrix - d5_metric(a).matrix(&p).unwrap()).amax() < 1e-13);
    }

    #[test]
    fn triple_closed_form_matches_fields() {
        let x = [0.4, -0.7, 0.2];
        let vals = taub_nut_triple(&x, 1.5).unwrap();
        for (v, f) in vals.iter().zip(taub_nut_triple_forms(1.5).iter()) {
            assert!((v - f.matrix(&[x[0], x[1], x[2], 0.0]).unwrap()).amax() < 1e-15);
        }
    }
}
