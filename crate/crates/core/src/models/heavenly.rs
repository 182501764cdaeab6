//! Non-constant Kähler metrics for the heavenly-condition checks.
//!
//! `monge_ampere` comes from `𝒦 = 4φ(Re z)` with `φ` radial in `(u¹, u²)` and
//! `φ' = √(ρ² + c²)`, so `h = Hess φ` has unit determinant. The `n = 4`
//! version is a direct sum composed with a real symplectic transvection.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kahler::{HermitianMetricField, SymplecticMatrix};
use crate::numcore::{Exclusion, Jet2, ScalarField};

/// `Hess φ = (s/ρ) 1 − c² u uᵀ / (s ρ³)`, `s = √(ρ² + c²)`, row-major 2×2.
fn radial_hessian(u1: &Jet2, u2: &Jet2, c: f64) -> [Jet2; 4] {
    let rho2 = u1.square() + u2.square();
    let rho = rho2.sqrt();
    let s = (&rho2 + c * c).sqrt();
    let iso = &s / &rho;
    let k = -c * c * (&s * &rho * &rho2).recip();
    [
        &iso + &k * u1.square(),
        &k * u1 * u2,
        &k * u1 * u2,
        &iso + &k * u2.square(),
    ]
}

/// `φ(ρ) = ½(ρ s + c² asinh(ρ/c))`
fn radial_potential(u1: &Jet2, u2: &Jet2, c: f64) -> Jet2 {
    let rho = (u1.square() + u2.square()).sqrt();
    let s = (rho.square() + c * c).sqrt();
    0.5 * (&rho * &s + c * c * (&rho / c).asinh())
}

/// Symplectic transvection `S = 1 + t v vᵀ Ω` mixing the two blocks.
fn transvection(t: f64) -> DMatrix<f64> {
    let omega = SymplecticMatrix::new(4).expect("even").real();
    let v = nalgebra::DVector::from_vec(vec![1.0, 0.0, 0.5, -1.0]);
    DMatrix::identity(4, 4) + t * &v * v.transpose() * omega
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("Monge–Ampère parameter must be positive, got {c}")))
    }
}

/// Unimodular Kähler metric with constant `C = 1`, `n ∈ {2, 4}`.
pub fn monge_ampere(n: usize, c: f64) -> Result<HermitianMetricField> {
    check_c(c)?;
    match n {
        2 => Ok(HermitianMetricField::new(format!("monge-ampere-2(c={c})"), 2, move |x| {
            let h = radial_hessian(&x[0], &x[2], c);
            let z = Jet2::constant(0.0);
            h.into_iter().chain(std::iter::repeat_n(z, 4)).collect()
        })
        .with_potential(ScalarField::new("K", 4, move |x| 4.0 * radial_potential(&x[0], &x[2], c)))),
        4 => {
            let s = transvection(0.6);
            let st = s.clone();
            let su = s.clone();
            let metric = HermitianMetricField::new(format!("monge-ampere-4(c={c})"), 4, move |x| {
                let u: Vec<Jet2> = (0..4)
                    .map(|i| (0..4).fold(Jet2::constant(0.0), |acc, k| acc + st[(i, k)] * &x[2 * k]))
                    .collect();
                let b1 = radial_hessian(&u[0], &u[1], c);
                let b2 = radial_hessian(&u[2], &u[3], c);
                let big = |i: usize, j: usize| -> Option<&Jet2> {
                    match (i / 2, j / 2) {
                        (0, 0) => Some(&b1[(i % 2) * 2 + j % 2]),
                        (1, 1) => Some(&b2[(i % 2) * 2 + j % 2]),
                        _ => None,
                    }
                };
                // h' = Sᵀ H S
                let mut out = vec![Jet2::constant(0.0); 32];
                for a in 0..4 {
                    for b in a..4 {
                        let mut acc = Jet2::constant(0.0);
                        for i in 0..4 {
                            for j in 0..4 {
                                let coef = st[(i, a)] * st[(j, b)];
                                if coef == 0.0 {
                                    continue;
                                }
                                if let Some(e) = big(i, j) {
                                    acc = acc + coef * e;
                                }
                            }
                        }
                        out[a * 4 + b] = acc;
                    }
                }
                out
            });
            Ok(metric.with_potential(ScalarField::new("K", 8, move |x| {
                let u: Vec<Jet2> = (0..4)
                    .map(|i| (0..4).fold(Jet2::constant(0.0), |acc, k| acc + su[(i, k)] * &x[2 * k]))
                    .collect();
                4.0 * (radial_potential(&u[0], &u[1], c) + radial_potential(&u[2], &u[3], c))
            })))
        }
        _ => Err(Error::InvalidSpec(format!("Monge–Ampère fixture defined for n = 2, 4; got {n}"))),
    }
}

/// Rejects points where a radial block of [`monge_ampere`] is near its
/// singular centre.
pub fn monge_ampere_exclusion(n: usize, rho_min: f64) -> Exclusion {
    let s = transvection(0.6);
    Exclusion::new("monge-ampere centre", move |p| {
        let u: Vec<f64> = if n == 4 {
            (0..4).map(|i| (0..4).map(|k| s[(i, k)] * p[2 * k]).sum()).collect()
        } else {
            vec![p[0], p[2]]
        };
        u.chunks(2).any(|b| (b[0] * b[0] + b[1] * b[1]).sqrt() < rho_min)
    })
}

/// Kähler but not unimodular: `h = diag(1 + |z¹|², 1)`.
pub fn non_unimodular() -> HermitianMetricField {
    HermitianMetricField::new("diag(1+|z1|^2,1)", 2, |x| {
        let z = Jet2::constant(0.0);
        vec![
            1.0 + x[0].square() + x[1].square(),
            z.clone(),
            z.clone(),
            Jet2::constant(1.0),
            z.clone(),
            z.clone(),
            z.clone(),
            z,
        ]
    })
    .with_potential(ScalarField::new("K", 4, |x| {
        let zz = x[0].square() + x[1].square();
        &zz + 0.25 * zz.square() + x[2].square() + x[3].square()
    }))
}
