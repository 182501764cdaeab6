use std::f64::consts::PI;

use super::connection::{christoffel_derivatives, christoffel_from_jet};
use super::metric::MetricField;
use crate::error::{Error, Result};
use crate::numcore::quadrature::{integrate_half_line, Integral};

/// Riemann tensor `R^a_{bcd}` with
/// `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{cs} Γ^s_{db} − Γ^a_{ds} Γ^s_{cb}`.
#[derive(Clone, Debug)]
pub struct Riemann {
    n: usize,
    data: Vec<f64>,
    ginv: nalgebra::DMatrix<f64>,
}

impl Riemann {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.n;
        self.data[((a * n + b) * n + c) * n + d]
    }

    /// `R_{bd} = R^a_{bad}`
    pub fn ricci(&self, b: usize, d: usize) -> f64 {
        (0..self.n).map(|a| self.get(a, b, a, d)).sum()
    }

    pub fn scalar(&self) -> f64 {
        let n = self.n;
        (0..n)
            .flat_map(|b| (0..n).map(move |d| (b, d)))
            .map(|(b, d)| self.ginv[(b, d)] * self.ricci(b, d))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn riemann(g: &MetricField, p: &[f64]) -> Result<Riemann> {
    let n = g.dim();
    let mj = g.jets(p)?;
    let ginv = mj.inverse(g.name())?;
    let gamma = christoffel_from_jet(&mj, &ginv);
    let dgamma = christoffel_derivatives(&mj, &ginv);
    let mut data = vec![0.0; n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut v = dgamma[c].get(a, d, b) - dgamma[d].get(a, c, b);
                    for s in 0..n {
                        v += gamma.get(a, c, s) * gamma.get(s, d, b)
                            - gamma.get(a, d, s) * gamma.get(s, c, b);
                    }
                    data[((a * n + b) * n + c) * n + d] = v;
                }
            }
        }
    }
    Ok(Riemann { n, data, ginv })
}

pub fn scalar_curvature(g: &MetricField, p: &[f64]) -> Result<f64> {
    Ok(riemann(g, p)?.scalar())
}

/// Gaussian curvature `K = R_{1212} / det g` of a 2D metric, positive on the
/// round sphere.
///
/// Orthogonal charts use `K = −(∂_u(∂_u√G/√E) + ∂_v(∂_v√E/√G)) / √(EG)`,
/// which stays well conditioned where `G → 0` (polar-type origins); otherwise
/// the Brioschi formula.
pub fn gaussian_curvature(g: &MetricField, p: &[f64]) -> Result<f64> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: g.dim(),
        });
    }
    let mj = g.jets(p)?;
    g.check_positive(p)?;
    let (e, f, gg) = (mj.entry(0, 0), mj.entry(0, 1), mj.entry(1, 1));
    let orthogonal =
        f.value() == 0.0 && f.gradient().iter().all(|&d| d == 0.0) && (0..2).all(|i| (0..2).all(|k| f.hessian(i, k) == 0.0));
    if orthogonal {
        let se = e.sqrt();
        let sg = gg.sqrt();
        let u_term = sg.hessian(0, 0) / se.value() - sg.d(0) * se.d(0) / e.value();
        let v_term = se.hessian(1, 1) / sg.value() - se.d(1) * sg.d(1) / gg.value();
        return Ok(-(u_term + v_term) / (se.value() * sg.value()));
    }
    // Brioschi, derivatives with respect to (u, v) = coordinates (0, 1).
    let (ev, fv, gv) = (e.value(), f.value(), gg.value());
    let (e_u, e_v) = (e.d(0), e.d(1));
    let (f_u, f_v) = (f.d(0), f.d(1));
    let (g_u, g_v) = (gg.d(0), gg.d(1));
    let e_vv = e.hessian(1, 1);
    let f_uv = f.hessian(0, 1);
    let g_uu = gg.hessian(0, 0);
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a = det3([
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, ev, fv],
        [0.5 * g_v, fv, gv],
    ]);
    let b = det3([
        [0.0, 0.5 * e_v, 0.5 * g_u],
        [0.5 * e_v, ev, fv],
        [0.5 * g_u, fv, gv],
    ]);
    let w = ev * gv - fv * fv;
    Ok((a - b) / (w * w))
}

/// Radius below which [`gaussian_curvature_polar`] extrapolates.
pub const POLAR_CORE: f64 = 1e-3;

/// Gaussian curvature of a rotationally symmetric metric on a polar chart
/// `(r, angle)`.
///
/// Near `r = 0` the curvature is carried by an `O(r²)` relative correction
/// to `G''`, so jets lose about `2 log₁₀(1/r)` digits. Below [`POLAR_CORE`]
/// the curvature is evaluated at `r_k = POLAR_CORE · (1, 1.5, 2, 2.5)` and
/// extrapolated as a cubic in `r²`.
pub fn gaussian_curvature_polar(g: &MetricField, r: f64, angle: f64) -> Result<f64> {
    if r >= POLAR_CORE {
        return gaussian_curvature(g, &[r, angle]);
    }
    let nodes: Vec<(f64, f64)> = [1.0, 1.5, 2.0, 2.5]
        .iter()
        .map(|k| {
            let rk = POLAR_CORE * k;
            Ok((rk * rk, gaussian_curvature(g, &[rk, angle])?))
        })
        .collect::<Result<_>>()?;
    let s = r * r;
    Ok(nodes
        .iter()
        .enumerate()
        .map(|(i, &(si, ki))| {
            let w: f64 = nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &(sj, _))| (s - sj) / (si - sj))
                .product();
            w * ki
        })
        .sum())
}

/// Radial chart description for the Gauss–Bonnet integral: coordinates
/// `(r, angle)` with `r ∈ [0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialDomain {
    /// Scale of the map `r = scale·u/(1−u)`.
    pub scale: f64,
    /// Curvature is evaluated at `max(r, r_min)` to stay off the degenerate origin.
    pub r_min: f64,
    /// Fixed value of the angular coordinate.
    pub angle: f64,
}

impl RadialDomain {
    pub fn new(scale: f64) -> Self {
        Self {
            scale,
            r_min: 1e-6,
            angle: 0.0,
        }
    }
}

/// `(period / 2π) ∫_0^∞ K √g dr` for a metric whose integrand does not depend
/// on the angular coordinate. The returned `abs_error` is the quadrature
/// error estimate.
pub fn euler_characteristic(g: &MetricField, domain: RadialDomain, period: f64) -> Result<Integral> {
    let density = |r: f64, angle: f64| -> Result<f64> {
        let k = gaussian_curvature(g, &[r.max(domain.r_min), angle])?;
        let m = g.matrix(&[r, angle])?;
        Ok(k * m.determinant().max(0.0).sqrt())
    };
    for r in [0.5, 1.0, 2.0].map(|s| s * domain.scale) {
        let a = density(r, domain.angle)?;
        let b = density(r, domain.angle + period / 3.0)?;
        let deviation = (a - b).abs();
        if deviation > 1e-9 * (1.0 + a.abs()) {
            return Err(Error::NotRotational { deviation });
        }
    }
    let integral = integrate_half_line(|r| density(r, domain.angle), domain.scale, 1e-10)?;
    let factor = period / (2.0 * PI);
    Ok(Integral {
        value: factor * integral.value,
        abs_error: factor * integral.abs_error,
    })
}
