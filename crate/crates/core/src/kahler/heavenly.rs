use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hermitian::HermitianMetricField;
use super::symplectic::SymplecticMatrix;
use crate::error::{Error, Result};

/// Proportionality of `M = h Ω hᵀ` to `Ω` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Proportionality {
    /// `⟨M, Ω⟩ / ⟨Ω, Ω⟩`
    pub c: f64,
    /// `‖M − CΩ‖_∞`
    pub residual: f64,
    /// `1e-10 · max(1, ‖M‖_∞)`
    pub tolerance: f64,
}

impl Proportionality {
    pub fn holds(&self) -> bool {
        self.residual <= self.tolerance
    }
}

pub fn proportionality(h: &DMatrix<Complex64>, omega: &SymplecticMatrix) -> Result<Proportionality> {
    let n = omega.dim();
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.nrows(),
        });
    }
    let o = omega.complex();
    let m = h * &o * h.transpose();
    let c = m.iter().zip(o.iter()).map(|(a, b)| (b.conj() * a).re).sum::<f64>()
        / o.iter().map(|b| b.norm_sqr()).sum::<f64>();
    let residual = (&m - &o * Complex64::new(c, 0.0)).iter().fold(0.0f64, |r, z| r.max(z.norm()));
    let scale = m.iter().fold(0.0f64, |r, z| r.max(z.norm()));
    Ok(Proportionality {
        c,
        residual,
        tolerance: 1e-10 * scale.max(1.0),
    })
}

/// Pointwise heavenly condition `h_{ik̄} h_{jl̄} Ω^{k̄l̄} = C Ω_{ij}`; returns `C`.
pub fn heavenly_check(h: &DMatrix<Complex64>, omega: &SymplecticMatrix) -> Result<f64> {
    let p = proportionality(h, omega)?;
    if !p.holds() {
        return Err(Error::ConditionViolated {
            c: p.c,
            residual: p.residual,
        });
    }
    if p.c <= 0.0 {
        return Err(Error::NonPositive { c: p.c });
    }
    Ok(p.c)
}

/// Heavenly condition over a set of points, with pointwise proportionality
/// and constancy of `C` reported separately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeavenlySweep {
    pub points: usize,
    /// Largest pointwise `residual / tolerance`; `≤ 1` means proportional everywhere.
    pub worst_ratio: f64,
    pub max_residual: f64,
    pub c_min: f64,
    pub c_max: f64,
}

impl HeavenlySweep {
    pub fn proportional(&self) -> bool {
        self.worst_ratio <= 1.0
    }

    pub fn c_spread(&self) -> f64 {
        self.c_max - self.c_min
    }

    /// Constancy of `C` at the proportionality tolerance scale.
    pub fn constant(&self, tol: f64) -> bool {
        self.c_spread() <= tol * self.c_max.abs().max(1.0)
    }
}

pub fn heavenly_sweep<P: AsRef<[f64]>>(
    h: &HermitianMetricField,
    omega: &SymplecticMatrix,
    points: &[P],
) -> Result<HeavenlySweep> {
    let mut s = HeavenlySweep {
        points: 0,
        worst_ratio: 0.0,
        max_residual: 0.0,
        c_min: f64::INFINITY,
        c_max: f64::NEG_INFINITY,
    };
    for p in points {
        let r = proportionality(&h.matrix(p.as_ref())?, omega)?;
        s.points += 1;
        s.worst_ratio = s.worst_ratio.max(r.residual / r.tolerance);
        s.max_residual = s.max_residual.max(r.residual);
        s.c_min = s.c_min.min(r.c);
        s.c_max = s.c_max.max(r.c);
    }
    Ok(s)
}

/// `max_p ‖X_p Ω + Ω X_pᵀ‖_∞` with `(X_p)_m^s = 2 h^{q̄s} ∂_p h_{mq̄}`.
pub fn sp_algebra_residual(h: &HermitianMetricField, omega: &SymplecticMatrix, p: &[f64]) -> Result<f64> {
    let jet = h.jets(p)?;
    let hinv = jet
        .value()
        .try_inverse()
        .ok_or_else(|| Error::Domain(format!("`{}` is singular", h.name())))?;
    let o = omega.complex();
    let mut worst = 0.0f64;
    for m in 0..h.complex_dim() {
        let x = jet.d_holomorphic(m) * &hinv * Complex64::new(2.0, 0.0);
        let r = &x * &o + &o * x.transpose();
        worst = r.iter().fold(worst, |w, z| w.max(z.norm()));
    }
    Ok(worst)
}
