use nalgebra::DMatrix;

use super::metric::{MetricField, MetricJet, VectorField};
use crate::error::{Error, Result};
use crate::numcore::Field;

/// Dense `n × n × n` array, row-major in `(i, j, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Array3 {
    n: usize,
    data: Vec<f64>,
}

impl Array3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Christoffel symbols `Γ^s_{mn}` stored at `(s, m, n)`.
pub type Christoffel = Array3;

/// Levi-Civita connection of `g` at `p`.
pub fn christoffel(g: &MetricField, p: &[f64]) -> Result<Christoffel> {
    let mj = g.jets(p)?;
    let ginv = mj.inverse(g.name())?;
    Ok(christoffel_from_jet(&mj, &ginv))
}

/// `Γ_{q,mn} = ∂_m g_qn + ∂_n g_qm − ∂_q g_mn` (twice the first-kind symbol).
fn first_kind(mj: &MetricJet, q: usize, m: usize, n: usize) -> f64 {
    mj.d(m, q, n) + mj.d(n, q, m) - mj.d(q, m, n)
}

pub(crate) fn christoffel_from_jet(mj: &MetricJet, ginv: &DMatrix<f64>) -> Christoffel {
    let n = mj.dim();
    let mut gamma = Array3::zeros(n);
    for a in 0..n {
        for m in 0..n {
            for k in m..n {
                let v: f64 = (0..n)
                    .map(|q| ginv[(a, q)] * first_kind(mj, q, m, k))
                    .sum::<f64>()
                    * 0.5;
                gamma.set(a, m, k, v);
                gamma.set(a, k, m, v);
            }
        }
    }
    gamma
}

/// `∂_c Γ^a_{mn}` stored as `out[c]` = Γ-shaped array.
pub(crate) fn christoffel_derivatives(mj: &MetricJet, ginv: &DMatrix<f64>) -> Vec<Array3> {
    let n = mj.dim();
    (0..n)
        .map(|c| {
            // ∂_c g⁻¹ = −g⁻¹ (∂_c g) g⁻¹
            let dg = DMatrix::from_fn(n, n, |i, j| mj.d(c, i, j));
            let dginv = -(ginv * dg * ginv);
            let mut out = Array3::zeros(n);
            for a in 0..n {
                for m in 0..n {
                    for k in m..n {
                        let v: f64 = (0..n)
                            .map(|q| {
                                let dfirst = mj.dd(c, m, q, k) + mj.dd(c, k, q, m) - mj.dd(c, q, m, k);
                                dginv[(a, q)] * first_kind(mj, q, m, k) + ginv[(a, q)] * dfirst
                            })
                            .sum::<f64>()
                            * 0.5;
                        out.set(a, m, k, v);
                        out.set(a, k, m, v);
                    }
                }
            }
            out
        })
        .collect()
}

/// `∇_P T_{MN} = ∂_P T_{MN} − Γ^S_{PM} T_{SN} − Γ^S_{PN} T_{MS}`, stored at `(P, M, N)`.
///
/// `t` is any rank-(0,2) field with `dim²` row-major components.
pub fn covariant_derivative_02(g: &MetricField, t: &Field, p: &[f64]) -> Result<Array3> {
    let n = g.dim();
    if t.dim() != n || t.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: t.len(),
        });
    }
    let gamma = christoffel(g, p)?;
    let tj = t.jets(p)?;
    let tv = |m: usize, k: usize| tj[m * n + k].value();
    let mut out = Array3::zeros(n);
    for q in 0..n {
        for m in 0..n {
            for k in 0..n {
                let mut v = tj[m * n + k].d(q);
                for s in 0..n {
                    v -= gamma.get(s, q, m) * tv(s, k) + gamma.get(s, q, k) * tv(m, s);
                }
                out.set(q, m, k, v);
            }
        }
    }
    Ok(out)
}

/// Lie derivative `(L_V g)_{MN} = V^P ∂_P g_{MN} + g_{PN} ∂_M V^P + g_{MP} ∂_N V^P`.
pub fn killing_deviation(g: &MetricField, v: &VectorField, p: &[f64]) -> Result<DMatrix<f64>> {
    let n = g.dim();
    if v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    let mj = g.jets(p)?;
    let vj = v.jets(p)?;
    Ok(DMatrix::from_fn(n, n, |m, k| {
        (0..n)
            .map(|q| {
                vj[q].value() * mj.d(q, m, k)
                    + mj.value(q, k) * vj[q].d(m)
                    + mj.value(m, q) * vj[q].d(k)
            })
            .sum()
    }))
}
