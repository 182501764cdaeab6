use num_complex::Complex64;

use super::hermitian::HermitianMetricField;
use crate::error::{Error, Result};
use crate::numcore::Jet2;

/// Complex number with jet parts.
#[derive(Clone, Debug)]
struct CJet {
    re: Jet2,
    im: Jet2,
}

impl CJet {
    fn mul_conj(&self, other: &CJet) -> CJet {
        // self · conj(other)
        CJet {
            re: &self.re * &other.re + &self.im * &other.im,
            im: &self.im * &other.re - &self.re * &other.im,
        }
    }

    fn norm_sqr(&self) -> Jet2 {
        self.re.square() + self.im.square()
    }
}

/// Trace `ω_{aā}` of the Kähler spin connection along `dz^m` and `dz̄^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinTrace {
    /// `∂_m ln det e`
    pub holomorphic: Vec<Complex64>,
    /// `∂_{m̄} ln det e`
    pub antiholomorphic: Vec<Complex64>,
}

impl SpinTrace {
    pub fn max_abs(&self) -> f64 {
        self.holomorphic
            .iter()
            .chain(&self.antiholomorphic)
            .fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// `ln det e` with `e` the lower-triangular Cholesky vielbein, `h = e e†`.
fn ln_det_vielbein(h: &HermitianMetricField, p: &[f64]) -> Result<Jet2> {
    let n = h.complex_dim();
    let jet = h.jets(p)?;
    let entry = |j: usize, k: usize| CJet {
        re: jet.re(j, k).clone(),
        im: jet.im(j, k).clone(),
    };
    let mut e: Vec<Option<CJet>> = vec![None; n * n];
    let mut diag: Vec<Jet2> = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = entry(j, j).re;
        for k in 0..j {
            d = d - e[j * n + k].as_ref().unwrap().norm_sqr();
        }
        if !(d.value() > 0.0) {
            return Err(Error::Domain(format!("`{}` is not positive-definite", h.name())));
        }
        let ljj = d.sqrt();
        let inv = ljj.recip();
        for i in j + 1..n {
            let mut s = entry(i, j);
            for k in 0..j {
                let t = e[i * n + k].as_ref().unwrap().mul_conj(e[j * n + k].as_ref().unwrap());
                s = CJet {
                    re: s.re - t.re,
                    im: s.im - t.im,
                };
            }
            e[i * n + j] = Some(CJet {
                re: &s.re * &inv,
                im: &s.im * &inv,
            });
        }
        diag.push(ljj);
    }
    Ok(diag.iter().map(Jet2::ln).fold(Jet2::constant(0.0), |a, b| a + b))
}

pub fn spin_connection_trace(h: &HermitianMetricField, p: &[f64]) -> Result<SpinTrace> {
    let l = ln_det_vielbein(h, p)?;
    let n = h.complex_dim();
    let w = |m: usize, sign: f64| Complex64::new(0.5 * l.d(2 * m), 0.5 * sign * l.d(2 * m + 1));
    Ok(SpinTrace {
        holomorphic: (0..n).map(|m| w(m, -1.0)).collect(),
        antiholomorphic: (0..n).map(|m| w(m, 1.0)).collect(),
    })
}
