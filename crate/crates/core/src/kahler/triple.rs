use nalgebra::DMatrix;

use super::heavenly::proportionality;
use super::hermitian::HermitianMetricField;
use super::symplectic::SymplecticMatrix;
use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::numcore::Jet2;
use crate::reduction::FormField;

/// Three real `2n × 2n` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub i: DMatrix<f64>,
    pub j: DMatrix<f64>,
    pub k: DMatrix<f64>,
}

impl Triple {
    pub fn as_array(&self) -> [&DMatrix<f64>; 3] {
        [&self.i, &self.j, &self.k]
    }

    /// Mixed tensors from lowered forms, fixed by `ω(U, W) = g(IU, W)`,
    /// i.e. `I = −g⁻¹ω`.
    pub fn raise(&self, g: &DMatrix<f64>) -> Result<Triple> {
        let ginv = g
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Domain("real metric is not positive-definite".into()))?
            .inverse();
        Ok(Triple {
            i: -(&ginv * &self.i),
            j: -(&ginv * &self.j),
            k: -(&ginv * &self.k),
        })
    }

    /// `max(‖I²+1‖, ‖J²+1‖, ‖K²+1‖, ‖IJ−K‖, ‖JK−I‖, ‖KI−J‖)` for mixed tensors.
    pub fn quaternion_residual(&self) -> f64 {
        let n = self.i.nrows();
        let one = DMatrix::<f64>::identity(n, n);
        [
            &self.i * &self.i + &one,
            &self.j * &self.j + &one,
            &self.k * &self.k + &one,
            &self.i * &self.j - &self.k,
            &self.j * &self.k - &self.i,
            &self.k * &self.i - &self.j,
        ]
        .iter()
        .fold(0.0, |m, r| m.max(r.amax()))
    }

    /// `‖IJ − K‖_∞`
    pub fn product_residual(&self) -> f64 {
        (&self.i * &self.j - &self.k).amax()
    }
}

/// Triple values at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleValue {
    /// Antisymmetric `I_{MN}, J_{MN}, K_{MN}` (Kähler forms).
    pub lowered: Triple,
    /// `I^M_N, J^M_N, K^M_N`.
    pub mixed: Triple,
    /// Normalization used for `J` and `K`.
    pub c: f64,
}

fn form_blocks(
    n: usize,
    c: f64,
    omega: &DMatrix<f64>,
) -> (
    impl Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    impl Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
) {
    let m = 2 * n;
    let s = c.sqrt();
    let mut jv = vec![0.0; m * m];
    let mut kv = vec![0.0; m * m];
    for a in 0..n {
        for b in 0..n {
            let o = omega[(a, b)] * s;
            jv[(2 * a) * m + 2 * b] = o;
            jv[(2 * a + 1) * m + 2 * b + 1] = -o;
            kv[(2 * a) * m + 2 * b + 1] = o;
            kv[(2 * a + 1) * m + 2 * b] = o;
        }
    }
    (move |_: &[Jet2]| Jet2::constants(&jv), move |_: &[Jet2]| Jet2::constants(&kv))
}

/// `ω_I(U, W) = −Im(h_{jk̄} U^j W̄^k)`, `ω_J + iω_K = √C Ω_{jk} U^j W^k`.
///
/// With `h = 1` these are `dy¹∧dy² + dy³∧dy⁴`, `dy¹∧dy³ − dy²∧dy⁴` and
/// `dy¹∧dy⁴ + dy²∧dy³` on each pair of complex coordinates.
pub fn triple_forms(h: &HermitianMetricField, omega: &SymplecticMatrix, c: f64) -> Result<[FormField; 3]> {
    let n = h.complex_dim();
    if omega.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: omega.dim(),
        });
    }
    if !(c > 0.0) {
        return Err(Error::NonPositive { c });
    }
    let inner = h.field().closure();
    let m = 2 * n;
    let wi = FormField::two_form(format!("omega_I[{}]", h.name()), m, move |x| {
        let hv = inner(x);
        let mut w = vec![Jet2::constant(0.0); m * m];
        for a in 0..n {
            for b in 0..n {
                let (re, im) = (&hv[a * n + b], &hv[n * n + a * n + b]);
                w[(2 * a) * m + 2 * b] = -im;
                w[(2 * a) * m + 2 * b + 1] = re.clone();
                w[(2 * a + 1) * m + 2 * b] = -re;
                w[(2 * a + 1) * m + 2 * b + 1] = -im;
            }
        }
        w
    });
    let (fj, fk) = form_blocks(n, c, &omega.real());
    Ok([
        wi,
        FormField::two_form("omega_J", m, fj),
        FormField::two_form("omega_K", m, fk),
    ])
}

/// Kähler forms and complex structures of `h` at `p`. `J` and `K` are
/// normalized by the proportionality constant `C` when it is positive.
pub fn triple_at(h: &HermitianMetricField, omega: &SymplecticMatrix, p: &[f64]) -> Result<TripleValue> {
    let prop = proportionality(&h.matrix(p)?, omega)?;
    let c = if prop.c > 0.0 { prop.c } else { 1.0 };
    let [wi, wj, wk] = triple_forms(h, omega, c)?;
    let lowered = Triple {
        i: wi.matrix(p)?,
        j: wj.matrix(p)?,
        k: wk.matrix(p)?,
    };
    let g: MetricField = h.real_metric();
    let mixed = lowered.raise(&g.matrix(p)?)?;
    Ok(TripleValue { lowered, mixed, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use num_complex::Complex64;

    fn flat(n: usize) -> HermitianMetricField {
        HermitianMetricField::constant("1", DMatrix::identity(n, n))
    }

    #[test]
    fn identity_gives_flat_triple() {
        let t = triple_at(&flat(2), &SymplecticMatrix::new(2).unwrap(), &[0.0; 4]).unwrap();
        let form = |terms: &[(usize, usize, f64)]| {
            let mut w = DMatrix::zeros(4, 4);
            for &(a, b, c) in terms {
                w[(a, b)] = c;
                w[(b, a)] = -c;
            }
            w
        };
        assert_eq!(t.lowered.i, form(&[(0, 1, 1.0), (2, 3, 1.0)]));
        assert_eq!(t.lowered.j, form(&[(0, 2, 1.0), (1, 3, -1.0)]));
        assert_eq!(t.lowered.k, form(&[(0, 3, 1.0), (1, 2, 1.0)]));
        assert!(t.mixed.quaternion_residual() < 1e-15);
    }

    #[test]
    fn coset_metric_is_quaternionic() {
        let gens = crate::kahler::sp_generators(4).unwrap();
        let v: Vec<f64> = (0..gens.len()).map(|i| 0.1 * (i as f64) - 0.4).collect();
        let h = crate::kahler::coset_metric(&v, &gens).unwrap();
        let omega = SymplecticMatrix::new(4).unwrap();
        let p = [0.0; 8];
        let t = triple_at(&h, &omega, &p).unwrap();
        assert!(t.mixed.quaternion_residual() < 1e-10);
        // compatibility ω(U, W) = g(IU, W)
        let g = h.real_metric().matrix(&p).unwrap();
        let u = DVector::from_fn(8, |i, _| (i as f64 * 0.7).sin());
        let w = DVector::from_fn(8, |i, _| (i as f64 * 1.3).cos());
        for (low, mix) in t.lowered.as_array().iter().zip(t.mixed.as_array()) {
            let lhs = (u.transpose() * *low * &w)[0];
            let rhs = ((mix * &u).transpose() * &g * &w)[0];
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn non_heavenly_metric_breaks_quaternions() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(
            [1.0, 1.0, 2.0, 1.0].map(|x| Complex64::new(x, 0.0)).to_vec(),
        ));
        let h = HermitianMetricField::constant("diag(1,1,2,1)", d);
        let t = triple_at(&h, &SymplecticMatrix::new(4).unwrap(), &[0.0; 8]).unwrap();
        // K = J(−I) and J is antilinear, so IJ = K holds for any h; J² does not.
        assert!(t.mixed.product_residual() < 1e-15);
        let j2 = &t.mixed.j * &t.mixed.j + DMatrix::<f64>::identity(8, 8);
        assert!(j2.amax() > 1e-3);
        assert!(t.mixed.quaternion_residual() > 1e-3);
    }

    #[test]
    fn two_dimensional_normalization_uses_det() {
        let h = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(3.0, 0.0),
            Complex64::new(0.5, 0.5),
            Complex64::new(0.5, -0.5),
            Complex64::new(1.0, 0.0),
        ]);
        let h = HermitianMetricField::constant("h", h);
        let t = triple_at(&h, &SymplecticMatrix::new(2).unwrap(), &[0.0; 4]).unwrap();
        assert!((t.c - 2.5).abs() < 1e-14);
        assert!(t.mixed.quaternion_residual() < 1e-12);
    }
}
