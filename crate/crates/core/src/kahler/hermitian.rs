use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::numcore::{evaluate_jet, Field, Jet2, ScalarField};

/// Complex chart `z^j = u^j + i v^j` with real coordinates ordered
/// `(u¹, v¹, …, uⁿ, vⁿ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexChart {
    n: usize,
}

impl ComplexChart {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    pub fn to_real(&self, z: &[Complex64]) -> Vec<f64> {
        z.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn to_complex(&self, p: &[f64]) -> Vec<Complex64> {
        p.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
    }
}

/// Hermitian metric `h_{j k̄}` on a complex chart.
///
/// The closure takes the `2n` real coordinates and returns `2n²` jets: the
/// real parts of `h` row-major, then the imaginary parts. Only the upper
/// triangle is read, so Hermiticity is exact.
#[derive(Clone, Debug)]
pub struct HermitianMetricField {
    chart: ComplexChart,
    field: Field,
    potential: Option<ScalarField>,
}

impl HermitianMetricField {
    pub fn new<F>(name: impl Into<String>, n: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self {
            chart: ComplexChart::new(n),
            field: Field::new(name, 2 * n, 2 * n * n, move |x| hermitize(f(x), n)),
            potential: None,
        }
    }

    /// Constant metric.
    pub fn constant(name: impl Into<String>, h: DMatrix<Complex64>) -> Self {
        let n = h.nrows();
        let parts: Vec<f64> = (0..n * n)
            .map(|k| h[(k / n, k % n)].re)
            .chain((0..n * n).map(|k| h[(k / n, k % n)].im))
            .collect();
        Self::new(name, n, move |_| Jet2::constants(&parts))
    }

    /// Attaches a Kähler potential (used for cross-checks only).
    pub fn with_potential(mut self, potential: ScalarField) -> Self {
        self.potential = Some(potential);
        self
    }

    pub fn potential(&self) -> Option<&ScalarField> {
        self.potential.as_ref()
    }

    pub fn name(&self) -> &str {
        self.field.name()
    }

    pub fn chart(&self) -> ComplexChart {
        self.chart
    }

    pub fn complex_dim(&self) -> usize {
        self.chart.n
    }

    pub fn real_dim(&self) -> usize {
        self.chart.real_dim()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn matrix(&self, p: &[f64]) -> Result<DMatrix<Complex64>> {
        let n = self.complex_dim();
        let v = self.field.values(p)?;
        Ok(DMatrix::from_fn(n, n, |j, k| {
            Complex64::new(v[j * n + k], v[n * n + j * n + k])
        }))
    }

    /// `(re, im)` jets of `h_{jk̄}`.
    pub fn jets(&self, p: &[f64]) -> Result<HermitianJet> {
        Ok(HermitianJet {
            n: self.complex_dim(),
            parts: self.field.jets(p)?,
        })
    }

    /// Real metric `g(U, W) = Re(h_{jk̄} U^j W̄^k)`; `Σ|z|²` gives the identity.
    pub fn real_metric(&self) -> MetricField {
        let n = self.complex_dim();
        let inner = self.field.closure();
        MetricField::new(format!("Re {}", self.name()), 2 * n, move |x| {
            let h = inner(x);
            let m = 2 * n;
            let mut g = vec![Jet2::constant(0.0); m * m];
            for j in 0..n {
                for k in 0..n {
                    let (re, im) = (&h[j * n + k], &h[n * n + j * n + k]);
                    g[(2 * j) * m + 2 * k] = re.clone();
                    g[(2 * j) * m + 2 * k + 1] = im.clone();
                    g[(2 * j + 1) * m + 2 * k] = -im;
                    g[(2 * j + 1) * m + 2 * k + 1] = re.clone();
                }
            }
            g
        })
    }
}

fn hermitize(mut h: Vec<Jet2>, n: usize) -> Vec<Jet2> {
    let nn = n * n;
    for j in 0..n {
        h[nn + j * n + j] = Jet2::constant(0.0);
        for k in 0..j {
            h[j * n + k] = h[k * n + j].clone();
            h[nn + j * n + k] = -&h[nn + k * n + j];
        }
    }
    h
}

/// `h_{jk̄}` with first and second real derivatives at one point.
#[derive(Clone, Debug)]
pub struct HermitianJet {
    n: usize,
    parts: Vec<Jet2>,
}

impl HermitianJet {
    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn re(&self, j: usize, k: usize) -> &Jet2 {
        &self.parts[j * self.n + k]
    }

    pub fn im(&self, j: usize, k: usize) -> &Jet2 {
        &self.parts[self.n * self.n + j * self.n + k]
    }

    pub fn value(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |j, k| {
            Complex64::new(self.re(j, k).value(), self.im(j, k).value())
        })
    }

    /// `∂_m h = ½(∂_{u^m} − i ∂_{v^m}) h`
    pub fn d_holomorphic(&self, m: usize) -> DMatrix<Complex64> {
        self.wirtinger(m, -1.0)
    }

    /// `∂_{m̄} h = ½(∂_{u^m} + i ∂_{v^m}) h`
    pub fn d_antiholomorphic(&self, m: usize) -> DMatrix<Complex64> {
        self.wirtinger(m, 1.0)
    }

    fn wirtinger(&self, m: usize, sign: f64) -> DMatrix<Complex64> {
        let (u, v) = (2 * m, 2 * m + 1);
        let i = Complex64::i();
        DMatrix::from_fn(self.n, self.n, |j, k| {
            let du = Complex64::new(self.re(j, k).d(u), self.im(j, k).d(u));
            let dv = Complex64::new(self.re(j, k).d(v), self.im(j, k).d(v));
            0.5 * (du + sign * i * dv)
        })
    }
}

const HERMITIAN_TOL: f64 = 1e-12;

/// `h_{jk̄} = ∂²𝒦/∂z^j∂z̄^k` via real jets and the Wirtinger combination
/// `¼(∂_{u_j}∂_{u_k} + ∂_{v_j}∂_{v_k}) + (i/4)(∂_{u_j}∂_{v_k} − ∂_{v_j}∂_{u_k})`.
pub fn metric_from_potential(potential: &ScalarField, p: &[f64]) -> Result<DMatrix<Complex64>> {
    if potential.dim() % 2 != 0 {
        return Err(Error::InvalidSpec(format!(
            "potential `{}` has odd real dimension {}",
            potential.name(),
            potential.dim()
        )));
    }
    let jet = evaluate_jet(potential, p)?;
    Ok(wirtinger_hessian(potential.dim() / 2, |a, b| jet.hessian(a, b))?)
}

/// Wirtinger combination of a real Hessian given by `hess(a, b)`.
pub fn wirtinger_hessian(n: usize, hess: impl Fn(usize, usize) -> f64) -> Result<DMatrix<Complex64>> {
    let h = DMatrix::from_fn(n, n, |j, k| {
        let (uj, vj, uk, vk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
        Complex64::new(
            0.25 * (hess(uj, uk) + hess(vj, vk)),
            0.25 * (hess(uj, vk) - hess(vj, uk)),
        )
    });
    let skew = (&h - h.adjoint()).iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if skew > HERMITIAN_TOL * (1.0 + h.iter().fold(0.0f64, |m, c| m.max(c.norm()))) {
        return Err(Error::Internal(format!("Wirtinger Hessian not Hermitian (residual {skew:e})")));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::fd_oracle;

    fn bump_potential() -> ScalarField {
        // z z̄ + (z z̄)²/4
        ScalarField::new("K", 2, |x| {
            let zz = x[0].square() + x[1].square();
            &zz + zz.square() * 0.25
        })
    }

    #[test]
    fn flat_potential_gives_identity() {
        let k = ScalarField::new("flat", 4, |x| x.iter().map(Jet2::square).fold(Jet2::constant(0.0), |a, b| a + b));
        let h = metric_from_potential(&k, &[0.3, -1.0, 2.0, 0.5]).unwrap();
        assert_eq!(h, DMatrix::identity(2, 2));
    }

    #[test]
    fn bump_potential_at_one() {
        let h = metric_from_potential(&bump_potential(), &[1.0, 0.0]).unwrap();
        assert!((h[(0, 0)] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        let h = metric_from_potential(&bump_potential(), &[0.6, -0.7]).unwrap();
        assert!((h[(0, 0)].re - (1.0 + 0.36 + 0.49)).abs() < 1e-14);
    }

    #[test]
    fn potential_matches_fd_hessian() {
        let k = ScalarField::new("mixed", 4, |x| {
            (&x[0] * &x[3] - &x[1] * &x[2]).sin() + (x[0].square() + x[2].square() + 1.0).ln() + x[1].square() * &x[3]
        });
        let p = [0.4, -0.3, 0.8, 0.1];
        let h = metric_from_potential(&k, &p).unwrap();
        let fd = fd_oracle(&k, &p, &[]).unwrap();
        let oracle = wirtinger_hessian(2, |a, b| fd.hessian(a, b)).unwrap();
        assert!((h - oracle).iter().all(|c| c.norm() < 1e-6));
    }

    #[test]
    fn real_metric_of_identity_is_euclidean() {
        let h = HermitianMetricField::constant("1", DMatrix::identity(2, 2));
        assert_eq!(h.real_metric().matrix(&[0.0; 4]).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn real_metric_reproduces_hermitian_product() {
        let hm = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(2.0, 0.0),
            Complex64::new(0.3, 0.4),
            Complex64::new(0.3, -0.4),
            Complex64::new(1.5, 0.0),
        ]);
        let h = HermitianMetricField::constant("h", hm.clone());
        let g = h.real_metric().matrix(&[0.0; 4]).unwrap();
        let chart = h.chart();
        let (u, w) = ([0.3, -1.2, 0.7, 0.2], [1.1, 0.5, -0.4, 0.9]);
        let (uc, wc) = (chart.to_complex(&u), chart.to_complex(&w));
        let complex: Complex64 = (0..2)
            .flat_map(|j| (0..2).map(move |k| (j, k)))
            .map(|(j, k)| hm[(j, k)] * uc[j] * wc[k].conj())
            .sum();
        let real = (nalgebra::DVector::from_row_slice(&u).transpose() * g * nalgebra::DVector::from_row_slice(&w))[0];
        assert!((real - complex.re).abs() < 1e-14);
    }

    #[test]
    fn hermitian_storage_is_exact() {
        let h = HermitianMetricField::new("h", 2, |x| {
            vec![
                Jet2::constant(1.0),
                x[0].clone(),
                Jet2::constant(99.0),
                Jet2::constant(1.0),
                Jet2::constant(7.0),
                x[1].clone(),
                Jet2::constant(99.0),
                Jet2::constant(7.0),
            ]
        });
        let m = h.matrix(&[0.2, 0.3, 0.0, 0.0]).unwrap();
        assert_eq!(m, m.adjoint());
        assert_eq!(m[(1, 0)], Complex64::new(0.2, -0.3));
    }

    #[test]
    fn wirtinger_derivatives() {
        // h = 1 + |z|²: ∂_z h = z̄, ∂_z̄ h = z
        let h = HermitianMetricField::new("1+|z|^2", 1, |x| vec![1.0 + x[0].square() + x[1].square(), Jet2::constant(0.0)]);
        let j = h.jets(&[0.5, -0.25]).unwrap();
        assert!((j.d_holomorphic(0)[(0, 0)] - Complex64::new(0.5, 0.25)).norm() < 1e-15);
        assert!((j.d_antiholomorphic(0)[(0, 0)] - Complex64::new(0.5, -0.25)).norm() < 1e-15);
    }
}
