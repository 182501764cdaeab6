use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hermitian::HermitianMetricField;
use crate::error::{Error, Result};

/// Block-diagonal `Ω = diag(ε, …, ε)` with `ε = [[0, 1], [−1, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticMatrix {
    n: usize,
}

impl SymplecticMatrix {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::Domain(format!("symplectic matrix needs a positive even size, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn real(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| match (i % 2, j) {
            (0, j) if j == i + 1 => 1.0,
            (1, j) if j + 1 == i => -1.0,
            _ => 0.0,
        })
    }

    pub fn complex(&self) -> DMatrix<Complex64> {
        self.real().map(|x| Complex64::new(x, 0.0))
    }
}

fn sp_relation(t: &DMatrix<Complex64>, omega: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    t.transpose() * omega + omega * t
}

fn flatten(t: &DMatrix<Complex64>) -> Vec<f64> {
    t.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Hermitian generators `t` of `Sp(n)`, `tᵀΩ + Ωt = 0`, as a maximal
/// independent set of size `m(2m + 1)`, `m = n/2`.
///
/// Candidates are `X + X†` and `i(X − X†)` for `X = −Ω S`, `S` running over the
/// elementary complex symmetric matrices; every entry is `0`, `±1` or `±i`.
pub fn sp_generators(n: usize) -> Result<Vec<DMatrix<Complex64>>> {
    let omega = SymplecticMatrix::new(n)?.complex();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let mut out: Vec<DMatrix<Complex64>> = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for a in 0..n {
        for b in a..n {
            for phase in [one, i] {
                let mut s = DMatrix::<Complex64>::zeros(n, n);
                s[(a, b)] = phase;
                s[(b, a)] = phase;
                let x = -(&omega * s);
                for t in [&x + x.adjoint(), (&x - x.adjoint()) * i] {
                    if t.iter().all(|c| c.norm() == 0.0) {
                        continue;
                    }
                    if add_if_independent(&mut basis, flatten(&t)) {
                        out.push(t);
                    }
                }
            }
        }
    }
    debug_assert!(out.iter().all(|t| sp_relation(t, &omega).iter().all(|c| c.norm() == 0.0)));
    Ok(out)
}

/// Gram–Schmidt rank test over the reals.
fn add_if_independent(basis: &mut Vec<Vec<f64>>, v: Vec<f64>) -> bool {
    let mut r = v;
    for b in basis.iter() {
        let c: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
        r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-9 {
        return false;
    }
    basis.push(r.into_iter().map(|x| x / norm).collect());
    true
}

/// `exp(H)` for Hermitian `H` via its eigendecomposition.
pub fn hermitian_exp(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(l.exp(), 0.0)));
    let q = &eig.eigenvectors;
    q * d * q.adjoint()
}

/// The constant coset metric `h = exp(Σ v_a t_a)`.
pub fn coset_metric(v: &[f64], generators: &[DMatrix<Complex64>]) -> Result<HermitianMetricField> {
    if v.len() != generators.len() {
        return Err(Error::DimensionMismatch {
            expected: generators.len(),
            found: v.len(),
        });
    }
    let n = generators.first().map_or(0, |t| t.nrows());
    let x = v
        .iter()
        .zip(generators)
        .fold(DMatrix::<Complex64>::zeros(n, n), |acc, (c, t)| acc + t * Complex64::new(*c, 0.0));
    if x.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::NonFinite {
            field: "coset exponent".into(),
            component: None,
        });
    }
    Ok(HermitianMetricField::constant("coset", hermitian_exp(&x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{sample_points, SampleSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn omega_squares_to_minus_one() {
        let o = SymplecticMatrix::new(4).unwrap().real();
        assert_eq!(&o * &o, -DMatrix::identity(4, 4));
        assert_eq!(o.transpose(), -o);
        assert!(SymplecticMatrix::new(3).is_err());
    }

    #[test]
    fn two_by_two_generators_span_pauli() {
        let gens = sp_generators(2).unwrap();
        assert_eq!(gens.len(), 3);
        let pauli = [
            DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
            DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
            DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        ];
        let mut basis = Vec::new();
        for t in &gens {
            assert!(add_if_independent(&mut basis, flatten(t)));
        }
        for s in &pauli {
            assert!(!add_if_independent(&mut basis.clone(), flatten(s)));
        }
    }

    #[test]
    fn generator_counts_and_relation() {
        for (n, count) in [(2, 3), (4, 10), (6, 21)] {
            let omega = SymplecticMatrix::new(n).unwrap().complex();
            let gens = sp_generators(n).unwrap();
            assert_eq!(gens.len(), count);
            for t in &gens {
                assert_eq!(t, &t.adjoint());
                assert!(sp_relation(t, &omega).iter().all(|z| z.norm() == 0.0));
            }
        }
        assert!(sp_generators(5).is_err());
    }

    #[test]
    fn coset_along_first_generator() {
        let gens = sp_generators(2).unwrap();
        let sigma1 = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let w = 0.8;
        let h = hermitian_exp(&(sigma1 * c(w, 0.0)));
        assert!((h[(0, 0)].re - w.cosh()).abs() < 1e-14);
        assert!((h[(0, 1)].re - w.sinh()).abs() < 1e-14);
        assert_eq!(coset_metric(&[0.0; 3], &gens).unwrap().matrix(&[0.0; 4]).unwrap(), DMatrix::identity(2, 2));
    }

    #[test]
    fn coset_has_unit_determinant() {
        let gens = sp_generators(2).unwrap();
        let spec = SampleSpec::new(vec![(-1.5, 1.5); 3], 20, 7).unwrap();
        for v in sample_points(&spec).unwrap() {
            let h = coset_metric(&v, &gens).unwrap().matrix(&[0.0; 4]).unwrap();
            assert!((h.determinant() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
