//! Quadratic Lagrangians `L = ½ q̇ᵀ M(q) q̇`, their Hamiltonians, Poisson
//! brackets and reduction by a cyclic momentum.
//!
//! Phase-space fields take `2n` coordinates ordered `(q¹, …, qⁿ, p₁, …, pₙ)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::MetricField;
use crate::numcore::{evaluate_jet, Jet2, ScalarField};

#[derive(Clone, Debug)]
pub struct QuadraticKinetic {
    coords: Vec<String>,
    mass: MetricField,
}

impl QuadraticKinetic {
    pub fn new(coords: Vec<String>, mass: MetricField) -> Result<Self> {
        if coords.len() != mass.dim() {
            return Err(Error::DimensionMismatch {
                expected: mass.dim(),
                found: coords.len(),
            });
        }
        Ok(Self { coords, mass })
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn mass(&self) -> &MetricField {
        &self.mass
    }

    pub fn mass_matrix(&self, q: &[f64]) -> Result<DMatrix<f64>> {
        self.mass.matrix(q)
    }

    /// `H(q, p) = ½ pᵀ M(q)⁻¹ p` as a phase-space field.
    pub fn hamiltonian(&self) -> ScalarField {
        let n = self.dim();
        let m = self.mass.field().closure();
        ScalarField::new(format!("H[{}]", self.mass.name()), 2 * n, move |x| {
            let (q, p) = x.split_at(n);
            match jet_solve(m(q), p.to_vec(), n) {
                Some(v) => 0.5 * v.iter().zip(p).fold(Jet2::constant(0.0), |acc, (a, b)| acc + a * b),
                None => Jet2::constant(f64::NAN),
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                found: p.len(),
            });
        }
        if let Some(i) = q.iter().chain(&p).position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                field: "phase point".into(),
                component: Some(i),
            });
        }
        Ok(Self { q, p })
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// `(q, p)` concatenated.
    pub fn coords(&self) -> Vec<f64> {
        self.q.iter().chain(&self.p).copied().collect()
    }
}

/// Solves `M x = b` for jets by Gaussian elimination with partial pivoting.
fn jet_solve(mut m: Vec<Jet2>, mut b: Vec<Jet2>, n: usize) -> Option<Vec<Jet2>> {
    let scale = m.iter().fold(0.0f64, |s, x| s.max(x.value().abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            m[i * n + col].value().abs().total_cmp(&m[j * n + col].value().abs())
        })?;
        if !(m[piv * n + col].value().abs() > 1e-14 * scale) {
            return None;
        }
        if piv != col {
            for k in 0..n {
                m.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        let inv = m[col * n + col].recip();
        for row in col + 1..n {
            let f = &m[row * n + col] * &inv;
            if f.value() == 0.0 && f.is_constant() {
                continue;
            }
            for k in col..n {
                m[row * n + k] = &m[row * n + k] - &f * &m[col * n + k];
            }
            b[row] = &b[row] - &f * &b[col];
        }
    }
    let mut x = vec![Jet2::constant(0.0); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(b[row].clone(), |acc, k| acc - &m[row * n + k] * &x[k]);
        x[row] = s / &m[row * n + row];
    }
    Some(x)
}

/// Inverse of a jet matrix (row-major), column by column.
fn jet_inverse(m: &[Jet2], n: usize) -> Option<Vec<Jet2>> {
    let cols: Vec<Vec<Jet2>> = (0..n)
        .map(|c| {
            let e = (0..n).map(|i| Jet2::constant(if i == c { 1.0 } else { 0.0 })).collect();
            jet_solve(m.to_vec(), e, n)
        })
        .collect::<Option<_>>()?;
    Some((0..n * n).map(|k| cols[k % n][k / n].clone()).collect())
}

fn invert(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sv = m.clone().svd(false, false).singular_values;
    if m.nrows() == 0 || !(sv.min() > 1e-14 * sv.max()) {
        return Err(Error::DegenerateLagrangian);
    }
    m.clone().try_inverse().ok_or(Error::DegenerateLagrangian)
}

/// The kinetic matrix `M(q)⁻¹` of `H = ½ pᵀ M⁻¹ p`.
pub fn legendre_to_hamiltonian(l: &QuadraticKinetic, q: &[f64]) -> Result<DMatrix<f64>> {
    invert(&l.mass_matrix(q)?)
}

/// Inverse Legendre transform of a kinetic matrix.
pub fn hamiltonian_to_lagrangian(h: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    invert(h)
}

/// The momentum `p_c` as a phase-space field.
pub fn momentum(c: usize, n: usize) -> ScalarField {
    ScalarField::new(format!("p{c}"), 2 * n, move |x| x[n + c].clone())
}

/// The coordinate `q^c` as a phase-space field.
pub fn position(c: usize, n: usize) -> ScalarField {
    ScalarField::new(format!("q{c}"), 2 * n, move |x| x[c].clone())
}

/// `{f, g} = Σ (∂f/∂qⁱ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂qⁱ)`
pub fn poisson_bracket(f: &ScalarField, g: &ScalarField, s: &PhasePoint) -> Result<f64> {
    let n = s.dim();
    for h in [f, g] {
        if h.dim() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: h.dim(),
            });
        }
    }
    let x = s.coords();
    let (fj, gj) = (evaluate_jet(f, &x)?, evaluate_jet(g, &x)?);
    Ok((0..n).map(|i| fj.d(i) * gj.d(n + i) - fj.d(n + i) * gj.d(i)).sum())
}

/// Cyclicity tolerance for [`constrain_and_reduce`].
pub const CYCLIC_TOL: f64 = 1e-10;

/// Sets `p_fiber = 0` and Legendre-transforms back: the fiber row and column
/// of `M⁻¹` are deleted and the rest inverted. The fiber coordinate of the
/// reduced mass matrix is held at `section`.
///
/// `probes` are phase points where `{p_fiber, H} = 0` is checked.
pub fn constrain_and_reduce(
    l: &QuadraticKinetic,
    fiber: usize,
    section: f64,
    probes: &[PhasePoint],
) -> Result<QuadraticKinetic> {
    let n = l.dim();
    if fiber >= n {
        return Err(Error::InvalidSpec(format!("fiber index {fiber} out of range for {n} coordinates")));
    }
    let h = l.hamiltonian();
    let pf = momentum(fiber, n);
    for s in probes {
        let residual = poisson_bracket(&pf, &h, s)?.abs();
        if residual > CYCLIC_TOL {
            return Err(Error::InvalidConstraint { index: fiber, residual });
        }
    }
    let m = l.mass.field().closure();
    let k = n - 1;
    let keep: Vec<usize> = (0..n).filter(|&i| i != fiber).collect();
    let coords = keep.iter().map(|&i| l.coords[i].clone()).collect();
    let keep_q = keep.clone();
    let mass = MetricField::new(format!("{}|p{fiber}=0", l.mass.name()), k, move |x| {
        let mut q = vec![Jet2::constant(section); n];
        for (&i, v) in keep_q.iter().zip(x) {
            q[i] = v.clone();
        }
        let nan = || vec![Jet2::constant(f64::NAN); k * k];
        let Some(minv) = jet_inverse(&m(&q), n) else { return nan() };
        let block: Vec<Jet2> = keep_q
            .iter()
            .flat_map(|&a| keep_q.iter().map(move |&b| (a, b)))
            .map(|(a, b)| minv[a * n + b].clone())
            .collect();
        jet_inverse(&block, k).unwrap_or_else(nan)
    });
    QuadraticKinetic::new(coords, mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::fd_oracle;

    /// `(r, χ, θ)` toy Lagrangian.
    fn toy(a: f64) -> QuadraticKinetic {
        let mass = MetricField::new("toy", 3, move |x| {
            let r2 = x[0].square();
            let z = Jet2::constant(0.0);
            vec![
                1.0 + &r2 / (a * a),
                z.clone(),
                z.clone(),
                z.clone(),
                r2.clone(),
                r2.clone(),
                z.clone(),
                r2.clone(),
                r2 + a * a,
            ]
        });
        QuadraticKinetic::new(vec!["r".into(), "chi".into(), "theta".into()], mass).unwrap()
    }

    fn probes() -> Vec<PhasePoint> {
        vec![
            PhasePoint::new(vec![1.0, 0.2, 0.3], vec![0.5, -1.0, 2.0]).unwrap(),
            PhasePoint::new(vec![2.5, 1.0, -0.7], vec![1.5, 0.25, -0.5]).unwrap(),
        ]
    }

    #[test]
    fn toy_hamiltonian_coefficients() {
        let hm = legendre_to_hamiltonian(&toy(1.0), &[1.0, 0.0, 0.0]).unwrap();
        let expect = DMatrix::from_row_slice(3, 3, &[0.5, 0.0, 0.0, 0.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        assert!((hm - expect).amax() < 1e-15);
    }

    #[test]
    fn diagonal_and_singular() {
        let l = QuadraticKinetic::new(
            vec!["x".into(), "y".into()],
            MetricField::diagonal("m", 2, |_| Jet2::constants(&[2.0, 3.0])),
        )
        .unwrap();
        let h = legendre_to_hamiltonian(&l, &[0.0, 0.0]).unwrap();
        assert!((h[(0, 0)] - 0.5).abs() < 1e-16 && (h[(1, 1)] - 1.0 / 3.0).abs() < 1e-16);
        let bad = QuadraticKinetic::new(
            vec!["x".into(), "y".into()],
            MetricField::diagonal("m", 2, |_| Jet2::constants(&[2.0, 0.0])),
        )
        .unwrap();
        assert!(matches!(legendre_to_hamiltonian(&bad, &[0.0, 0.0]), Err(Error::DegenerateLagrangian)));
    }

    #[test]
    fn hamiltonian_field_matches_matrix() {
        let l = toy(1.3);
        let s = &probes()[1];
        let hm = legendre_to_hamiltonian(&l, s.q()).unwrap();
        let p = nalgebra::DVector::from_row_slice(s.p());
        let expect = 0.5 * (p.transpose() * hm * &p)[0];
        let got = l.hamiltonian().value(&s.coords()).unwrap();
        assert!((got - expect).abs() < 1e-14);
        let jet = evaluate_jet(&l.hamiltonian(), &s.coords()).unwrap();
        let fd = fd_oracle(&l.hamiltonian(), &s.coords(), &[]).unwrap();
        for i in 0..6 {
            assert!((jet.d(i) - fd.d(i)).abs() < 1e-6);
        }
    }

    #[test]
    fn brackets() {
        let s = &probes()[0];
        assert_eq!(poisson_bracket(&position(0, 3), &momentum(0, 3), s).unwrap(), 1.0);
        assert_eq!(poisson_bracket(&position(1, 3), &momentum(0, 3), s).unwrap(), 0.0);
        let h = toy(1.0).hamiltonian();
        assert_eq!(poisson_bracket(&h, &h, s).unwrap(), 0.0);
        for s in probes() {
            assert!(poisson_bracket(&momentum(2, 3), &h, &s).unwrap().abs() < 1e-12);
            assert!(poisson_bracket(&momentum(0, 3), &h, &s).unwrap().abs() > 1e-3);
        }
    }

    #[test]
    fn toy_reduction() {
        let red = constrain_and_reduce(&toy(1.0), 2, 0.0, &probes()).unwrap();
        assert_eq!(red.coords(), ["r", "chi"]);
        let m = red.mass_matrix(&[1.0, 0.4]).unwrap();
        assert!((m - DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).amax() < 1e-15);
        let a = 2.0;
        let red = constrain_and_reduce(&toy(a), 2, 0.0, &probes()).unwrap();
        let r: f64 = 1.7;
        let m = red.mass_matrix(&[r, 0.0]).unwrap();
        assert!((m[(1, 1)] - r * r * a * a / (r * r + a * a)).abs() < 1e-14);
    }

    #[test]
    fn decoupled_reduction() {
        let l = QuadraticKinetic::new(
            vec!["x".into(), "y".into()],
            MetricField::diagonal("m", 2, |x| vec![2.0 + x[0].square(), Jet2::constant(7.0)]),
        )
        .unwrap();
        let probe = PhasePoint::new(vec![0.3, 0.1], vec![1.0, 1.0]).unwrap();
        let red = constrain_and_reduce(&l, 1, 0.0, &[probe]).unwrap();
        assert!((red.mass_matrix(&[0.3]).unwrap()[(0, 0)] - 2.09).abs() < 1e-15);
    }

    #[test]
    fn non_cyclic_fiber_is_rejected() {
        match constrain_and_reduce(&toy(1.0), 0, 0.0, &probes()) {
            Err(Error::InvalidConstraint { index: 0, residual }) => assert!(residual > 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jet_inverse_derivatives() {
        let m = MetricField::new("m", 2, |x| vec![2.0 + x[0].sin(), x[1].clone(), x[1].clone(), 3.0 + x[0].square()]);
        let p = [0.4, 0.3];
        let jets = m.field().jets(&p).unwrap();
        let inv = jet_inverse(&jets, 2).unwrap();
        let fd_inv = |q: &[f64]| -> Result<f64> { Ok(m.matrix(q)?.try_inverse().unwrap()[(0, 1)]) };
        let fd = crate::numcore::fd_gradient(fd_inv, &p).unwrap();
        assert!((inv[1].d(0) - fd[0]).abs() < 1e-8);
        assert!((inv[1].d(1) - fd[1]).abs() < 1e-8);
    }
}
