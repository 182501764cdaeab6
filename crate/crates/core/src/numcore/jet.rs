//! Second-order truncated Taylor arithmetic.
//!
//! A [`Jet2`] carries the value, gradient and Hessian of a scalar quantity
//! with respect to the chart coordinates it was seeded from. A jet with an
//! empty gradient is a constant and combines with jets of any dimension.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    value: f64,
    grad: Vec<f64>,
    /// Row-major `n × n`, always written symmetrically.
    hess: Vec<f64>,
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            grad: Vec::new(),
            hess: Vec::new(),
        }
    }

    /// The coordinate function `x_index` in an `n`-dimensional chart.
    pub fn variable(value: f64, index: usize, n: usize) -> Self {
        assert!(index < n, "variable index {index} out of range for dim {n}");
        let mut grad = vec![0.0; n];
        grad[index] = 1.0;
        Self {
            value,
            grad,
            hess: vec![0.0; n * n],
        }
    }

    /// Builds a jet from explicit parts; the Hessian is symmetrized.
    pub fn from_parts(value: f64, gradient: Vec<f64>, hessian: Vec<f64>) -> Self {
        let n = gradient.len();
        assert_eq!(hessian.len(), n * n, "hessian must be n × n");
        let mut hess = hessian;
        for i in 0..n {
            for j in i + 1..n {
                let h = 0.5 * (hess[i * n + j] + hess[j * n + i]);
                hess[i * n + j] = h;
                hess[j * n + i] = h;
            }
        }
        Self {
            value,
            grad: gradient,
            hess,
        }
    }

    /// Seeds every coordinate of `point` as an independent variable.
    pub fn seed(point: &[f64]) -> Vec<Jet2> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet2::variable(v, i, n))
            .collect()
    }

    /// Value-only jets, for plain evaluation of jet-typed fields.
    pub fn constants(point: &[f64]) -> Vec<Jet2> {
        point.iter().map(|&v| Jet2::constant(v)).collect()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Number of seeded coordinates; 0 for constants.
    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn is_constant(&self) -> bool {
        self.grad.is_empty()
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad
    }

    pub fn hessian(&self, i: usize, j: usize) -> f64 {
        if self.grad.is_empty() {
            0.0
        } else {
            self.hess[i * self.grad.len() + j]
        }
    }

    /// Partial derivative along coordinate `i` (zero for constants).
    pub fn d(&self, i: usize) -> f64 {
        self.grad.get(i).copied().unwrap_or(0.0)
    }

    /// Gradient padded to length `n` (constants become the zero vector).
    pub fn gradient_padded(&self, n: usize) -> Vec<f64> {
        if self.grad.is_empty() {
            vec![0.0; n]
        } else {
            self.grad.clone()
        }
    }

    /// Row-major Hessian padded to `n × n`.
    pub fn hessian_padded(&self, n: usize) -> Vec<f64> {
        if self.grad.is_empty() {
            vec![0.0; n * n]
        } else {
            self.hess.clone()
        }
    }

    /// First index (value = `None`, gradient/Hessian coordinate = `Some`) that
    /// is not finite.
    pub fn first_non_finite(&self) -> Option<Option<usize>> {
        if !self.value.is_finite() {
            return Some(None);
        }
        if let Some(i) = self.grad.iter().position(|g| !g.is_finite()) {
            return Some(Some(i));
        }
        let n = self.grad.len();
        self.hess
            .iter()
            .position(|h| !h.is_finite())
            .map(|k| Some(k / n.max(1)))
    }

    /// `f(self)` given `f`, `f'`, `f''` evaluated at `self.value`.
    fn unary(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let n = self.grad.len();
        let grad: Vec<f64> = self.grad.iter().map(|&g| times(f1, g)).collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let h = times(f1, self.hess[i * n + j])
                    + times(f2, self.grad[i] * self.grad[j]);
                hess[i * n + j] = h;
                hess[j * n + i] = h;
            }
        }
        Jet2 {
            value: f0,
            grad,
            hess,
        }
    }

    /// `F(x, y)` from its value and partials up to second order.
    #[allow(clippy::too_many_arguments)]
    fn bivariate(x: &Jet2, y: &Jet2, f: f64, fx: f64, fy: f64, fxx: f64, fxy: f64, fyy: f64) -> Jet2 {
        let n = x.grad.len().max(y.grad.len());
        if n == 0 {
            return Jet2::constant(f);
        }
        debug_assert!(
            x.grad.is_empty() || y.grad.is_empty() || x.grad.len() == y.grad.len(),
            "mixing jets of different dimension"
        );
        let gx = |i: usize| x.grad.get(i).copied().unwrap_or(0.0);
        let gy = |i: usize| y.grad.get(i).copied().unwrap_or(0.0);
        let hx = |k: usize| x.hess.get(k).copied().unwrap_or(0.0);
        let hy = |k: usize| y.hess.get(k).copied().unwrap_or(0.0);
        let grad: Vec<f64> = (0..n).map(|i| fx * gx(i) + fy * gy(i)).collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let k = i * n + j;
                let h = fx * hx(k)
                    + fy * hy(k)
                    + fxx * gx(i) * gx(j)
                    + fyy * gy(i) * gy(j)
                    + fxy * (gx(i) * gy(j) + gy(i) * gx(j));
                hess[k] = h;
                hess[j * n + i] = h;
            }
        }
        Jet2 {
            value: f,
            grad,
            hess,
        }
    }

    fn scaled(&self, c: f64, offset: f64) -> Jet2 {
        Jet2 {
            value: c * self.value + offset,
            grad: self.grad.iter().map(|g| c * g).collect(),
            hess: self.hess.iter().map(|h| c * h).collect(),
        }
    }

    pub fn recip(&self) -> Jet2 {
        let v = self.value;
        self.unary(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn square(&self) -> Jet2 {
        let v = self.value;
        self.unary(v * v, 2.0 * v, 2.0)
    }

    pub fn powi(&self, k: i32) -> Jet2 {
        let v = self.value;
        let kf = f64::from(k);
        self.unary(
            v.powi(k),
            kf * v.powi(k - 1),
            kf * (kf - 1.0) * v.powi(k - 2),
        )
    }

    pub fn sqrt(&self) -> Jet2 {
        let s = self.value.sqrt();
        self.unary(s, 0.5 / s, -0.25 / (s * self.value))
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.unary(e, e, e)
    }

    pub fn ln(&self) -> Jet2 {
        let v = self.value;
        self.unary(v.ln(), 1.0 / v, -1.0 / (v * v))
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.unary(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.unary(c, -s, -c)
    }

    pub fn sinh(&self) -> Jet2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.unary(s, c, s)
    }

    pub fn cosh(&self) -> Jet2 {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.unary(c, s, c)
    }

    pub fn atan(&self) -> Jet2 {
        let v = self.value;
        let q = 1.0 + v * v;
        self.unary(v.atan(), 1.0 / q, -2.0 * v / (q * q))
    }

    pub fn asinh(&self) -> Jet2 {
        let v = self.value;
        let q = 1.0 + v * v;
        self.unary(v.asinh(), 1.0 / q.sqrt(), -v / (q * q.sqrt()))
    }

    /// Two-argument arctangent `atan2(self, x)`; smooth away from the origin.
    pub fn atan2(&self, x: &Jet2) -> Jet2 {
        let (yv, xv) = (self.value, x.value);
        let q = xv * xv + yv * yv;
        let q2 = q * q;
        // F(x, y) = atan2(y, x), arguments ordered (x, y) below.
        Jet2::bivariate(
            x,
            self,
            yv.atan2(xv),
            -yv / q,
            xv / q,
            2.0 * xv * yv / q2,
            (yv * yv - xv * xv) / q2,
            -2.0 * xv * yv / q2,
        )
    }
}

/// Product that keeps structural zeros exact (`∞ · 0 = 0`), so a singular
/// derivative only poisons the coordinates that actually depend on it.
fn times(coef: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        coef * x
    }
}

impl From<f64> for Jet2 {
    fn from(v: f64) -> Self {
        Jet2::constant(v)
    }
}

fn add_jets(a: &Jet2, b: &Jet2) -> Jet2 {
    match (a.grad.is_empty(), b.grad.is_empty()) {
        (true, _) => b.scaled(1.0, a.value),
        (_, true) => a.scaled(1.0, b.value),
        _ => Jet2 {
            value: a.value + b.value,
            grad: a.grad.iter().zip(&b.grad).map(|(x, y)| x + y).collect(),
            hess: a.hess.iter().zip(&b.hess).map(|(x, y)| x + y).collect(),
        },
    }
}

fn mul_jets(a: &Jet2, b: &Jet2) -> Jet2 {
    match (a.grad.is_empty(), b.grad.is_empty()) {
        (true, _) => b.scaled(a.value, 0.0),
        (_, true) => a.scaled(b.value, 0.0),
        _ => Jet2::bivariate(a, b, a.value * b.value, b.value, a.value, 0.0, 1.0, 0.0),
    }
}

impl Add<&Jet2> for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        add_jets(self, rhs)
    }
}

impl Sub<&Jet2> for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        add_jets(self, &rhs.scaled(-1.0, 0.0))
    }
}

impl Mul<&Jet2> for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        mul_jets(self, rhs)
    }
}

impl Div<&Jet2> for &Jet2 {
    type Output = Jet2;
    fn div(self, rhs: &Jet2) -> Jet2 {
        if rhs.grad.is_empty() {
            self.scaled(1.0 / rhs.value, 0.0)
        } else {
            mul_jets(self, &rhs.recip())
        }
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scaled(-1.0, 0.0)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scaled(-1.0, 0.0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Jet2> for Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: Jet2) -> Jet2 {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Jet2> for Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: &Jet2) -> Jet2 {
                (&self).$method(rhs)
            }
        }
        impl $tr<Jet2> for &Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: Jet2) -> Jet2 {
                self.$method(&rhs)
            }
        }
        impl $tr<f64> for Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: f64) -> Jet2 {
                (&self).$method(&Jet2::constant(rhs))
            }
        }
        impl $tr<f64> for &Jet2 {
            type Output = Jet2;
            fn $method(self, rhs: f64) -> Jet2 {
                self.$method(&Jet2::constant(rhs))
            }
        }
        impl $tr<Jet2> for f64 {
            type Output = Jet2;
            fn $method(self, rhs: Jet2) -> Jet2 {
                (&Jet2::constant(self)).$method(&rhs)
            }
        }
        impl $tr<&Jet2> for f64 {
            type Output = Jet2;
            fn $method(self, rhs: &Jet2) -> Jet2 {
                (&Jet2::constant(self)).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

/// Sum of jets; the empty sum is the constant 0.
pub fn sum<'a, I: IntoIterator<Item = &'a Jet2>>(terms: I) -> Jet2 {
    terms
        .into_iter()
        .fold(Jet2::constant(0.0), |acc, t| &acc + t)
}
