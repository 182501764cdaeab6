use nalgebra::DMatrix;

use super::embedding::{pullback_form_field, pullback_metric_field, EmbeddingMap};
use super::forms::{check_same_dim, contract_field, exterior_derivative, FormField};
use crate::error::{Error, Result};
use crate::geometry::{killing_deviation, MetricField, VectorField};
use crate::numcore::{Jet2, JetFn};

/// Fiber-component tolerance for [`quotient_form`].
pub const FIBER_TOL: f64 = 1e-10;

fn project(g: &[Jet2], v: &[Jet2], n: usize, invariant: &[usize]) -> Result<Vec<Jet2>> {
    let gv: Vec<Jet2> = (0..n)
        .map(|m| (0..n).fold(Jet2::constant(0.0), |acc, k| acc + &g[m * n + k] * &v[k]))
        .collect();
    let vv = (0..n).fold(Jet2::constant(0.0), |acc, m| acc + &gv[m] * &v[m]);
    if !(vv.value() > 0.0) {
        return Err(Error::DegenerateFiber { norm: vv.value() });
    }
    let inv = vv.recip();
    Ok(invariant
        .iter()
        .flat_map(|&a| invariant.iter().map(move |&b| (a, b)))
        .map(|(a, b)| &g[a * n + b] - &gv[a] * &gv[b] * &inv)
        .collect())
}

fn check_indices(n: usize, idx: &[usize]) -> Result<()> {
    match idx.iter().find(|&&i| i >= n) {
        Some(&i) => Err(Error::InvalidSpec(format!("coordinate index {i} out of range for dimension {n}"))),
        None => Ok(()),
    }
}

/// `g_red(U, W) = g(U, W) − g(U, V) g(W, V) / g(V, V)` on the invariant coordinates.
pub fn quotient_metric(g: &MetricField, v: &VectorField, invariant: &[usize], p: &[f64]) -> Result<DMatrix<f64>> {
    check_same_dim(g.dim(), v.dim())?;
    let n = g.dim();
    check_indices(n, invariant)?;
    let gv = Jet2::constants(&g.field().values(p)?);
    let vv = Jet2::constants(&v.values(p)?);
    let block = project(&gv, &vv, n, invariant)?;
    let k = invariant.len();
    Ok(DMatrix::from_fn(k, k, |i, j| block[i * k + j].value()))
}

fn fiber_residual(w: &[f64], n: usize, fiber: usize) -> f64 {
    (0..n).fold(0.0f64, |m, k| m.max(w[fiber * n + k].abs()))
}

/// Invariant block of a form whose fiber components vanish.
pub fn quotient_form(omega: &FormField, fiber: usize, invariant: &[usize], p: &[f64]) -> Result<DMatrix<f64>> {
    let n = omega.dim();
    check_indices(n, invariant)?;
    check_indices(n, &[fiber])?;
    let w = omega.matrix(p)?;
    let residual = fiber_residual(w.as_slice(), n, fiber);
    if residual > FIBER_TOL {
        return Err(Error::Obstruction { residual });
    }
    let k = invariant.len();
    Ok(DMatrix::from_fn(k, k, |i, j| w[(invariant[i], invariant[j])]))
}

/// A `U(1)` reduction: parent space, isometry, zero level set of the moment
/// maps and the split of level-set coordinates into quotient and fiber ones.
///
/// The level-set chart must be adapted to the fiber: the push-forward of
/// `∂_fiber` is the parent Killing vector.
#[derive(Clone, Debug)]
pub struct ReductionSpec {
    name: String,
    metric: MetricField,
    forms: Vec<FormField>,
    killing: VectorField,
    level: EmbeddingMap,
    invariant: Vec<usize>,
    fiber: usize,
    section: f64,
}

impl ReductionSpec {
    pub fn new(
        name: impl Into<String>,
        metric: MetricField,
        forms: Vec<FormField>,
        killing: VectorField,
        level: EmbeddingMap,
        invariant: Vec<usize>,
        fiber: usize,
    ) -> Result<Self> {
        let parent = metric.dim();
        check_same_dim(parent, killing.dim())?;
        check_same_dim(parent, level.target_dim())?;
        for w in &forms {
            check_same_dim(parent, w.dim())?;
            if w.degree() != 2 {
                return Err(Error::InvalidSpec(format!("form `{}` is not a 2-form", w.name())));
            }
        }
        let n = level.source_dim();
        let mut seen = vec![false; n];
        for &i in invariant.iter().chain([&fiber]) {
            check_indices(n, &[i])?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidSpec(format!("coordinate {i} listed twice")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidSpec(
                "invariant and fiber coordinates must cover the level set".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            metric,
            forms,
            killing,
            level,
            invariant,
            fiber,
            section: 0.0,
        })
    }

    /// Value of the fiber coordinate used to lift quotient points.
    pub fn with_section(mut self, value: f64) -> Self {
        self.section = value;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parent_metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn parent_forms(&self) -> &[FormField] {
        &self.forms
    }

    pub fn killing(&self) -> &VectorField {
        &self.killing
    }

    pub fn level(&self) -> &EmbeddingMap {
        &self.level
    }

    pub fn invariant(&self) -> &[usize] {
        &self.invariant
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn level_dim(&self) -> usize {
        self.level.source_dim()
    }

    pub fn quotient_dim(&self) -> usize {
        self.invariant.len()
    }

    /// Level-set point over a quotient point.
    pub fn lift(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_same_dim(self.quotient_dim(), q.len())?;
        let mut x = vec![self.section; self.level_dim()];
        for (&i, &v) in self.invariant.iter().zip(q) {
            x[i] = v;
        }
        Ok(x)
    }

    fn lift_closure(&self) -> impl Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static {
        let (n, invariant, section) = (self.level_dim(), self.invariant.clone(), self.section);
        move |q: &[Jet2]| {
            let mut x = vec![Jet2::constant(section); n];
            for (&i, v) in invariant.iter().zip(q) {
                x[i] = v.clone();
            }
            x
        }
    }

    /// `max |L_V g|` at a parent point.
    pub fn isometry_residual(&self, p: &[f64]) -> Result<f64> {
        Ok(killing_deviation(&self.metric, &self.killing, p)?.amax())
    }

    /// `max |d(ι_V ω)|` over the parent forms.
    pub fn closure_residual(&self, p: &[f64]) -> Result<f64> {
        self.moment_forms()?
            .iter()
            .map(|a| exterior_derivative(a, p).map(|d| d.max_abs()))
            .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
    }

    /// `|φ_* ∂_fiber − V(φ(x))|` at a level-set point.
    pub fn tangency_residual(&self, x: &[f64]) -> Result<f64> {
        let j = self.level.jacobian(x)?;
        let v = self.killing.values(&self.level.eval(x)?)?;
        Ok(v.iter()
            .enumerate()
            .fold(0.0f64, |m, (i, vi)| m.max((j[(i, self.fiber)] - vi).abs())))
    }

    /// The 1-forms `ι_V ω` for each parent form.
    pub fn moment_forms(&self) -> Result<Vec<FormField>> {
        self.forms.iter().map(|w| contract_field(w, &self.killing)).collect()
    }

    pub fn level_metric(&self) -> Result<MetricField> {
        pullback_metric_field(&self.metric, &self.level)
    }

    pub fn level_forms(&self) -> Result<Vec<FormField>> {
        self.forms.iter().map(|w| pullback_form_field(w, &self.level)).collect()
    }

    /// Quotient metric at a quotient point, by projection along `∂_fiber`.
    pub fn reduced_metric(&self, q: &[f64]) -> Result<DMatrix<f64>> {
        let x = self.lift(q)?;
        let v = VectorField::coordinate(self.level_dim(), self.fiber);
        quotient_metric(&self.level_metric()?, &v, &self.invariant, &x)
    }

    /// Quotient forms at a quotient point; fails if any fiber component survives.
    pub fn reduced_forms(&self, q: &[f64]) -> Result<Vec<DMatrix<f64>>> {
        let x = self.lift(q)?;
        self.level_forms()?
            .iter()
            .map(|w| quotient_form(w, self.fiber, &self.invariant, &x))
            .collect()
    }

    /// Quotient metric as a jet field on the quotient chart.
    pub fn reduced_metric_field(&self) -> Result<MetricField> {
        let g = self.level_metric()?.field().closure();
        let lift = self.lift_closure();
        let (n, fiber, invariant) = (self.level_dim(), self.fiber, self.invariant.clone());
        let k = invariant.len();
        Ok(MetricField::new(format!("{}/U(1)", self.name), k, move |q| {
            let mut v = vec![Jet2::constant(0.0); n];
            v[fiber] = Jet2::constant(1.0);
            project(&g(&lift(q)), &v, n, &invariant)
                .unwrap_or_else(|_| vec![Jet2::constant(f64::NAN); k * k])
        }))
    }

    /// Quotient forms as jet fields (invariant block, no fiber check).
    pub fn reduced_form_fields(&self) -> Result<Vec<FormField>> {
        let n = self.level_dim();
        let invariant = self.invariant.clone();
        let k = invariant.len();
        self.level_forms()?
            .into_iter()
            .map(|w| {
                let inner: JetFn = w.field().closure();
                let lift = self.lift_closure();
                let invariant = invariant.clone();
                Ok(FormField::two_form(format!("{}/U(1)", w.name()), k, move |q| {
                    let full = inner(&lift(q));
                    invariant
                        .iter()
                        .flat_map(|&a| invariant.iter().map(move |&b| (a, b)))
                        .map(|(a, b)| full[a * n + b].clone())
                        .collect()
                }))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_level_metric(a: f64) -> MetricField {
        // level set (r, θ, χ) of the toy space
        MetricField::new("toy-level", 3, move |x| {
            let r2 = x[0].square();
            let z = Jet2::constant(0.0);
            vec![
                1.0 + &r2 / (a * a),
                z.clone(),
                z.clone(),
                z.clone(),
                &r2 + a * a,
                r2.clone(),
                z.clone(),
                r2.clone(),
                r2,
            ]
        })
    }

    #[test]
    fn toy_quotient_at_unit_point() {
        let v = VectorField::coordinate(3, 1);
        let m = quotient_metric(&toy_level_metric(1.0), &v, &[0, 2], &[1.0, 0.3, 0.2]).unwrap();
        assert!((m[(0, 0)] - 2.0).abs() < 1e-15);
        assert!((m[(1, 1)] - 0.5).abs() < 1e-15);
        assert_eq!(m[(0, 1)], 0.0);
    }

    #[test]
    fn orthogonal_fiber_leaves_block_unchanged() {
        let g = MetricField::new("block", 3, |x| {
            let z = Jet2::constant(0.0);
            vec![
                2.0 + x[0].square(),
                Jet2::constant(0.3),
                z.clone(),
                Jet2::constant(0.3),
                Jet2::constant(1.0),
                z.clone(),
                z.clone(),
                z,
                Jet2::constant(5.0),
            ]
        });
        let p = [0.4, 0.0, 1.0];
        let m = quotient_metric(&g, &VectorField::coordinate(3, 2), &[0, 1], &p).unwrap();
        let full = g.matrix(&p).unwrap();
        assert_eq!(m, full.view((0, 0), (2, 2)).into_owned());
    }

    #[test]
    fn null_fiber_is_degenerate() {
        let z = VectorField::constant("0", vec![0.0; 3]);
        assert!(matches!(
            quotient_metric(&toy_level_metric(1.0), &z, &[0, 2], &[1.0, 0.0, 0.0]),
            Err(Error::DegenerateFiber { .. })
        ));
    }

    #[test]
    fn quotient_form_checks_fiber() {
        let good = FormField::two_form_terms("r dr^dchi", 3, |x| vec![(0, 2, x[0].clone())]);
        let q = quotient_form(&good, 1, &[0, 2], &[2.0, 0.0, 0.0]).unwrap();
        assert_eq!(q[(0, 1)], 2.0);
        let bad = FormField::two_form_terms("dr^dtheta", 3, |_| vec![(0, 1, Jet2::constant(1e-6))]);
        match quotient_form(&bad, 1, &[0, 2], &[2.0, 0.0, 0.0]) {
            Err(Error::Obstruction { residual }) => assert_eq!(residual, 1e-6),
            other => panic!("{other:?}"),
        }
        let zero = FormField::two_form_terms("0", 3, |_| vec![]);
        assert_eq!(quotient_form(&zero, 1, &[0, 2], &[1.0, 1.0, 1.0]).unwrap().amax(), 0.0);
    }

    #[test]
    fn spec_rejects_incomplete_split() {
        let spec = ReductionSpec::new(
            "bad",
            MetricField::euclidean(2),
            vec![],
            VectorField::coordinate(2, 1),
            EmbeddingMap::identity(2),
            vec![],
            1,
        );
        assert!(matches!(spec, Err(Error::InvalidSpec(_))));
    }
}
