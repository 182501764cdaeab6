//! Verification suites over the model registry.
//!
//! Every check reduces to a worst-case error over its sample set and a
//! tolerance. Negative controls report `max(0, required − observed)` against
//! a zero tolerance, so they pass exactly when the violation is detected.

use std::f64::consts::PI;
use std::time::Instant;

use clap::ValueEnum;
use nalgebra::DMatrix;
use num_complex::Complex64;

use hyperkahler::geometry::{
    covariant_derivative_02, euler_characteristic, gaussian_curvature_polar, killing_deviation,
    scalar_curvature, MetricField, RadialDomain,
};
use hyperkahler::kahler::{
    coset_metric, heavenly_check, heavenly_sweep, sp_algebra_residual, sp_generators,
    spin_connection_trace, triple_at, triple_forms, HermitianMetricField, SymplecticMatrix, Triple,
};
use hyperkahler::mechanics::{
    constrain_and_reduce, hamiltonian_to_lagrangian, legendre_to_hamiltonian, momentum, poisson_bracket,
    PhasePoint, QuadraticKinetic,
};
use hyperkahler::models::{
    cartesian_triple, curvature_target, d5_metric, gaussian_curvature_exact, gh_flat_metric, gh_flat_triple,
    monge_ampere, monge_ampere_exclusion, non_unimodular, origin_exclusion, psi_branch_exclusion,
    r8_cartesian_killing, r8_cartesian_metric, r8_cartesian_triple, r8_gh_killing, r8_gh_metric,
    r8_moment_maps, string_exclusion, taub_nut_metric, taub_nut_metric_field, taub_nut_reduction,
    taub_nut_triple, taub_nut_triple_forms, toy_form, toy_killing, toy_lagrangian, toy_level_metric,
    toy_metric, toy_moment_map, toy_reduced_form, toy_reduced_metric, toy_reduction, var_change,
    var_change_inverse, Model, ModelRegistry, EULER_TARGET,
};
use hyperkahler::numcore::{evaluate_jet, fd_oracle, sample_points, Exclusion, Jet2, SampleSpec, ScalarField};
use hyperkahler::reduction::{
    contract, contract_field, exterior_derivative, pullback_form, pullback_metric, recover_moment_map, FormField,
};
use hyperkahler::{Error, Result};

use crate::report::{CheckReport, RunManifest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Heavenly,
    Toy,
    Taubnut,
    Mechanics,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Heavenly => "heavenly",
            Suite::Toy => "toy",
            Suite::Taubnut => "taubnut",
            Suite::Mechanics => "mechanics",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub samples: usize,
    pub a: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 50,
            a: vec![1.0],
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidSpec("samples must be at least 1".into()));
        }
        if self.a.is_empty() {
            return Err(Error::InvalidSpec("at least one value of a is required".into()));
        }
        for &a in &self.a {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::InvalidSpec(format!("a must be positive, got {a}")));
            }
        }
        Ok(())
    }

    fn points(&self, bounds: Vec<(f64, f64)>, exclusions: Vec<Exclusion>, salt: u64) -> Result<Vec<Vec<f64>>> {
        let spec = SampleSpec::new(bounds, self.samples, self.seed.wrapping_mul(0x9e37_79b9).wrapping_add(salt))?
            .with_exclusions(exclusions);
        Ok(sample_points(&spec)?.into_iter().map(|p| p.into_inner()).collect())
    }

    fn model_points(&self, m: &Model, salt: u64) -> Result<Vec<Vec<f64>>> {
        self.points(m.bounds.clone(), m.exclusions.clone(), salt)
    }
}

/// Runs a suite. Checks come back sorted by id.
pub fn run(suite: Suite, cfg: &Config) -> Result<RunManifest> {
    cfg.validate()?;
    let mut c = Collector::default();
    if matches!(suite, Suite::All | Suite::Heavenly) {
        heavenly(&mut c, cfg);
    }
    for &a in &cfg.a {
        if matches!(suite, Suite::All | Suite::Toy) {
            toy(&mut c, cfg, a);
        }
        if matches!(suite, Suite::All | Suite::Mechanics) {
            mechanics(&mut c, cfg, a);
        }
        if matches!(suite, Suite::All | Suite::Taubnut) {
            taubnut(&mut c, cfg, a);
        }
    }
    if matches!(suite, Suite::All | Suite::Taubnut) {
        coordinate_change(&mut c, cfg);
    }
    let mut ids: Vec<&str> = c.out.iter().map(|r| r.check_id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Internal(format!("duplicate check id `{}`", w[0])));
    }
    Ok(RunManifest::new(suite.name(), cfg.seed, cfg.samples, cfg.a.clone(), c.out))
}

/// Worst error over a sample set.
struct Measure {
    samples: usize,
    error: f64,
}

fn worst<P, F>(points: &[P], mut f: F) -> Result<Measure>
where
    P: AsRef<[f64]>,
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut error = 0.0f64;
    for p in points {
        let e = f(p.as_ref())?;
        error = if e.is_nan() { f64::NAN } else { error.max(e) };
    }
    Ok(Measure {
        samples: points.len(),
        error,
    })
}

#[derive(Default)]
struct Collector {
    out: Vec<CheckReport>,
}

impl Collector {
    fn check<F>(&mut self, id: String, description: &str, tolerance: f64, f: F)
    where
        F: FnOnce() -> Result<Measure>,
    {
        self.record(id, description, tolerance, None, f);
    }

    /// Passes when the observed violation is at least `required`.
    fn control<F>(&mut self, id: String, description: &str, required: f64, f: F)
    where
        F: FnOnce() -> Result<Measure>,
    {
        self.record(id, description, 0.0, Some(required), f);
    }

    fn record<F>(&mut self, id: String, description: &str, tolerance: f64, required: Option<f64>, f: F)
    where
        F: FnOnce() -> Result<Measure>,
    {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed().as_millis() as u64;
        let report = match outcome {
            Ok(m) => {
                let error = match required {
                    Some(_) if m.error.is_nan() => f64::NAN,
                    Some(req) => (req - m.error).max(0.0),
                    None => m.error,
                };
                CheckReport::new(id, description, m.samples, error, tolerance, elapsed)
            }
            Err(e) => CheckReport::new(id, format!("{description} [error: {e}]"), 0, f64::NAN, tolerance, elapsed),
        };
        self.out.push(report);
    }
}

fn tag(a: f64) -> String {
    format!("[a={a}]")
}

fn diff(x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (x - y).amax()
}

fn raise_forms(forms: &[FormField], g: &MetricField, p: &[f64]) -> Result<Triple> {
    Triple {
        i: forms[0].matrix(p)?,
        j: forms[1].matrix(p)?,
        k: forms[2].matrix(p)?,
    }
    .raise(&g.matrix(p)?)
}

/// `max_{P,M,N} |∇_P ω_{MN}|` over several forms.
fn covariant_residual(g: &MetricField, forms: &[FormField], p: &[f64]) -> Result<f64> {
    forms.iter().try_fold(0.0f64, |m, w| Ok(m.max(covariant_derivative_02(g, w.field(), p)?.max_abs())))
}

/// `max |∇(J ± iK)|`, the same for both signs.
fn holomorphic_residual(h: &HermitianMetricField, omega: &SymplecticMatrix, c: f64, p: &[f64]) -> Result<f64> {
    let [_, j, k] = triple_forms(h, omega, c)?;
    let g = h.real_metric();
    let dj = covariant_derivative_02(&g, j.field(), p)?;
    let dk = covariant_derivative_02(&g, k.field(), p)?;
    Ok(dj
        .as_slice()
        .iter()
        .zip(dk.as_slice())
        .fold(0.0f64, |m, (a, b)| m.max(a.hypot(*b))))
}

/// Worst jet-vs-finite-difference errors `(gradient, hessian)` over the
/// fields at the points. With `relative`, errors at a point are divided by
/// `max(1, |f(p)|)`.
fn oracle(fields: &[ScalarField], points: &[Vec<f64>], exclusions: &[Exclusion], relative: bool) -> Result<(f64, f64)> {
    let (mut grad, mut hess) = (0.0f64, 0.0f64);
    for p in points {
        for f in fields {
            let (jet, fd) = (evaluate_jet(f, p)?, fd_oracle(f, p, exclusions)?);
            let scale = if relative { jet.value().abs().max(1.0) } else { 1.0 };
            for i in 0..p.len() {
                grad = grad.max((jet.d(i) - fd.d(i)).abs() / scale);
                for j in 0..p.len() {
                    hess = hess.max((jet.hessian(i, j) - fd.hessian(i, j)).abs() / scale);
                }
            }
        }
    }
    Ok((grad, hess))
}

fn oracle_checks(
    c: &mut Collector,
    prefix: &str,
    fields: &[ScalarField],
    points: &[Vec<f64>],
    exclusions: &[Exclusion],
    relative: bool,
) {
    let start = Instant::now();
    let result = oracle(fields, points, exclusions, relative);
    let elapsed = start.elapsed().as_millis() as u64;
    let samples = points.len() * fields.len();
    for (which, tol, pick) in [("gradient", 1e-6, 0usize), ("hessian", 1e-4, 1)] {
        let mut description = format!("jet {which} vs central differences on {} scalar fields", fields.len());
        if relative {
            description.push_str(", error relative to max(1, |f|)");
        }
        let (error, samples, description) = match &result {
            Ok(e) => (if pick == 0 { e.0 } else { e.1 }, samples, description),
            Err(err) => (f64::NAN, 0, format!("{description} [error: {err}]")),
        };
        c.out.push(CheckReport::new(format!("{prefix}.{which}"), description, samples, error, tol, elapsed));
    }
}

fn model_oracle(c: &mut Collector, cfg: &Config, reg: &Result<ModelRegistry>, name: &str, a: Option<f64>, salt: u64) {
    let prefix = match a {
        Some(a) => format!("oracle.{name}{}", tag(a)),
        None => format!("oracle.{name}"),
    };
    let model = reg.as_ref().map_err(Clone::clone).and_then(|r| r.get(name).cloned());
    match model.and_then(|m| cfg.model_points(&m, salt).map(|pts| (m, pts))) {
        Ok((m, pts)) => oracle_checks(c, &prefix, &m.all_scalar_fields(), &pts, &m.exclusions, false),
        Err(e) => c.check(prefix, "model construction", 0.0, || Err(e)),
    }
}

// heavenly

fn coset_samples(cfg: &Config, n: usize, salt: u64) -> Result<Vec<HermitianMetricField>> {
    let gens = sp_generators(n)?;
    cfg.points(vec![(-1.0, 1.0); gens.len()], vec![], salt)?
        .iter()
        .map(|v| coset_metric(v, &gens))
        .collect()
}

fn ma_points(cfg: &Config, n: usize, salt: u64) -> Result<Vec<Vec<f64>>> {
    cfg.points(vec![(-1.5, 1.5); 2 * n], vec![monge_ampere_exclusion(n, 0.2)], salt)
}

const MA_C: f64 = 0.8;

fn heavenly(c: &mut Collector, cfg: &Config) {
    for n in [2usize, 4] {
        let omega = SymplecticMatrix::new(n).expect("even");
        let origin = vec![0.0; 2 * n];
        c.check(
            format!("heavenly.coset.c_unity.n{n}"),
            "heavenly_check on coset metrics exp(v·t) returns C = 1",
            1e-10,
            || {
                let hs = coset_samples(cfg, n, 10 + n as u64)?;
                let mut e = 0.0f64;
                for h in &hs {
                    e = e.max((heavenly_check(&h.matrix(&origin)?, &omega)? - 1.0).abs());
                }
                Ok(Measure { samples: hs.len(), error: e })
            },
        );
        c.check(
            format!("heavenly.quaternion.coset.n{n}"),
            "I² = J² = K² = −1, IJ = K, JK = I, KI = J on coset metrics",
            1e-10,
            || {
                let hs = coset_samples(cfg, n, 20 + n as u64)?;
                let mut e = 0.0f64;
                for h in &hs {
                    e = e.max(triple_at(h, &omega, &origin)?.mixed.quaternion_residual());
                }
                Ok(Measure { samples: hs.len(), error: e })
            },
        );
        c.check(
            format!("heavenly.covariant_constancy.coset.n{n}"),
            "∇(J ± iK) = 0 on coset metrics",
            1e-8,
            || {
                let hs = coset_samples(cfg, n, 30 + n as u64)?;
                let mut e = 0.0f64;
                for h in &hs {
                    let cc = heavenly_check(&h.matrix(&origin)?, &omega)?;
                    e = e.max(holomorphic_residual(h, &omega, cc, &origin)?);
                }
                Ok(Measure { samples: hs.len(), error: e })
            },
        );
        c.check(
            format!("heavenly.sp_algebra.coset.n{n}"),
            "X_p Ω + Ω X_pᵀ = 0 on coset metrics",
            1e-8,
            || {
                let hs = coset_samples(cfg, n, 40 + n as u64)?;
                let mut e = 0.0f64;
                for h in &hs {
                    e = e.max(sp_algebra_residual(h, &omega, &origin)?);
                }
                Ok(Measure { samples: hs.len(), error: e })
            },
        );

        let ma = || monge_ampere(n, MA_C);
        c.check(
            format!("heavenly.c_unity.monge_ampere.n{n}"),
            "heavenly_check on the Monge–Ampère metric returns C = 1",
            1e-10,
            || {
                let h = ma()?;
                worst(&ma_points(cfg, n, 50 + n as u64)?, |p| Ok((heavenly_check(&h.matrix(p)?, &omega)? - 1.0).abs()))
            },
        );
        c.check(
            format!("heavenly.quaternion.monge_ampere.n{n}"),
            "quaternion algebra of the triple on the Monge–Ampère metric",
            1e-10,
            || {
                let h = ma()?;
                worst(&ma_points(cfg, n, 60 + n as u64)?, |p| Ok(triple_at(&h, &omega, p)?.mixed.quaternion_residual()))
            },
        );
        c.check(
            format!("heavenly.covariant_constancy.monge_ampere.n{n}"),
            "∇(J ± iK) = 0 on the Monge–Ampère metric",
            1e-8,
            || {
                let h = ma()?;
                worst(&ma_points(cfg, n, 70 + n as u64)?, |p| holomorphic_residual(&h, &omega, 1.0, p))
            },
        );
        c.check(
            format!("heavenly.sp_algebra.monge_ampere.n{n}"),
            "X_p Ω + Ω X_pᵀ = 0 on the Monge–Ampère metric",
            1e-8,
            || {
                let h = ma()?;
                worst(&ma_points(cfg, n, 80 + n as u64)?, |p| sp_algebra_residual(&h, &omega, p))
            },
        );
        c.check(
            format!("heavenly.spin_trace.monge_ampere.n{n}"),
            "trace of the spin connection vanishes on the Monge–Ampère metric",
            1e-8,
            || {
                let h = ma()?;
                worst(&ma_points(cfg, n, 90 + n as u64)?, |p| Ok(spin_connection_trace(&h, p)?.max_abs()))
            },
        );
        c.check(
            format!("heavenly.oracle_potential.monge_ampere.n{n}"),
            "metric equals the Wirtinger Hessian of its potential",
            1e-8,
            || {
                let h = ma()?;
                let k = h.potential().cloned().ok_or_else(|| Error::Internal("missing potential".into()))?;
                worst(&ma_points(cfg, n, 100 + n as u64)?, |p| {
                    let from_k = hyperkahler::kahler::metric_from_potential(&k, p)?;
                    Ok((from_k - h.matrix(p)?).iter().fold(0.0f64, |m, z| m.max(z.norm())))
                })
            },
        );
        c.check(
            format!("heavenly.c_constancy.monge_ampere.n{n}"),
            "spread of C across sample points",
            1e-10,
            || {
                let pts = ma_points(cfg, n, 110 + n as u64)?;
                let s = heavenly_sweep(&ma()?, &omega, &pts)?;
                Ok(Measure { samples: s.points, error: s.c_spread() })
            },
        );
    }

    let omega2 = SymplecticMatrix::new(2).expect("even");
    c.check(
        "heavenly.det_consistency.n2".into(),
        "C equals det h for random constant Hermitian 2×2 metrics",
        1e-12,
        || {
            worst(&cfg.points(vec![(-1.0, 1.0); 4], vec![], 120)?, |v| {
                let a = DMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        Complex64::new(v[0], 0.0),
                        Complex64::new(v[1], v[2]),
                        Complex64::new(0.0, v[3]),
                        Complex64::new(v[2], -v[1]),
                    ],
                );
                let h = &a * a.adjoint() + DMatrix::<Complex64>::identity(2, 2);
                let det = h.determinant().re;
                Ok((heavenly_check(&h, &omega2)? - det).abs())
            })
        },
    );

    let omega4 = SymplecticMatrix::new(4).expect("even");
    c.control(
        "heavenly.negative_control.diag_1_1_2_1".into(),
        "heavenly_check rejects h = diag(1, 1, 2, 1)",
        1.0,
        || {
            let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
                [1.0, 1.0, 2.0, 1.0].map(|x| Complex64::new(x, 0.0)).to_vec(),
            ));
            let rejected = matches!(heavenly_check(&h, &omega4), Err(Error::ConditionViolated { .. }));
            Ok(Measure { samples: 1, error: if rejected { 1.0 } else { 0.0 } })
        },
    );
    c.control(
        "heavenly.negative_control.quaternion".into(),
        "the triple of h = diag(1, 1, 2, 1) is not quaternionic",
        1e-3,
        || {
            let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
                [1.0, 1.0, 2.0, 1.0].map(|x| Complex64::new(x, 0.0)).to_vec(),
            ));
            let h = HermitianMetricField::constant("diag(1,1,2,1)", h);
            Ok(Measure { samples: 1, error: triple_at(&h, &omega4, &[0.0; 8])?.mixed.quaternion_residual() })
        },
    );
    let nu_points = || cfg.points(vec![(-1.5, 1.5); 4], vec![], 130);
    c.control(
        "heavenly.negative_control.covariant_constancy".into(),
        "∇(J ± iK) has a component above 1e-3 for h = diag(1 + |z¹|², 1)",
        1e-3,
        || worst(&nu_points()?, |p| holomorphic_residual(&non_unimodular(), &omega2, 1.0, p)),
    );
    c.control(
        "heavenly.negative_control.spin_trace".into(),
        "spin-connection trace is nonzero for h = diag(1 + |z¹|², 1)",
        1e-3,
        || worst(&nu_points()?, |p| Ok(spin_connection_trace(&non_unimodular(), p)?.max_abs())),
    );
    c.control(
        "heavenly.negative_control.c_constancy".into(),
        "C = det h varies across points for h = diag(1 + |z¹|², 1)",
        1e-3,
        || {
            let s = heavenly_sweep(&non_unimodular(), &omega2, &nu_points()?)?;
            Ok(Measure { samples: s.points, error: s.c_spread() })
        },
    );

    let potentials: Vec<ScalarField> = [monge_ampere(2, MA_C), monge_ampere(4, MA_C)]
        .into_iter()
        .filter_map(|h| h.ok().and_then(|h| h.potential().cloned()))
        .collect();
    let p2 = ma_points(cfg, 2, 140).unwrap_or_default();
    let p4 = ma_points(cfg, 4, 141).unwrap_or_default();
    // potentials grow like |z|², so the fixed-step second difference has
    // roundoff proportional to |f|
    oracle_checks(c, "heavenly.oracle.monge_ampere.n2", &potentials[..1], &p2, &[monge_ampere_exclusion(2, 0.1)], true);
    oracle_checks(c, "heavenly.oracle.monge_ampere.n4", &potentials[1..], &p4, &[monge_ampere_exclusion(4, 0.1)], true);
    let nu = non_unimodular().potential().cloned().expect("potential");
    oracle_checks(c, "heavenly.oracle.non_unimodular", &[nu], &nu_points().unwrap_or_default(), &[], true);
}

// toy

const R_BOX: (f64, f64) = (0.3, 3.0);
const ANGLE: (f64, f64) = (0.1, 5.9);

fn toy_level_points(cfg: &Config, salt: u64) -> Result<Vec<Vec<f64>>> {
    cfg.points(vec![R_BOX, ANGLE, ANGLE], vec![], salt)
}

fn toy_quotient_points(cfg: &Config, salt: u64) -> Result<Vec<Vec<f64>>> {
    cfg.points(vec![R_BOX, ANGLE], vec![], salt)
}

/// `r ∈ [1e-6, 10]`: the endpoint, a log-spaced run towards the origin and a
/// uniform grid.
fn curvature_grid() -> Vec<[f64; 1]> {
    let mut r: Vec<[f64; 1]> = (0..=6).map(|k| [10f64.powi(-6 + k)]).collect();
    r.extend((1..=200).map(|i| [10.0 * i as f64 / 200.0]));
    r
}

fn toy(c: &mut Collector, cfg: &Config, a: f64) {
    let t = tag(a);
    let spec = || toy_reduction(a);
    c.check(format!("toy.killing{t}"), "V = ∂_φ + ∂_θ is Killing for the parent metric", 1e-10, || {
        let pts = cfg.points(vec![R_BOX, ANGLE, (-2.0, 2.0), ANGLE], vec![], 200)?;
        worst(&pts, |p| Ok(killing_deviation(&toy_metric(a), &toy_killing(), p)?.amax()))
    });
    c.check(format!("toy.moment_map{t}"), "dμ = ι_V ω at parent points", 1e-8, || {
        let pts = cfg.points(vec![R_BOX, ANGLE, (-2.0, 2.0), ANGLE], vec![], 201)?;
        let mu = toy_moment_map(a);
        worst(&pts, |p| {
            let (dmu, iota) = (evaluate_jet(&mu, p)?, contract(&toy_form(a), &toy_killing(), p)?);
            Ok(iota.iter().enumerate().fold(0.0f64, |m, (k, v)| m.max((dmu.d(k) - v).abs())))
        })
    });
    c.check(
        format!("toy.moment_map_recovered{t}"),
        "line integral of ι_V ω reproduces μ",
        1e-8,
        || {
            let pts = cfg.points(vec![R_BOX, ANGLE, (-2.0, 2.0), ANGLE], vec![], 202)?;
            let alpha = contract_field(&toy_form(a), &toy_killing())?;
            let mu = toy_moment_map(a);
            let base = [1.0, 1.0, 0.0, 1.0];
            let b = mu.value(&base)?;
            worst(&pts, |p| Ok((recover_moment_map(&alpha, &base, b, p)? - mu.value(p)?).abs()))
        },
    );
    c.check(format!("toy.level_set{t}"), "μ vanishes along the level-set embedding", 1e-12, || {
        let s = spec()?;
        let mu = toy_moment_map(a);
        worst(&toy_level_points(cfg, 203)?, |x| Ok(mu.value(&s.level().eval(x)?)?.abs()))
    });
    c.check(
        format!("toy.level_metric{t}"),
        "pullback of the parent metric onto μ = 0 equals the closed-form level-set metric",
        1e-10,
        || {
            let g = spec()?.level_metric()?;
            let closed = toy_level_metric(a);
            worst(&toy_level_points(cfg, 204)?, |x| Ok(diff(&g.matrix(x)?, &closed.matrix(x)?)))
        },
    );
    c.check(
        format!("toy.quotient_metric{t}"),
        "quotient_metric equals (1 + r²/a²) dr² + a²r²/(r² + a²) dχ²",
        1e-10,
        || {
            let s = spec()?;
            let closed = toy_reduced_metric(a);
            worst(&toy_quotient_points(cfg, 205)?, |q| Ok(diff(&s.reduced_metric(q)?, &closed.matrix(q)?)))
        },
    );
    c.check(format!("toy.quotient_form{t}"), "quotient form equals r dr∧dχ", 1e-10, || {
        let s = spec()?;
        worst(&toy_quotient_points(cfg, 206)?, |q| Ok(diff(&s.reduced_forms(q)?[0], &toy_reduced_form().matrix(q)?)))
    });
    c.check(format!("toy.quotient_closed{t}"), "quotient form is closed", 1e-8, || {
        let w = spec()?.reduced_form_fields()?;
        worst(&toy_quotient_points(cfg, 207)?, |q| Ok(exterior_derivative(&w[0], q)?.max_abs()))
    });
    c.check(
        format!("toy.quotient_complex_structure{t}"),
        "I = −g⁻¹ω̃ on the quotient squares to −1 and ∇ω̃ = 0",
        1e-8,
        || {
            let s = spec()?;
            let (g, w) = (s.reduced_metric_field()?, s.reduced_form_fields()?);
            worst(&toy_quotient_points(cfg, 208)?, |q| {
                let gm = g.matrix(q)?;
                let i = -(gm.clone().try_inverse().ok_or(Error::Domain("singular quotient metric".into()))?
                    * w[0].matrix(q)?);
                let sq = (&i * &i + DMatrix::<f64>::identity(2, 2)).amax();
                Ok(sq.max(covariant_residual(&g, &w, q)?))
            })
        },
    );
    c.check(
        format!("toy.curvature.stated_target{t}"),
        "Gaussian curvature of the quotient vs the stated 8a⁴/(r² + a²)³ on r ∈ [1e-6, 10]",
        1e-6,
        || {
            let g = toy_reduced_metric(a);
            worst(&curvature_grid(), |r| Ok((gaussian_curvature_polar(&g, r[0], 0.0)? - curvature_target(r[0], a)).abs()))
        },
    );
    c.check(
        format!("toy.curvature.gaussian{t}"),
        "Gaussian curvature of the quotient vs 4a⁴/(r² + a²)³ on r ∈ [1e-6, 10]",
        1e-6,
        || {
            let g = toy_reduced_metric(a);
            worst(&curvature_grid(), |r| {
                Ok((gaussian_curvature_polar(&g, r[0], 0.0)? - gaussian_curvature_exact(r[0], a)).abs())
            })
        },
    );
    c.check(
        format!("toy.curvature.scalar{t}"),
        "scalar curvature of the quotient vs 8a⁴/(r² + a²)³",
        1e-8,
        || {
            let g = toy_reduced_metric(a);
            worst(&toy_quotient_points(cfg, 209)?, |q| Ok((scalar_curvature(&g, q)? - curvature_target(q[0], a)).abs()))
        },
    );
    c.check(
        format!("toy.euler_characteristic{t}"),
        "(1/2π)∫ K √g of the quotient vs the stated value 2",
        1e-6,
        || {
            let chi = euler_characteristic(&toy_reduced_metric(a), RadialDomain::new(a), 2.0 * PI)?;
            Ok(Measure { samples: 1, error: (chi.value - EULER_TARGET).abs() })
        },
    );
    let reg = ModelRegistry::new(a);
    model_oracle(c, cfg, &reg, "toy-parent", Some(a), 210);
    model_oracle(c, cfg, &reg, "toy-reduced", Some(a), 211);
}

// mechanics

fn phase_points(cfg: &Config, q_bounds: Vec<(f64, f64)>, exclusions: Vec<Exclusion>, salt: u64) -> Result<Vec<PhasePoint>> {
    let n = q_bounds.len();
    let qs = cfg.points(q_bounds, exclusions, salt)?;
    let ps = cfg.points(vec![(-1.0, 1.0); n], vec![], salt + 1)?;
    qs.into_iter().zip(ps).map(|(q, p)| PhasePoint::new(q, p)).collect()
}

fn reduction_checks(
    c: &mut Collector,
    name: &str,
    l: impl Fn() -> Result<QuadraticKinetic>,
    fiber: usize,
    reduced: impl Fn(&[f64]) -> Result<DMatrix<f64>>,
    points: impl Fn(u64) -> Result<Vec<PhasePoint>>,
    salt: u64,
) {
    c.check(format!("mechanics.legendre_round_trip.{name}"), "L → H → L is the identity", 1e-12, || {
        let l = l()?;
        worst(&points(salt)?.iter().map(|s| s.q().to_vec()).collect::<Vec<_>>(), |q| {
            let m = l.mass_matrix(q)?;
            Ok(diff(&hamiltonian_to_lagrangian(&legendre_to_hamiltonian(&l, q)?)?, &m) / m.amax().max(1.0))
        })
    });
    c.check(format!("mechanics.cyclic_momentum.{name}"), "{p_fiber, H} = 0", 1e-12, || {
        let l = l()?;
        let (h, pf) = (l.hamiltonian(), momentum(fiber, l.dim()));
        let probes = points(salt + 2)?;
        let error = probes
            .iter()
            .try_fold(0.0f64, |m, s| Ok::<_, Error>(m.max(poisson_bracket(&pf, &h, s)?.abs())))?;
        Ok(Measure { samples: probes.len(), error })
    });
    c.check(
        format!("mechanics.hamiltonian_reduction.{name}"),
        "constrain_and_reduce at p_fiber = 0 equals quotient_metric",
        1e-12,
        || {
            let l = l()?;
            let probes = points(salt + 4)?;
            let red = constrain_and_reduce(&l, fiber, 0.0, &probes)?;
            let qs: Vec<Vec<f64>> = probes
                .iter()
                .map(|s| s.q().iter().enumerate().filter(|&(i, _)| i != fiber).map(|(_, v)| *v).collect())
                .collect();
            worst(&qs, |q| Ok(diff(&red.mass_matrix(q)?, &reduced(q)?)))
        },
    );
}

fn mechanics(c: &mut Collector, cfg: &Config, a: f64) {
    let t = tag(a);
    // toy Lagrangian in (r, χ, θ); quotient in (r, χ)
    reduction_checks(
        c,
        &format!("toy{t}"),
        || toy_lagrangian(a),
        2,
        |q| toy_reduction(a)?.reduced_metric(q),
        |salt| phase_points(cfg, vec![R_BOX, ANGLE, ANGLE], vec![], salt),
        300,
    );
    // level-set Lagrangian in (x, χ, θ); quotient in (x, χ)
    reduction_checks(
        c,
        &format!("taubnut{t}"),
        || QuadraticKinetic::new(["x1", "x2", "x3", "chi", "theta"].map(String::from).to_vec(), d5_metric(a)),
        4,
        |q| taub_nut_reduction(a)?.reduced_metric(q),
        |salt| {
            phase_points(
                cfg,
                vec![(-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0), ANGLE, ANGLE],
                vec![string_exclusion(0.1), origin_exclusion(0.3)],
                salt,
            )
        },
        310,
    );
}

// Taub-NUT

fn gh_exclusions() -> Vec<Exclusion> {
    vec![string_exclusion(0.1), origin_exclusion(0.3)]
}

const X_BOX: (f64, f64) = (-2.0, 2.0);

fn taubnut(c: &mut Collector, cfg: &Config, a: f64) {
    let t = tag(a);
    let spec = || taub_nut_reduction(a);
    let cart = |salt| cfg.points(vec![(-1.5, 1.5); 8], vec![], salt);
    let level = |salt| cfg.points(vec![X_BOX, X_BOX, X_BOX, ANGLE, ANGLE], gh_exclusions(), salt);
    let quotient = |salt| cfg.points(vec![X_BOX, X_BOX, X_BOX, ANGLE], gh_exclusions(), salt);
    c.check(format!("taubnut.killing{t}"), "V is Killing on R⁸ in both charts", 1e-10, || {
        let m1 = worst(&cart(400)?, |p| Ok(killing_deviation(&r8_cartesian_metric(a), &r8_cartesian_killing(), p)?.amax()))?;
        let gh = cfg.points(vec![X_BOX, X_BOX, X_BOX, (0.1, 4.0 * PI - 0.1), X_BOX, X_BOX, X_BOX, ANGLE], gh_exclusions(), 401)?;
        let m2 = worst(&gh, |p| Ok(killing_deviation(&r8_gh_metric(a), &r8_gh_killing(), p)?.amax()))?;
        Ok(Measure { samples: m1.samples + m2.samples, error: m1.error.max(m2.error) })
    });
    c.check(format!("taubnut.moment_maps{t}"), "dμ = ι_V ω for the three moment maps", 1e-8, || {
        let mus = r8_moment_maps(a);
        let forms = r8_cartesian_triple(a);
        worst(&cart(402)?, |p| {
            let mut e = 0.0f64;
            for (w, mu) in forms.iter().zip(&mus) {
                let (iota, dmu) = (contract(w, &r8_cartesian_killing(), p)?, evaluate_jet(mu, p)?);
                e = iota.iter().enumerate().fold(e, |m, (k, v)| m.max((dmu.d(k) - v).abs()));
            }
            Ok(e)
        })
    });
    c.check(format!("taubnut.level_set{t}"), "the moment maps vanish along the level-set embedding", 1e-12, || {
        let s = spec()?;
        let mu = |k: usize| ScalarField::new("mu", 8, move |x: &[Jet2]| 0.5 * x[k].clone() + a * &x[4 + k]);
        worst(&level(403)?, |x| {
            let y = s.level().eval(x)?;
            (0..3).try_fold(0.0f64, |m, k| Ok(m.max(mu(k).value(&y)?.abs())))
        })
    });
    c.check(
        format!("taubnut.tangency{t}"),
        "the level-set embedding carries ∂_θ to V",
        1e-12,
        || {
            let s = spec()?;
            worst(&level(404)?, |x| s.tangency_residual(x))
        },
    );
    c.check(
        format!("taubnut.level_metric{t}"),
        "pullback of the R⁸ metric onto the level set equals the closed-form 5D metric",
        1e-10,
        || {
            let g = spec()?.level_metric()?;
            let closed = d5_metric(a);
            worst(&level(405)?, |x| Ok(diff(&g.matrix(x)?, &closed.matrix(x)?)))
        },
    );
    c.check(
        format!("taubnut.quotient_metric{t}"),
        "quotient metric equals the Taub-NUT closed form",
        1e-10,
        || {
            let s = spec()?;
            worst(&quotient(406)?, |q| Ok(diff(&s.reduced_metric(q)?, &taub_nut_metric(&q[..3], a)?)))
        },
    );
    c.check(
        format!("taubnut.quotient_forms{t}"),
        "quotient forms equal the Taub-NUT triple",
        1e-8,
        || {
            let s = spec()?;
            worst(&quotient(407)?, |q| {
                let closed = taub_nut_triple(&q[..3], a)?;
                let red = s.reduced_forms(q)?;
                Ok(red.iter().zip(&closed).fold(0.0f64, |m, (x, y)| m.max(diff(x, y))))
            })
        },
    );
    c.check(format!("taubnut.quotient_closed{t}"), "quotient forms are closed", 1e-8, || {
        let ws = spec()?.reduced_form_fields()?;
        worst(&quotient(408)?, |q| {
            ws.iter().try_fold(0.0f64, |m, w| Ok(m.max(exterior_derivative(w, q)?.max_abs())))
        })
    });
    c.check(
        format!("taubnut.quaternion{t}"),
        "the Taub-NUT triple with the Taub-NUT metric is quaternionic",
        1e-7,
        || {
            let (g, forms) = (taub_nut_metric_field(a), taub_nut_triple_forms(a));
            worst(&quotient(409)?, |q| Ok(raise_forms(&forms, &g, q)?.quaternion_residual()))
        },
    );
    c.check(
        format!("taubnut.covariant_constancy{t}"),
        "∇I = ∇J = ∇K = 0 for the Taub-NUT triple",
        1e-7,
        || {
            let (g, forms) = (taub_nut_metric_field(a), taub_nut_triple_forms(a));
            worst(&quotient(410)?, |q| covariant_residual(&g, &forms, q))
        },
    );
    let reg = ModelRegistry::new(a);
    model_oracle(c, cfg, &reg, "r8-parent", Some(a), 411);
    model_oracle(c, cfg, &reg, "taub-nut", Some(a), 412);
}

fn coordinate_change(c: &mut Collector, cfg: &Config) {
    c.check(
        "taubnut.coordinate_change.metric".into(),
        "Gibbons–Hawking form of flat R⁴ pulls back to the Cartesian metric",
        1e-8,
        || {
            let pts = cfg.points(vec![(-1.5, 1.5); 4], vec![psi_branch_exclusion(0.05), origin_exclusion(0.3)], 500)?;
            worst(&pts, |y| Ok(diff(&pullback_metric(&gh_flat_metric(), &var_change(), y)?.matrix, &DMatrix::identity(4, 4))))
        },
    );
    c.check(
        "taubnut.coordinate_change.triple".into(),
        "flat R⁴ triple pulls back to the Gibbons–Hawking triple",
        1e-8,
        || {
            let pts = cfg.points(vec![X_BOX, X_BOX, X_BOX, (0.1, 4.0 * PI - 0.1)], gh_exclusions(), 501)?;
            let inv = var_change_inverse();
            let gh = gh_flat_triple();
            worst(&pts, |p| {
                cartesian_triple().iter().zip(&gh).try_fold(0.0f64, |m, (w, target)| {
                    Ok(m.max(diff(&pullback_form(w, &inv, p)?.matrix, &target.matrix(p)?)))
                })
            })
        },
    );
    model_oracle(c, cfg, &ModelRegistry::new(1.0), "gh-flat", None, 502);
}
