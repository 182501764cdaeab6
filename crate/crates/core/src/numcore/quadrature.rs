//! Adaptive 15-point Gauss–Kronrod quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// 7-point Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_PANELS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of per-panel |K15 − G7| estimates.
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let pair = f(c - h * x)? + f(c + h * x)?;
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Ok(Panel {
        a,
        b,
        value: h * kronrod,
        error: (h * (kronrod - gauss)).abs(),
    })
}

/// Integrates `f` over `[a, b]` until the summed error estimate is below
/// `abs_tol`. Fails with [`Error::Divergent`] if the panel budget runs out.
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut panels = vec![gk15(&f, a, b)?];
    loop {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !error.is_finite() {
            return Err(Error::Divergent { estimate: error });
        }
        if error <= abs_tol {
            break;
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Divergent { estimate: error });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gk15(&f, p.a, mid)?);
        panels.push(gk15(&f, mid, p.b)?);
    }
    // Sum in position order so the result does not depend on refinement order.
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(Integral {
        value: panels.iter().map(|p| p.value).sum(),
        abs_error: panels.iter().map(|p| p.error).sum(),
    })
}

/// `∫_0^∞ f(r) dr` through `r = scale·u/(1−u)`, `u ∈ [0, 1)`.
pub fn integrate_half_line<F>(f: F, scale: f64, abs_tol: f64) -> Result<Integral>
where
    F: Fn(f64) -> Result<f64>,
{
    integrate(
        |u| {
            let w = 1.0 - u;
            let r = scale * u / w;
            Ok(f(r)? * scale / (w * w))
        },
        0.0,
        1.0,
        abs_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let i = integrate(|x| Ok(x.powi(6) - 2.0 * x), 0.0, 2.0, 1e-12).unwrap();
        assert!((i.value - (128.0 / 7.0 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_refines() {
        let i = integrate(|x| Ok(1.0 / (1e-4 + x * x)), -1.0, 1.0, 1e-9).unwrap();
        let exact = 2.0 * (1.0 / 1e-4f64.sqrt()) * (1.0 / 1e-4f64.sqrt()).atan();
        assert!((i.value - exact).abs() < 1e-7, "{} vs {exact}", i.value);
    }

    #[test]
    fn half_line_rational() {
        // ∫_0^∞ r/(r²+1)³ dr = 1/4
        let i = integrate_half_line(|r| Ok(r / (r * r + 1.0).powi(3)), 1.0, 1e-12).unwrap();
        assert!((i.value - 0.25).abs() < 1e-11);
        assert!(i.abs_error < 1e-12);
    }

    #[test]
    fn divergent_integral_is_reported() {
        let e = integrate_half_line(|_| Ok(1.0), 1.0, 1e-8).unwrap_err();
        assert!(matches!(e, Error::Divergent { .. }));
    }
}
