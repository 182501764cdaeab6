//! Curvature profile of the toy quotient for plotting.

use std::io::Write;

use serde::Serialize;

use hyperkahler::geometry::gaussian_curvature_polar;
use hyperkahler::models::{gaussian_curvature_exact, toy_reduced_metric};
use hyperkahler::{Error, Result};

/// Smallest radius in the profile; the chart degenerates at `r = 0`.
pub const R_MIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    #[serde(rename = "K_numeric")]
    pub k_numeric: f64,
    #[serde(rename = "K_closed_form")]
    pub k_closed_form: f64,
    pub abs_err: f64,
}

/// Rows at `r_i = rmax · i / (steps − 1)`, with `r_0` raised to [`R_MIN`].
pub fn curvature_profile(a: f64, rmax: f64, steps: usize) -> Result<Vec<ProfileRow>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidSpec(format!("a must be positive, got {a}")));
    }
    if steps < 2 {
        return Err(Error::InvalidSpec(format!("steps must be at least 2, got {steps}")));
    }
    if !(rmax > R_MIN && rmax.is_finite()) {
        return Err(Error::InvalidSpec(format!("rmax must exceed {R_MIN}, got {rmax}")));
    }
    let g = toy_reduced_metric(a);
    (0..steps)
        .map(|i| {
            let r = (rmax * i as f64 / (steps - 1) as f64).max(R_MIN);
            let k_numeric = gaussian_curvature_polar(&g, r, 0.0)?;
            let k_closed_form = gaussian_curvature_exact(r, a);
            Ok(ProfileRow {
                r,
                k_numeric,
                k_closed_form,
                abs_err: (k_numeric - k_closed_form).abs(),
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[ProfileRow], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_values() {
        let rows = curvature_profile(1.0, 10.0, 11).unwrap();
        assert_eq!(rows[0].r, R_MIN);
        assert!((rows[0].k_numeric - 4.0).abs() < 1e-6);
        assert!((rows[1].k_closed_form - 0.5).abs() < 1e-15);
        assert!(rows.iter().all(|r| r.abs_err < 1e-6));
    }

    #[test]
    fn csv_header() {
        let mut buf = Vec::new();
        write_csv(&curvature_profile(2.0, 1.0, 2).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "r,K_numeric,K_closed_form,abs_err");
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(curvature_profile(0.0, 1.0, 5).is_err());
        assert!(curvature_profile(1.0, 1.0, 1).is_err());
        assert!(curvature_profile(1.0, 0.0, 5).is_err());
    }
}
