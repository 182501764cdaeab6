//! Deterministic sample points.
//!
//! Candidates are drawn coordinate by coordinate from `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)`; each coordinate is `lo + (hi − lo)·U` with `U` the
//! generator's next `f64` in `[0, 1)`. Rejected candidates consume draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::diff::Exclusion;
use super::point::Point;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SampleSpec {
    bounds: Vec<(f64, f64)>,
    count: usize,
    seed: u64,
    exclusions: Vec<Exclusion>,
}

impl SampleSpec {
    pub fn new(bounds: Vec<(f64, f64)>, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidSpec("count must be at least 1".into()));
        }
        if bounds.is_empty() {
            return Err(Error::InvalidSpec("empty box".into()));
        }
        if let Some(i) = bounds
            .iter()
            .position(|&(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi))
        {
            return Err(Error::InvalidSpec(format!("coordinate {i}: need lo < hi")));
        }
        Ok(Self {
            bounds,
            count,
            seed,
            exclusions: Vec::new(),
        })
    }

    pub fn with_exclusion(mut self, e: Exclusion) -> Self {
        self.exclusions.push(e);
        self
    }

    pub fn with_exclusions(mut self, es: impl IntoIterator<Item = Exclusion>) -> Self {
        self.exclusions.extend(es);
        self
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        &self.exclusions
    }
}

pub fn sample_points(spec: &SampleSpec) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let mut rejected = 0usize;
    while out.len() < spec.count {
        let p: Vec<f64> = spec
            .bounds
            .iter()
            .map(|&(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
            .collect();
        if spec.exclusions.iter().any(|e| e.rejects(&p)) {
            rejected += 1;
            if rejected > 10 * spec.count {
                return Err(Error::SamplingExhausted {
                    requested: spec.count,
                    accepted: out.len(),
                    attempts: out.len() + rejected,
                });
            }
            continue;
        }
        out.push(Point::new(p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_count_rejected() {
        assert!(matches!(
            SampleSpec::new(vec![(0.0, 1.0)], 0, 1),
            Err(Error::InvalidSpec(_))
        ));
        assert!(SampleSpec::new(vec![(1.0, 1.0)], 3, 1).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let spec = SampleSpec::new(vec![(-1.0, 1.0); 3], 20, 42).unwrap();
        assert_eq!(sample_points(&spec).unwrap(), sample_points(&spec).unwrap());
        let other = SampleSpec::new(vec![(-1.0, 1.0); 3], 20, 43).unwrap();
        assert_ne!(sample_points(&spec).unwrap(), sample_points(&other).unwrap());
    }

    #[test]
    fn points_respect_box_and_exclusions() {
        let spec = SampleSpec::new(vec![(-2.0, 2.0); 3], 200, 7)
            .unwrap()
            .with_exclusion(Exclusion::new("monopole string", |x| {
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                r + x[2] < 0.1 * r
            }));
        let pts = sample_points(&spec).unwrap();
        assert_eq!(pts.len(), 200);
        for p in &pts {
            assert!(p.iter().all(|c| (-2.0..2.0).contains(c)));
            let r = p.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!(r + p[2] >= 0.1 * r);
        }
    }

    #[test]
    fn exhaustion() {
        let spec = SampleSpec::new(vec![(0.0, 1.0)], 5, 0)
            .unwrap()
            .with_exclusion(Exclusion::new("everything", |_| true));
        assert!(matches!(
            sample_points(&spec),
            Err(Error::SamplingExhausted { accepted: 0, .. })
        ));
    }
}
