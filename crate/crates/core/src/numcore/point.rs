use std::ops::Deref;

use crate::error::{Error, Result};

/// Chart coordinates of a single point.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        match coords.iter().position(|c| !c.is_finite()) {
            Some(i) => Err(Error::NonFinite {
                field: "point".into(),
                component: Some(i),
            }),
            None => Ok(Self(coords)),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
