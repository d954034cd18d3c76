//! Points in objective space and linear scalarisation weights.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};

/// A point in `d`-dimensional objective space, `d >= 2`, all components
/// finite. Every objective is maximised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ValueVector(Vec<f64>);

impl ValueVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::Contract(format!(
                "a value vector needs at least 2 objectives, got {}",
                components.len()
            )));
        }
        if let Some(bad) = components.iter().find(|x| !x.is_finite()) {
            return Err(Error::Numeric(format!("non-finite value component {bad}")));
        }
        Ok(Self(components))
    }

    /// The origin of `dim`-dimensional objective space.
    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> + '_ {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, weights: &[f64]) -> Result<f64> {
        check_dims(self.dim(), weights.len())?;
        Ok(self.0.iter().zip(weights).map(|(v, w)| v * w).sum())
    }
}

impl Index<usize> for ValueVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for ValueVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl TryFrom<&[f64]> for ValueVector {
    type Error = Error;

    fn try_from(v: &[f64]) -> Result<Self> {
        Self::new(v.to_vec())
    }
}

impl From<ValueVector> for Vec<f64> {
    fn from(v: ValueVector) -> Self {
        v.0
    }
}

impl AsRef<[f64]> for ValueVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

/// Tolerance on probability-like sums.
pub const SUM_TOLERANCE: f64 = 1e-9;

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Contract("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Domain(format!(
                "weights must be finite and nonnegative: {weights:?}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Domain(format!("weights sum to {total}, not 1")));
        }
        Ok(Self(weights))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for WeightVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

/// Points of the regular simplex lattice with the given resolution:
/// every weight vector whose components are multiples of `1/resolution`.
///
/// For `dim = 2, resolution = 200` this is `w0 ∈ {0, 1/200, …, 1}`.
pub fn simplex_grid(dim: usize, resolution: usize) -> Vec<WeightVector> {
    fn rec(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=remaining {
            prefix.push(k);
            rec(remaining - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    if dim == 0 || resolution == 0 {
        return Vec::new();
    }
    let mut counts = Vec::new();
    rec(resolution, dim, &mut Vec::with_capacity(dim), &mut counts);
    let r = resolution as f64;
    counts
        .into_iter()
        .map(|c| {
            let mut w: Vec<f64> = c.iter().map(|&k| k as f64 / r).collect();
            // put the rounding slack on the last component
            let head: f64 = w[..dim - 1].iter().sum();
            w[dim - 1] = (1.0 - head).max(0.0);
            WeightVector(w)
        })
        .collect()
}

/// Resolution of the standard weight grid.
pub const STANDARD_GRID_RESOLUTION: usize = 200;

/// The standard probe grid of weight vectors for `dim` objectives.
pub fn standard_weight_grid(dim: usize) -> Vec<WeightVector> {
    simplex_grid(dim, STANDARD_GRID_RESOLUTION)
}
