use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::sets::{nondominated_indices, SolutionSet};
use crate::value::ValueVector;

/// The corner from which hypervolume is measured. Every point it is used
/// with must weakly dominate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReferencePoint(pub ValueVector);

impl ReferencePoint {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        Ok(Self(ValueVector::new(components)?))
    }

    /// The component-wise minimum over `points`.
    pub fn worst_of<'a, I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ValueVector>,
    {
        let mut worst: Option<Vec<f64>> = None;
        for p in points {
            match &mut worst {
                None => worst = Some(p.as_slice().to_vec()),
                Some(w) => {
                    check_dims(w.len(), p.dim())?;
                    for (a, b) in w.iter_mut().zip(p.iter()) {
                        *a = a.min(*b);
                    }
                }
            }
        }
        Self::new(worst.ok_or_else(|| Error::Contract("no points to take the worst of".into()))?)
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }
}

/// Volume of objective space dominated by `set` and bounded below by `reference`.
///
/// Exact for two objectives (sweep) and three objectives (slicing along the
/// last objective). Four or more objectives are not supported.
pub fn hypervolume(set: &SolutionSet, reference: &ReferencePoint) -> Result<f64> {
    let dim = set
        .dim()
        .ok_or_else(|| Error::Contract("hypervolume of an empty set".into()))?;
    check_dims(dim, reference.0.dim())?;
    let r = reference.as_slice();
    for v in set.values() {
        if v.iter().zip(r).any(|(x, y)| x < y) {
            return Err(Error::Contract(format!(
                "reference point {} is not weakly dominated by {v}",
                reference.0
            )));
        }
    }
    let rows: Vec<&[f64]> = set.values().map(|v| v.as_slice()).collect();
    let front: Vec<Vec<f64>> = nondominated_indices(rows.clone())
        .into_iter()
        .map(|i| rows[i].iter().zip(r).map(|(x, y)| x - y).collect())
        .collect();
    match dim {
        2 => Ok(area_2d(front.iter().map(|p| (p[0], p[1])).collect())),
        3 => Ok(volume_3d(&front)),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Area dominated by points relative to the origin.
fn area_2d(mut pts: Vec<(f64, f64)>) -> f64 {
    // x descending; on a front y then ascends
    pts.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    let mut area = 0.0;
    let mut covered_y = 0.0;
    for (x, y) in pts {
        if y > covered_y {
            area += x * (y - covered_y);
            covered_y = y;
        }
    }
    area
}

fn volume_3d(pts: &[Vec<f64>]) -> f64 {
    let mut order: Vec<&Vec<f64>> = pts.iter().collect();
    order.sort_by(|a, b| b[2].total_cmp(&a[2]));
    let mut volume = 0.0;
    let mut slice: Vec<(f64, f64)> = Vec::with_capacity(order.len());
    let mut i = 0;
    while i < order.len() {
        let z = order[i][2];
        while i < order.len() && order[i][2] == z {
            slice.push((order[i][0], order[i][1]));
            i += 1;
        }
        let next_z = order.get(i).map_or(0.0, |p| p[2]);
        volume += area_2d(slice.clone()) * (z - next_z);
    }
    volume
}
