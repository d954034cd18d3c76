use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::sets::SolutionSet;

fn non_empty_dim(set: &SolutionSet, what: &str) -> Result<usize> {
    set.dim().ok_or_else(|| Error::Contract(format!("{what} is empty")))
}

/// Mean squared gap between neighbouring values of each objective, summed
/// over objectives and divided by `|S| − 1`. Lower is denser. A singleton
/// has sparsity 0.
pub fn sparsity(set: &SolutionSet) -> Result<f64> {
    let dim = non_empty_dim(set, "set")?;
    let n = set.len();
    if n == 1 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut column = Vec::with_capacity(n);
    for j in 0..dim {
        column.clear();
        column.extend(set.values().map(|v| v[j]));
        column.sort_by(f64::total_cmp);
        total += column.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>();
    }
    Ok(total / (n - 1) as f64)
}

/// Smallest `ε` such that every point of `reference_front` is matched by a
/// point of `s` within `ε` in every objective. Negative when `s` strictly
/// improves on the whole reference front.
pub fn epsilon_additive(s: &SolutionSet, reference_front: &SolutionSet) -> Result<f64> {
    let d = non_empty_dim(s, "approximation set")?;
    check_dims(d, non_empty_dim(reference_front, "reference front")?)?;
    Ok(reference_front
        .values()
        .map(|r| {
            s.values()
                .map(|v| r.iter().zip(v.iter()).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Smallest `ε` such that every reference point `r` has a point `v` of `s`
/// with `r_i <= v_i (1 + ε)` for all objectives. Both sets must have
/// strictly positive components.
pub fn epsilon_multiplicative(s: &SolutionSet, reference_front: &SolutionSet) -> Result<f64> {
    let d = non_empty_dim(s, "approximation set")?;
    check_dims(d, non_empty_dim(reference_front, "reference front")?)?;
    for v in s.values().chain(reference_front.values()) {
        if v.iter().any(|x| *x <= 0.0) {
            return Err(Error::Domain(format!(
                "multiplicative epsilon needs strictly positive values, got {v}"
            )));
        }
    }
    Ok(reference_front
        .values()
        .map(|r| {
            s.values()
                .map(|v| r.iter().zip(v.iter()).map(|(a, b)| a / b - 1.0).fold(f64::NEG_INFINITY, f64::max))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRatio {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

/// Precision, recall and F-score of `s` against a coverage set `cs`.
///
/// A member `v` of `s` matches an entry `c` of `cs` when
/// `‖v − c‖₁ / ‖c‖₁ < eps`. Precision counts members of `s` that match
/// anything; recall counts entries of `cs` matched at least once, so each
/// coverage-set entry is counted no more than once.
pub fn coverage_ratio(s: &SolutionSet, cs: &SolutionSet, eps: f64) -> Result<CoverageRatio> {
    let d = non_empty_dim(cs, "coverage set")?;
    if let Some(ds) = s.dim() {
        check_dims(d, ds)?;
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let norms: Vec<f64> = cs.values().map(|c| c.iter().map(|x| x.abs()).sum()).collect();
    if norms.contains(&0.0) {
        return Err(Error::Domain("coverage set contains a zero-norm vector".into()));
    }
    let matches = |v: &[f64], ci: usize| {
        let c = cs.entries()[ci].value.as_slice();
        let dist: f64 = v.iter().zip(c).map(|(a, b)| (a - b).abs()).sum();
        dist / norms[ci] < eps
    };
    let mut cs_hit = vec![false; cs.len()];
    let mut s_hit = 0usize;
    for v in s.values() {
        let mut any = false;
        for (ci, hit) in cs_hit.iter_mut().enumerate() {
            if matches(v.as_slice(), ci) {
                *hit = true;
                any = true;
            }
        }
        s_hit += usize::from(any);
    }
    let precision = if s.is_empty() { 0.0 } else { s_hit as f64 / s.len() as f64 };
    let recall = cs_hit.iter().filter(|h| **h).count() as f64 / cs.len() as f64;
    let f_score = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(CoverageRatio { precision, recall, f_score })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&[f64]]) -> SolutionSet {
        SolutionSet::from_rows(rows.iter().copied()).unwrap()
    }

    #[test]
    fn sparsity_examples() {
        assert_eq!(sparsity(&set(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap(), 2.0);
        assert_eq!(sparsity(&set(&[&[3.0, 1.0]])).unwrap(), 0.0);
        assert_eq!(sparsity(&set(&[&[0.0, 2.0], &[1.0, 1.0], &[2.0, 0.0]])).unwrap(), 2.0);
        assert!(sparsity(&SolutionSet::new()).is_err());
    }

    #[test]
    fn additive_examples() {
        let pf = set(&[&[2.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(epsilon_additive(&pf, &pf).unwrap(), 0.0);
        assert_eq!(epsilon_additive(&set(&[&[1.0, 1.0]]), &set(&[&[2.0, 2.0]])).unwrap(), 1.0);
        assert_eq!(epsilon_additive(&set(&[&[1.0, 1.0]]), &pf).unwrap(), 1.0);
        // s beats the reference everywhere
        assert_eq!(epsilon_additive(&set(&[&[3.0, 3.0]]), &set(&[&[2.0, 2.0]])).unwrap(), -1.0);
        assert!(epsilon_additive(&set(&[&[1.0, 1.0]]), &set(&[&[1.0, 1.0, 1.0]])).is_err());
    }

    #[test]
    fn multiplicative_examples() {
        let pf = set(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert_eq!(epsilon_multiplicative(&pf, &pf).unwrap(), 0.0);
        assert_eq!(epsilon_multiplicative(&set(&[&[1.0, 1.0]]), &set(&[&[2.0, 2.0]])).unwrap(), 1.0);
        assert_eq!(epsilon_multiplicative(&set(&[&[2.0, 1.0]]), &set(&[&[4.0, 2.0]])).unwrap(), 1.0);
        assert!(matches!(
            epsilon_multiplicative(&set(&[&[1.0, 1.0]]), &set(&[&[0.0, 2.0]])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coverage_examples() {
        let cs = set(&[&[1.0, 1.0], &[2.0, 0.5], &[0.5, 3.0], &[4.0, 0.1]]);
        let r = coverage_ratio(&cs, &cs, 1e-6).unwrap();
        assert_eq!((r.precision, r.recall, r.f_score), (1.0, 1.0, 1.0));

        let half = set(&[&[1.0, 1.0], &[2.0, 0.5]]);
        let r = coverage_ratio(&half, &cs, 1e-6).unwrap();
        assert_eq!((r.precision, r.recall), (1.0, 0.5));
        assert!((r.f_score - 2.0 / 3.0).abs() < 1e-15);

        let near = set(&[&[1.05, 1.0]]);
        let r = coverage_ratio(&near, &set(&[&[1.0, 1.0]]), 0.1).unwrap();
        assert_eq!(r.precision, 1.0);
        let r = coverage_ratio(&near, &set(&[&[1.0, 1.0]]), 0.02).unwrap();
        assert_eq!(r.precision, 0.0);
        assert_eq!(r.f_score, 0.0);
    }

    #[test]
    fn coverage_recall_counts_each_entry_once() {
        let cs = set(&[&[1.0, 1.0], &[5.0, 5.0]]);
        let s = set(&[&[1.0, 1.0], &[1.01, 1.0], &[0.99, 1.0]]);
        let r = coverage_ratio(&s, &cs, 0.1).unwrap();
        assert_eq!(r.recall, 0.5);
        assert_eq!(r.precision, 1.0);
    }

    #[test]
    fn coverage_errors() {
        let s = set(&[&[1.0, 1.0]]);
        assert!(matches!(coverage_ratio(&s, &set(&[&[0.0, 0.0]]), 0.1), Err(Error::Domain(_))));
        assert!(matches!(coverage_ratio(&s, &s, 0.0), Err(Error::Domain(_))));
    }
}
