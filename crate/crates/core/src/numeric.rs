//! Summation helpers.
//!
//! Means over rollout batches use pairwise summation so that the result
//! depends only on the order of the inputs, not on how they were produced,
//! and the rounding error grows as `O(log n)`.

const BLOCK: usize = 16;

/// Pairwise sum of a slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= BLOCK {
        xs.iter().fold(0.0, |acc, &x| acc + x)
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Pairwise arithmetic mean. Returns `NaN` for an empty slice.
pub fn pairwise_mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Component-wise pairwise mean of equally sized rows.
pub fn columnwise_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    let mut column = Vec::with_capacity(rows.len());
    (0..first.len())
        .map(|j| {
            column.clear();
            column.extend(rows.iter().map(|r| r[j]));
            pairwise_mean(&column)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_mean(&xs), 500.5);
    }

    #[test]
    fn columnwise() {
        let rows = vec![vec![1.0, 2.0], vec![3.0, 6.0]];
        assert_eq!(columnwise_mean(&rows), vec![2.0, 4.0]);
        assert!(columnwise_mean(&[]).is_empty());
    }
}
