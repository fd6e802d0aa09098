//! Rank statistics for racing.

use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

/// Ranks `1..=k` of `costs` (lower cost, lower rank); ties share their mean rank.
pub fn ranks(costs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..costs.len()).collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]));
    let mut out = vec![0.0; costs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && costs[order[j + 1]] == costs[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = shared;
        }
        i = j + 1;
    }
    out
}

/// Per-candidate mean rank over blocks; `blocks[i][j]` is candidate `j`'s cost
/// on instance `i`.
pub fn mean_ranks(blocks: &[Vec<f64>]) -> Vec<f64> {
    let k = blocks.first().map_or(0, Vec::len);
    let mut sums = vec![0.0; k];
    for block in blocks {
        for (s, r) in sums.iter_mut().zip(ranks(block)) {
            *s += r;
        }
    }
    let b = blocks.len().max(1) as f64;
    sums.into_iter().map(|s| s / b).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub rank_sums: Vec<f64>,
    /// Candidates that differ significantly from the best one (post-hoc
    /// comparison); empty when the omnibus test does not reject.
    pub worse: Vec<usize>,
}

/// Friedman test with Conover's post-hoc comparison against the best rank
/// sum. Returns `None` when every block is fully tied or there are fewer than
/// two blocks or candidates.
pub fn friedman(blocks: &[Vec<f64>], alpha: f64) -> Option<FriedmanOutcome> {
    let b = blocks.len();
    let k = blocks.first().map_or(0, Vec::len);
    if b < 2 || k < 2 {
        return None;
    }
    let (bf, kf) = (b as f64, k as f64);
    let mut rank_sums = vec![0.0; k];
    let mut a1 = 0.0;
    for block in blocks {
        for (s, r) in rank_sums.iter_mut().zip(ranks(block)) {
            *s += r;
            a1 += r * r;
        }
    }
    let c1 = bf * kf * (kf + 1.0).powi(2) / 4.0;
    let denom = a1 - c1;
    if denom <= 1e-12 {
        return None;
    }
    let sum_sq: f64 = rank_sums.iter().map(|r| r * r).sum();
    let statistic = (kf - 1.0) * (sum_sq - bf * c1) / denom;
    let p_value = 1.0 - ChiSquared::new(kf - 1.0).ok()?.cdf(statistic);

    let mut worse = Vec::new();
    if p_value < alpha {
        let df = (bf - 1.0) * (kf - 1.0);
        let t = StudentsT::new(0.0, 1.0, df)
            .ok()?
            .inverse_cdf(1.0 - alpha / 2.0);
        let spread = (2.0 * (bf * a1 - sum_sq) / df).max(0.0).sqrt();
        let critical = t * spread;
        let best = rank_sums.iter().copied().fold(f64::INFINITY, f64::min);
        worse = (0..k).filter(|&j| rank_sums[j] - best > critical).collect();
    }
    Some(FriedmanOutcome {
        statistic,
        p_value,
        rank_sums,
        worse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_with_ties() {
        assert_eq!(ranks(&[0.3, 0.1, 0.2]), vec![3.0, 1.0, 2.0]);
        assert_eq!(ranks(&[0.5, 0.1, 0.5, 0.5]), vec![3.0, 1.0, 3.0, 3.0]);
        assert_eq!(ranks(&[]), Vec::<f64>::new());
    }

    #[test]
    fn fully_tied_blocks_give_no_test() {
        let blocks = vec![vec![1.0, 1.0, 1.0]; 6];
        assert!(friedman(&blocks, 0.05).is_none());
        assert!(friedman(&blocks[..1], 0.05).is_none());
    }

    #[test]
    fn consistent_ordering_is_significant() {
        // Candidate 0 always best, 3 always worst, 1 and 2 alternate.
        let blocks: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                if i % 2 == 0 {
                    vec![0.1, 0.2, 0.3, 0.9]
                } else {
                    vec![0.1, 0.3, 0.2, 0.9]
                }
            })
            .collect();
        let out = friedman(&blocks, 0.05).unwrap();
        // Rank sums 10, 25, 25, 40 over b = 10, k = 4 with no ties:
        // statistic = 12 / (b k (k+1)) · Σ R_j² − 3 b (k+1) = 0.06 · 2950 − 150 = 27.
        assert!((out.statistic - 27.0).abs() < 1e-9, "{}", out.statistic);
        assert!(out.p_value < 1e-4);
        assert_eq!(out.rank_sums, vec![10.0, 25.0, 25.0, 40.0]);
        assert!(out.worse.contains(&3));
        assert!(!out.worse.contains(&0));
    }

    #[test]
    fn random_like_ordering_is_not_significant() {
        let blocks = vec![
            vec![0.1, 0.2, 0.3],
            vec![0.3, 0.1, 0.2],
            vec![0.2, 0.3, 0.1],
            vec![0.1, 0.3, 0.2],
            vec![0.2, 0.1, 0.3],
            vec![0.3, 0.2, 0.1],
        ];
        let out = friedman(&blocks, 0.05).unwrap();
        assert!(out.statistic.abs() < 1e-12);
        assert!(out.worse.is_empty());
    }

    proptest::proptest! {
        #[test]
        fn rank_decisions_survive_monotone_rescaling(
            raw in proptest::collection::vec(proptest::collection::vec(0.001f64..1.0, 4), 5..12),
        ) {
            let rescaled: Vec<Vec<f64>> = raw
                .iter()
                .map(|b| b.iter().map(|&x| (x * 37.0).ln() * 3.0 + 2.0).collect())
                .collect();
            proptest::prop_assert_eq!(mean_ranks(&raw), mean_ranks(&rescaled));
            let (a, b) = (friedman(&raw, 0.05), friedman(&rescaled, 0.05));
            proptest::prop_assert_eq!(a.map(|o| o.worse), b.map(|o| o.worse));
        }
    }
}
