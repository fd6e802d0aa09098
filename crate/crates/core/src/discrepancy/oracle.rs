//! Brute-force evaluator: every grid corner, every point, both sides.

use super::{scaled_score, volume, Best, DiscrepancyResult, Side};
use crate::pointset::PointSet;
use crate::{Error, Result};

/// Largest `n^d` the oracle accepts.
pub const ORACLE_MAX_CORNERS: f64 = 1e8;

/// Exhaustive evaluation over the full coordinate grid. Cost is
/// `O(n^(d+1))`; intended as a reference for small sets.
pub fn star_discrepancy_oracle(set: &PointSet) -> Result<DiscrepancyResult> {
    let (n, d) = (set.n(), set.d());
    let corners = (n as f64).powi(d as i32);
    if corners > ORACLE_MAX_CORNERS {
        return Err(Error::SizeGuard(corners));
    }

    let axes: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut axis: Vec<f64> = set.points().map(|p| p[j]).collect();
            axis.push(1.0);
            axis.sort_by(f64::total_cmp);
            axis.dedup();
            axis
        })
        .collect();

    let mut best = Best::new();
    let mut idx = vec![0usize; d];
    let mut q = vec![0.0; d];
    loop {
        for (j, &i) in idx.iter().enumerate() {
            q[j] = axes[j][i];
        }
        let vol = volume(&q);
        let mut open = 0;
        let mut closed = 0;
        for p in set.points() {
            if p.iter().zip(&q).all(|(x, y)| x <= y) {
                closed += 1;
                if p.iter().zip(&q).all(|(x, y)| x < y) {
                    open += 1;
                }
            }
        }
        best.offer(scaled_score(vol, open, n, Side::Open), &q, Side::Open);
        best.offer(scaled_score(vol, closed, n, Side::Closed), &q, Side::Closed);

        // Mixed-radix increment, last axis fastest.
        let mut j = d;
        loop {
            if j == 0 {
                return Ok(best.into_result(n));
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < axes[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::fibonacci_set;

    #[test]
    fn one_dimensional_uniform_grid() {
        for n in 1..=200 {
            let p = PointSet::new(1, (0..n).map(|i| i as f64 / n as f64).collect()).unwrap();
            let r = star_discrepancy_oracle(&p).unwrap();
            // Stored points fl(i/n) sit within an ulp of i/n, so only small n are bit-exact.
            if n <= 20 {
                assert_eq!(r.value, 1.0 / n as f64, "n={n}");
            } else {
                assert!((r.value - 1.0 / n as f64).abs() <= 1e-15, "n={n}");
            }
            assert_eq!(crate::star_discrepancy_exact(&p).unwrap(), r);
        }
    }

    #[test]
    fn single_centre_point() {
        let p = PointSet::from_points(&[[0.5, 0.5]]).unwrap();
        let r = star_discrepancy_oracle(&p).unwrap();
        assert_eq!(r.value, 0.75);
        assert_eq!(r.witness, vec![0.5, 0.5]);
        assert_eq!(r.side, Side::Closed);
    }

    #[test]
    fn identical_origin_points() {
        for d in 1..=4 {
            let p = PointSet::new(d, vec![0.0; 4 * d]).unwrap();
            let r = star_discrepancy_oracle(&p).unwrap();
            assert_eq!(r.value, 1.0);
            assert_eq!(r.witness, vec![0.0; d]);
            assert_eq!(r.side, Side::Closed);
        }
    }

    #[test]
    fn fibonacci_eight_pin() {
        // Closed box [0, 7/8] x [0, frac(6φ)] holds 7 of the 8 points.
        let r = star_discrepancy_oracle(&fibonacci_set(8).unwrap()).unwrap();
        assert_eq!(r.value, 0.255_321_559_063_051_76);
        assert_eq!(r.witness, vec![0.875, 0.708_203_932_499_369_4]);
        assert_eq!(r.side, Side::Closed);
    }

    #[test]
    fn size_guard() {
        let p = PointSet::new(3, vec![0.5; 3 * 500]).unwrap();
        assert!(matches!(
            star_discrepancy_oracle(&p),
            Err(Error::SizeGuard(_))
        ));
    }
}
