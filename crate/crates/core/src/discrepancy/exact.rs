//! Sweep evaluator for `d <= 4`.
//!
//! The last axis is swept in increasing order while a cumulative count table
//! over the first two axes tracks the points already passed. At each level the
//! table gives the open-box counts before the level's points are inserted and
//! the closed-box counts after, so every grid corner is scored in O(1) and a
//! three-dimensional set costs O(n^3) time and O(n^2) memory. Four dimensions
//! run the three-dimensional sweep once per level of the fourth axis.
//!
//! Rows and levels whose upper bound is below the running maximum by more
//! than `n ·` [`PRUNE_MARGIN`] are skipped; anything that could tie is still
//! scored.

use super::{scaled_score, Best, DiscrepancyResult, Side};
use crate::pointset::PointSet;
use crate::{Error, Result};

const PRUNE_MARGIN: f64 = 1e-12;

struct Grid {
    n: usize,
    /// Sorted distinct coordinates of each axis, followed by 1.
    axes: Vec<Vec<f64>>,
    /// `ranks[j][i]`: index of point `i`'s coordinate in `axes[j]`.
    ranks: Vec<Vec<u32>>,
}

impl Grid {
    fn new(set: &PointSet) -> Self {
        let d = set.d();
        let mut axes = Vec::with_capacity(d);
        let mut ranks = Vec::with_capacity(d);
        for j in 0..d {
            let mut axis: Vec<f64> = set.points().map(|p| p[j]).collect();
            axis.sort_by(f64::total_cmp);
            axis.dedup();
            axis.push(1.0);
            let r = set
                .points()
                .map(|p| axis.partition_point(|&x| x < p[j]) as u32)
                .collect();
            axes.push(axis);
            ranks.push(r);
        }
        Self {
            n: set.n(),
            axes,
            ranks,
        }
    }

    /// Point indices grouped by their rank on `axis`, in increasing rank order.
    fn buckets(&self, axis: usize, active: &[u32]) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.axes[axis].len()];
        for &i in active {
            out[self.ranks[axis][i as usize] as usize].push(i);
        }
        out
    }
}

/// Exact L∞ star discrepancy for `1 <= d <= 4`, with the same value, witness
/// and tie-breaking as [`star_discrepancy_oracle`](super::star_discrepancy_oracle).
pub fn star_discrepancy_exact(set: &PointSet) -> Result<DiscrepancyResult> {
    let d = set.d();
    if !(1..=4).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let grid = Grid::new(set);
    let mut best = Best::new();
    match d {
        1 => sweep1(&grid, &mut best),
        2 => sweep2(&grid, &mut best),
        3 => {
            let all: Vec<u32> = (0..grid.n as u32).collect();
            sweep3(&grid, &all, true, true, None, &mut best);
        }
        _ => sweep4(&grid, &mut best),
    }
    Ok(best.into_result(grid.n))
}

fn sweep1(g: &Grid, best: &mut Best) {
    let axis = &g.axes[0];
    let mut per_rank = vec![0usize; axis.len()];
    for &r in &g.ranks[0] {
        per_rank[r as usize] += 1;
    }
    let mut below = 0;
    for (a, &q) in axis.iter().enumerate() {
        best.offer(scaled_score(q, below, g.n, Side::Open), &[q], Side::Open);
        below += per_rank[a];
        best.offer(
            scaled_score(q, below, g.n, Side::Closed),
            &[q],
            Side::Closed,
        );
    }
}

fn sweep2(g: &Grid, best: &mut Best) {
    let (ax0, ax1) = (&g.axes[0], &g.axes[1]);
    let all: Vec<u32> = (0..g.n as u32).collect();
    let levels = g.buckets(1, &all);
    // table[a + 1] = inserted points with rank0 <= a; table[0] = 0.
    let mut table = vec![0u32; ax0.len() + 1];
    for (c, level) in levels.iter().enumerate() {
        let q1 = ax1[c];
        for (a, &q0) in ax0.iter().enumerate() {
            let v = scaled_score(q0 * q1, table[a] as usize, g.n, Side::Open);
            if v >= best.value() {
                best.offer(v, &[q0, q1], Side::Open);
            }
        }
        for &i in level {
            let r0 = g.ranks[0][i as usize] as usize;
            for t in &mut table[r0 + 1..] {
                *t += 1;
            }
        }
        for (a, &q0) in ax0.iter().enumerate() {
            let v = scaled_score(q0 * q1, table[a + 1] as usize, g.n, Side::Closed);
            if v >= best.value() {
                best.offer(v, &[q0, q1], Side::Closed);
            }
        }
    }
}

/// Scores the corners of the first three axes against the points in `active`.
/// `tail` is a fixed fourth coordinate multiplied into the volume last.
fn sweep3(g: &Grid, active: &[u32], open: bool, closed: bool, tail: Option<f64>, best: &mut Best) {
    let (ax0, ax1, ax2) = (&g.axes[0], &g.axes[1], &g.axes[2]);
    let (m0, m1) = (ax0.len(), ax1.len());
    let nf = g.n as f64;
    let margin = PRUNE_MARGIN * nf;
    let t = tail.unwrap_or(1.0);
    let stride = m1 + 1;
    // table[(a + 1) * stride + b + 1] = inserted points with rank0 <= a and
    // rank1 <= b; row and column 0 stay zero.
    let mut table = vec![0u32; (m0 + 1) * stride];
    let mut vals = vec![0.0f64; m1];
    let mut witness = [0.0f64; 4];
    let wlen = if tail.is_some() { 4 } else { 3 };
    witness[3] = t;
    let mut inserted = 0usize;

    let mut scan_row =
        |vals: &mut [f64], counts: &[u32], qa: f64, q2: f64, side: Side, best: &mut Best| {
            let mut row_max = f64::NEG_INFINITY;
            // Multiplying by t = 1 is exact, so the untailed volume is unchanged.
            match side {
                Side::Open => {
                    for ((v, &q1), &c) in vals.iter_mut().zip(ax1.iter()).zip(counts) {
                        *v = qa * q1 * q2 * t * nf - c as f64;
                        row_max = if *v > row_max { *v } else { row_max };
                    }
                }
                Side::Closed => {
                    for ((v, &q1), &c) in vals.iter_mut().zip(ax1.iter()).zip(counts) {
                        *v = c as f64 - qa * q1 * q2 * t * nf;
                        row_max = if *v > row_max { *v } else { row_max };
                    }
                }
            }
            if row_max >= best.value() {
                witness[0] = qa;
                witness[2] = q2;
                for (b, &v) in vals.iter().enumerate() {
                    if v >= best.value() {
                        witness[1] = ax1[b];
                        best.offer(v, &witness[..wlen], side);
                    }
                }
            }
        };

    for (c, level) in g.buckets(2, active).iter().enumerate() {
        let q2 = ax2[c];
        if open && q2 * t * nf >= best.value() - margin {
            for (a, &qa) in ax0.iter().enumerate() {
                if qa * q2 * t * nf < best.value() - margin {
                    continue;
                }
                // Open counts at (a, b) are the closed counts at (a - 1, b - 1).
                let counts = &table[a * stride..a * stride + m1];
                scan_row(&mut vals, counts, qa, q2, Side::Open, best);
            }
        }

        for &i in level {
            let r0 = g.ranks[0][i as usize] as usize;
            let r1 = g.ranks[1][i as usize] as usize;
            for a in r0..m0 {
                let row = (a + 1) * stride;
                for cell in &mut table[row + r1 + 1..row + stride] {
                    *cell += 1;
                }
            }
        }
        inserted += level.len();

        if closed && inserted as f64 >= best.value() - margin {
            for (a, &qa) in ax0.iter().enumerate() {
                let row = (a + 1) * stride + 1;
                let counts = &table[row..row + m1];
                let bound = counts[m1 - 1] as f64 - qa * ax1[0] * q2 * t * nf;
                if bound < best.value() - margin {
                    continue;
                }
                scan_row(&mut vals, counts, qa, q2, Side::Closed, best);
            }
        }
    }
}

fn sweep4(g: &Grid, best: &mut Best) {
    let all: Vec<u32> = (0..g.n as u32).collect();
    let levels = g.buckets(3, &all);
    let nf = g.n as f64;
    let margin = PRUNE_MARGIN * nf;
    let mut active: Vec<u32> = Vec::with_capacity(g.n);
    for (c, level) in levels.iter().enumerate() {
        let q3 = g.axes[3][c];
        if q3 * nf >= best.value() - margin {
            sweep3(g, &active, true, false, Some(q3), best);
        }
        active.extend_from_slice(level);
        if active.len() as f64 >= best.value() - margin {
            sweep3(g, &active, false, true, Some(q3), best);
        }
    }
}
