//! Exact L∞ star discrepancy.
//!
//! The supremum over anchored boxes is attained on the grid formed by the
//! point coordinates of each axis plus the value 1. A corner `q` is scored
//! from both sides: open boxes `[0,q)` give `vol(q) - count/n` and closed boxes
//! `[0,q]` give `count/n - vol(q)`. Scores are computed as `n·vol(q) - count`
//! (or its negative) and divided by `n` once at the end, so a box whose scaled
//! score is an integer yields exactly `k/n`. Every evaluator here scores the
//! same candidate set with the same floating-point expressions and breaks ties
//! the same way (larger value, then lexicographically smaller corner, then
//! open before closed), so results agree bit for bit.

mod exact;
mod oracle;

pub use exact::star_discrepancy_exact;
pub use oracle::{star_discrepancy_oracle, ORACLE_MAX_CORNERS};

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::pointset::PointSet;
use crate::{Error, Result};

/// Which anchored box attains the discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `[0,q)`, scored as volume minus point fraction.
    Open,
    /// `[0,q]`, scored as point fraction minus volume.
    Closed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    pub value: f64,
    /// Corner of the box attaining `value`.
    pub witness: Vec<f64>,
    pub side: Side,
}

/// Volume of `[0,q)`, multiplied left to right.
#[inline]
pub(crate) fn volume(q: &[f64]) -> f64 {
    q.iter().fold(1.0, |acc, &x| acc * x)
}

/// Local discrepancy of one anchored box.
///
/// Open boxes need `q` in `(0,1]^d`. Closed boxes also accept zero components,
/// since `[0,0]` along an axis still holds the points sitting on that face.
pub fn local_discrepancy(set: &PointSet, q: &[f64], side: Side) -> Result<f64> {
    if q.len() != set.d() {
        return Err(Error::InvalidInput(format!(
            "corner has {} components, point set has dimension {}",
            q.len(),
            set.d()
        )));
    }
    let bad = |x: f64| match side {
        Side::Open => !(x > 0.0 && x <= 1.0),
        Side::Closed => !(0.0..=1.0).contains(&x),
    };
    if let Some(x) = q.iter().copied().find(|&x| bad(x)) {
        return Err(Error::InvalidInput(format!(
            "corner component {x} outside the allowed range for a {side:?} box"
        )));
    }
    let vol = volume(q);
    let count = match side {
        Side::Open => set
            .points()
            .filter(|p| p.iter().zip(q).all(|(x, y)| x < y))
            .count(),
        Side::Closed => set
            .points()
            .filter(|p| p.iter().zip(q).all(|(x, y)| x <= y))
            .count(),
    };
    Ok(scaled_score(vol, count, set.n(), side) / set.n() as f64)
}

/// `n` times the local discrepancy of a box with volume `vol` holding `count`
/// points.
#[inline]
pub(crate) fn scaled_score(vol: f64, count: usize, n: usize, side: Side) -> f64 {
    let nv = vol * n as f64;
    match side {
        Side::Open => nv - count as f64,
        Side::Closed => count as f64 - nv,
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Running maximum of scaled scores under the shared tie-break order.
#[derive(Debug, Clone)]
pub(crate) struct Best {
    value: f64,
    witness: Vec<f64>,
    side: Side,
}

impl Best {
    pub(crate) fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            witness: Vec::new(),
            side: Side::Closed,
        }
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub(crate) fn offer(&mut self, value: f64, witness: &[f64], side: Side) {
        if value < self.value {
            return;
        }
        let wins = value > self.value
            || match lex_cmp(witness, &self.witness) {
                Ordering::Less => true,
                Ordering::Equal => side < self.side,
                Ordering::Greater => false,
            };
        if wins {
            self.value = value;
            self.witness.clear();
            self.witness.extend_from_slice(witness);
            self.side = side;
        }
    }

    pub(crate) fn into_result(self, n: usize) -> DiscrepancyResult {
        DiscrepancyResult {
            value: self.value / n as f64,
            witness: self.witness,
            side: self.side,
        }
    }
}
