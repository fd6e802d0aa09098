//! Point sets in `[0,1)^d` and the constructions that produce them.

mod io;
mod sobol;

pub use io::{load_csv, load_csv_path, save_csv, save_csv_path};
pub use sobol::{sobol_set, sobol_set_from, MAX_SOBOL_DIMENSION};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The golden ratio `(1 + √5) / 2`.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// `n` points in `[0,1)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    d: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds a point set from row-major coordinates, checking that every
    /// coordinate lies in `[0,1)`.
    pub fn new(d: usize, coords: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(d) {
            return Err(Error::InvalidInput(format!(
                "{} coordinates do not form a non-empty set of {d}-dimensional points",
                coords.len()
            )));
        }
        if let Some((i, c)) = coords
            .iter()
            .enumerate()
            .find(|(_, c)| !(0.0..1.0).contains(*c))
        {
            return Err(Error::InvalidInput(format!(
                "coordinate {c} of point {} is outside [0,1)",
                i / d
            )));
        }
        Ok(Self { d, coords })
    }

    /// Builds a point set from a list of points of equal dimension.
    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let d = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        if points.iter().any(|p| p.as_ref().len() != d) {
            return Err(Error::InvalidInput(
                "points have differing dimensions".into(),
            ));
        }
        Self::new(
            d,
            points
                .iter()
                .flat_map(|p| p.as_ref().iter().copied())
                .collect(),
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.d)
    }

    /// Row-major coordinate matrix.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Parameters `(p_1, …, p_d)` of a Kronecker set and whether the index starts
/// at 1 (shifted) or 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerParams {
    pub params: Vec<f64>,
    pub shifted: bool,
}

impl KroneckerParams {
    pub fn new(params: Vec<f64>, shifted: bool) -> Self {
        Self { params, shifted }
    }

    pub fn d(&self) -> usize {
        self.params.len()
    }
}

/// Fractional part `x - floor(x)`, with products that land within rounding
/// error of an integer mapped to 0.
fn frac_of_product(i: f64, p: f64) -> f64 {
    let x = i * p;
    let r = x - x.floor();
    let slack = 4.0 * f64::EPSILON * x.abs().max(1.0);
    if 1.0 - r <= slack {
        0.0
    } else {
        r
    }
}

/// Kronecker point set: point `i` has coordinate `j` equal to `frac(i · p_j)`,
/// for `i` in `1..=n` when shifted and `0..n` otherwise.
pub fn kronecker_set(n: usize, params: &KroneckerParams) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if params.params.is_empty() {
        return Err(Error::InvalidInput(
            "at least one parameter is required".into(),
        ));
    }
    if let Some(p) = params.params.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite parameter {p}")));
    }
    // Only the fractional part matters; reducing first keeps i·p small.
    let reduced: Vec<f64> = params.params.iter().map(|p| p - p.floor()).collect();
    let offset = usize::from(params.shifted);
    let mut coords = Vec::with_capacity(n * reduced.len());
    for i in offset..n + offset {
        let i = i as f64;
        coords.extend(reduced.iter().map(|&p| frac_of_product(i, p)));
    }
    Ok(PointSet {
        d: reduced.len(),
        coords,
    })
}

/// Largest double below 1.
pub const ONE_MINUS: f64 = 1.0 - f64::EPSILON / 2.0;

/// Shifted Kronecker set with `p_1 = 1/n` and the remaining parameters given.
///
/// The first axis holds `i/n` for `i = 1..=n`. The last point, `n/n`, sits at
/// the top of the axis rather than wrapping to 0 and is stored as the largest
/// double below 1, which is indistinguishable from 1 for any box count. The
/// published reference values for this family are computed this way.
/// A one-point set is left at `frac(1) = 0`.
pub fn kronecker_with_unit_first(n: usize, tail: &[f64]) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut params = Vec::with_capacity(tail.len() + 1);
    params.push(1.0 / n as f64);
    params.extend_from_slice(tail);
    let mut set = kronecker_set(n, &KroneckerParams::new(params, true))?;
    if n > 1 {
        let d = set.d;
        set.coords[(n - 1) * d] = ONE_MINUS;
    }
    Ok(set)
}

/// Two-dimensional Fibonacci set `{(i/n, frac(i·φ)) : i = 0..n}`.
pub fn fibonacci_set(n: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    kronecker_set(
        n,
        &KroneckerParams::new(vec![1.0 / n as f64, GOLDEN_RATIO], false),
    )
}
