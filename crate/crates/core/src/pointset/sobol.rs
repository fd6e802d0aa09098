//! Unscrambled Sobol' points in Gray-code order.
//!
//! Primitive polynomials and initial direction numbers are the Bratley & Fox
//! (1988) table for the first ten dimensions. The first dimension is the van
//! der Corput sequence in base 2.

use super::PointSet;
use crate::{Error, Result};

pub const MAX_SOBOL_DIMENSION: usize = 10;

const BITS: usize = 32;

/// `(degree s, coefficient a, initial m_1..m_s)` for dimensions 2..=10.
const PRIMITIVES: [(u32, u32, &[u32]); MAX_SOBOL_DIMENSION - 1] = [
    (1, 0, &[1]),
    (2, 1, &[1, 1]),
    (3, 1, &[1, 3, 7]),
    (3, 2, &[1, 1, 5]),
    (4, 1, &[1, 3, 1, 1]),
    (4, 4, &[1, 1, 3, 7]),
    (5, 2, &[1, 3, 3, 9, 9]),
    (5, 13, &[1, 3, 7, 13, 3]),
    (5, 7, &[1, 1, 5, 11, 27]),
];

/// Direction numbers `V_1..V_32` of one dimension (index 0 holds `V_1`).
fn direction_numbers(dim: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if dim == 0 {
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = 1 << (BITS - 1 - i);
        }
        return v;
    }
    let (s, a, m) = PRIMITIVES[dim - 1];
    let s = s as usize;
    for i in 0..s.min(BITS) {
        v[i] = m[i] << (BITS - 1 - i);
    }
    for i in s..BITS {
        let mut x = v[i - s] ^ (v[i - s] >> s);
        for k in 1..s {
            if (a >> (s - 1 - k)) & 1 == 1 {
                x ^= v[i - k];
            }
        }
        v[i] = x;
    }
    v
}

/// First `n` points of the `d`-dimensional Sobol' sequence, starting at the
/// origin.
pub fn sobol_set(n: usize, d: usize) -> Result<PointSet> {
    sobol_set_from(0, n, d)
}

/// `n` consecutive Sobol' points starting at sequence index `start`.
pub fn sobol_set_from(start: usize, n: usize, d: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if d == 0 || d > MAX_SOBOL_DIMENSION {
        return Err(Error::InvalidInput(format!(
            "Sobol' dimension must be in 1..={MAX_SOBOL_DIMENSION}, got {d}"
        )));
    }
    let end = start.checked_add(n).map(|e| e as u64);
    if end.is_none_or(|e| e > 1u64 << BITS) {
        return Err(Error::InvalidInput(format!(
            "at most 2^{BITS} Sobol' points"
        )));
    }
    let directions: Vec<[u32; BITS]> = (0..d).map(direction_numbers).collect();
    let scale = 1.0 / (1u64 << BITS) as f64;
    let gray = start ^ (start >> 1);
    let mut state: Vec<u32> = directions
        .iter()
        .map(|v| {
            (0..BITS)
                .filter(|&b| (gray >> b) & 1 == 1)
                .fold(0, |x, b| x ^ v[b])
        })
        .collect();
    let mut coords = Vec::with_capacity(n * d);
    for i in start..start + n {
        if i > start {
            // Gray-code step: flip the direction number of the lowest zero bit of i-1.
            let c = (!(i - 1)).trailing_zeros() as usize;
            for (x, v) in state.iter_mut().zip(&directions) {
                *x ^= v[c];
            }
        }
        coords.extend(state.iter().map(|&x| x as f64 * scale));
    }
    PointSet::new(d, coords)
}
