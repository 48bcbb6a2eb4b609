//! Exhaustive search over a lattice of linear hypotheses.

use crate::error::{Error, Result};
use crate::paradigm::LinearHypothesis;
use crate::scalar::Scalar;

pub const MAX_GRID_POINTS: u128 = 10_000_000;

/// Axis-aligned box over `(b_1, .., b_n, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl GridBox {
    /// The same interval on every one of `n + 1` axes.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        GridBox { lo: vec![lo; n + 1], hi: vec![hi; n + 1] }
    }

    pub fn axes(&self) -> usize {
        self.lo.len()
    }
}

fn points_on_axis(lo: f64, hi: f64, step: f64) -> Result<usize> {
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter { name: "bounds", reason: format!("empty interval [{lo}, {hi}]") });
    }
    // Tolerate rounding in (hi - lo) / step so the upper end is kept.
    Ok(((hi - lo) / step + 1e-9).floor() as usize + 1)
}

/// Scans the lattice `lo + i * step` in lexicographic order (first axis
/// slowest) and returns the first point attaining the minimum.
pub fn grid_search_linear<S, F>(objective: F, bounds: &GridBox, step: f64) -> Result<(LinearHypothesis<S>, S)>
where
    S: Scalar,
    F: Fn(&LinearHypothesis<S>) -> Result<S>,
{
    let axes = bounds.axes();
    if axes == 0 || bounds.hi.len() != axes {
        return Err(Error::DimensionMismatch { expected: bounds.lo.len().max(1), found: bounds.hi.len() });
    }
    if axes > 3 {
        return Err(Error::InvalidParameter { name: "bounds", reason: "at most two features".into() });
    }
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::InvalidParameter { name: "step", reason: "must be positive".into() });
    }
    let counts = bounds
        .lo
        .iter()
        .zip(&bounds.hi)
        .map(|(&lo, &hi)| points_on_axis(lo, hi, step))
        .collect::<Result<Vec<usize>>>()?;
    let total: u128 = counts.iter().map(|&c| c as u128).product();
    if total > MAX_GRID_POINTS {
        return Err(Error::BoxTooLarge { points: total, limit: MAX_GRID_POINTS });
    }
    let coords: Vec<Vec<S>> = bounds
        .lo
        .iter()
        .zip(&counts)
        .map(|(&lo, &c)| (0..c).map(|i| S::from_f64_lossless(lo + i as f64 * step)).collect())
        .collect();
    let n = axes - 1;
    let mut f = LinearHypothesis::zero(n);
    let mut index = vec![0usize; axes];
    let mut best: Option<(LinearHypothesis<S>, S)> = None;
    loop {
        for (axis, &i) in index.iter().enumerate() {
            let v = coords[axis][i].clone();
            if axis < n {
                f.b[axis] = v;
            } else {
                f.a = v;
            }
        }
        let value = objective(&f)?;
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((f.clone(), value));
        }
        // Odometer increment, last axis fastest.
        let mut axis = axes;
        loop {
            if axis == 0 {
                return Ok(best.expect("lattice is never empty"));
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < counts[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
}
