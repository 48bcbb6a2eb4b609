//! Central-difference gradients.

use crate::error::Result;
use crate::paradigm::LinearHypothesis;

/// Central differences of `objective` at `f`, coordinate by coordinate.
pub fn central_difference<F>(objective: F, f: &LinearHypothesis<f64>, h: f64) -> Result<LinearHypothesis<f64>>
where
    F: Fn(&LinearHypothesis<f64>) -> Result<f64>,
{
    let probe = |set: &dyn Fn(&mut LinearHypothesis<f64>, f64)| -> Result<f64> {
        let mut plus = f.clone();
        let mut minus = f.clone();
        set(&mut plus, h);
        set(&mut minus, -h);
        Ok((objective(&plus)? - objective(&minus)?) / (2.0 * h))
    };
    let mut b = Vec::with_capacity(f.b.len());
    for j in 0..f.b.len() {
        b.push(probe(&|g, d| g.b[j] += d)?);
    }
    let a = probe(&|g, d| g.a += d)?;
    Ok(LinearHypothesis::new(b, a))
}

/// `max_j |g_j - d_j| / max(1, max_j |g_j|)` over all coordinates.
pub fn relative_error(analytic: &LinearHypothesis<f64>, numeric: &LinearHypothesis<f64>) -> f64 {
    let pairs = analytic.b.iter().zip(&numeric.b).chain(std::iter::once((&analytic.a, &numeric.a)));
    let (diff, scale) = pairs.fold((0.0f64, 1.0f64), |(d, s), (g, n)| (d.max((g - n).abs()), s.max(g.abs())));
    diff / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_function() {
        let f = LinearHypothesis::new(vec![1.5, -2.0], 0.5);
        let fd = central_difference(|g| Ok(g.b[0] * g.b[0] + 3.0 * g.b[1] - g.a), &f, 1e-6).unwrap();
        let exact = LinearHypothesis::new(vec![3.0, 3.0], -1.0);
        assert!(relative_error(&exact, &fd) < 1e-8);
    }
}
