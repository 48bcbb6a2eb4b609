use std::fmt;

use crate::error::{Error, Result};
use crate::paradigm::domain::{Case, FeatureVector, TrainingSet};
use crate::scalar::Scalar;

/// Linear function `f(x) = x'b + a`; `[f]_1 = b`, `[f]_2 = a`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearHypothesis<S> {
    pub b: Vec<S>,
    pub a: S,
}

impl<S: Scalar> LinearHypothesis<S> {
    pub fn new(b: Vec<S>, a: S) -> Self {
        LinearHypothesis { b, a }
    }

    pub fn zero(n: usize) -> Self {
        LinearHypothesis { b: vec![S::zero(); n], a: S::zero() }
    }

    pub fn from_f64s(b: &[f64], a: f64) -> Self {
        LinearHypothesis {
            b: b.iter().map(|&v| S::from_f64_lossless(v)).collect(),
            a: S::from_f64_lossless(a),
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// `||b||^2`, the part of the hypothesis penalised by the regularizer.
    pub fn weight_norm_sq(&self) -> S {
        self.b.iter().fold(S::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    /// Evaluates at already-extracted real coordinates.
    pub fn eval_reals(&self, x: &[S]) -> Result<S> {
        if x.len() != self.b.len() {
            return Err(Error::DimensionMismatch { expected: self.b.len(), found: x.len() });
        }
        let dot = x
            .iter()
            .zip(&self.b)
            .fold(S::zero(), |acc, (xi, bi)| acc + xi.clone() * bi.clone());
        Ok(dot + self.a.clone())
    }

    pub fn evaluate(&self, x: &FeatureVector<S>) -> Result<S> {
        if x.dim() != self.b.len() {
            return Err(Error::DimensionMismatch { expected: self.b.len(), found: x.dim() });
        }
        self.eval_reals(&x.to_reals()?)
    }
}

/// A hypothesis: either defined at one query point only, or linear on all
/// of `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis<S> {
    Pointwise { x0: FeatureVector<S>, value: S },
    Linear(LinearHypothesis<S>),
}

impl<S: Scalar> Hypothesis<S> {
    pub fn pointwise(x0: FeatureVector<S>, value: S) -> Self {
        Hypothesis::Pointwise { x0, value }
    }

    pub fn evaluate(&self, x: &FeatureVector<S>) -> Result<S> {
        match self {
            Hypothesis::Pointwise { x0, value } => {
                if x == x0 {
                    Ok(value.clone())
                } else {
                    Err(Error::UndefinedAt { point: x.to_string() })
                }
            }
            Hypothesis::Linear(f) => f.evaluate(x),
        }
    }

    pub fn as_linear(&self) -> Option<&LinearHypothesis<S>> {
        match self {
            Hypothesis::Linear(f) => Some(f),
            Hypothesis::Pointwise { .. } => None,
        }
    }

    /// Value of a pointwise hypothesis at its query point.
    pub fn pointwise_value(&self) -> Option<&S> {
        match self {
            Hypothesis::Pointwise { value, .. } => Some(value),
            Hypothesis::Linear(_) => None,
        }
    }
}

impl<S: fmt::Display> fmt::Display for LinearHypothesis<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("f(x) = x'(")?;
        for (i, b) in self.b.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ") + {}", self.a)
    }
}

impl<S: fmt::Display> fmt::Display for Hypothesis<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::Pointwise { x0, value } => write!(f, "h({x0}) = {value}"),
            Hypothesis::Linear(lin) => lin.fmt(f),
        }
    }
}

/// The finite slice of the hypothetical cases of `f` at `points`.
pub fn hypothetical_cases<S: Scalar>(f: &Hypothesis<S>, points: &[FeatureVector<S>]) -> Result<Vec<Case<S>>> {
    points
        .iter()
        .map(|x| Ok(Case::new(x.clone(), f.evaluate(x)?)))
        .collect()
}

/// Observations followed by the hypothetical cases at `points`, with exact
/// `(x, y)` repeats dropped. Cases sharing `x` but not `y` are kept.
pub fn merged_cases<S: Scalar>(
    f: &Hypothesis<S>,
    t: &TrainingSet<S>,
    points: &[FeatureVector<S>],
) -> Result<Vec<Case<S>>> {
    let hypothetical = hypothetical_cases(f, points)?;
    let mut merged: Vec<Case<S>> = t.cases().to_vec();
    for case in hypothetical {
        if !merged.contains(&case) {
            merged.push(case);
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: f64) -> FeatureVector<f64> {
        FeatureVector::from_f64s(&[v])
    }

    fn identity() -> Hypothesis<f64> {
        Hypothesis::Linear(LinearHypothesis::new(vec![1.0], 0.0))
    }

    #[test]
    fn linear_hypothetical_cases() {
        let cases = hypothetical_cases(&identity(), &[x(2.0)]).unwrap();
        assert_eq!(cases, vec![Case::new(x(2.0), 2.0)]);
    }

    #[test]
    fn pointwise_defined_only_at_query() {
        let h = Hypothesis::pointwise(x(1.0), 0.0);
        assert_eq!(hypothetical_cases(&h, &[x(1.0)]).unwrap(), vec![Case::new(x(1.0), 0.0)]);
        assert!(matches!(hypothetical_cases(&h, &[x(2.0)]), Err(Error::UndefinedAt { .. })));
    }

    #[test]
    fn merge_keeps_distinct_pairs() {
        let t = TrainingSet::new(vec![Case::new(x(1.0), 1.0)]).unwrap();
        assert_eq!(merged_cases(&identity(), &t, &[x(1.0)]).unwrap(), vec![Case::new(x(1.0), 1.0)]);
        assert_eq!(
            merged_cases(&identity(), &t, &[x(2.0)]).unwrap(),
            vec![Case::new(x(1.0), 1.0), Case::new(x(2.0), 2.0)]
        );
        let t0 = TrainingSet::new(vec![Case::new(x(1.0), 0.0)]).unwrap();
        assert_eq!(
            merged_cases(&identity(), &t0, &[x(1.0)]).unwrap(),
            vec![Case::new(x(1.0), 0.0), Case::new(x(1.0), 1.0)]
        );
    }

    #[test]
    fn linear_dimension_checked() {
        let f = LinearHypothesis::<f64>::new(vec![1.0, 2.0], 0.5);
        assert_eq!(f.evaluate(&FeatureVector::from_f64s(&[1.0, 1.0])).unwrap(), 3.5);
        assert_eq!(
            f.evaluate(&x(1.0)),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
        assert_eq!(f.weight_norm_sq(), 5.0);
    }
}
