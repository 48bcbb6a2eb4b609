use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paradigm::{
    Aggregation, Baseline, Case, CounterpartSet, Family, FeatureVector, Hypothesis, Paradigm, Provenance, Search,
    TrainingSet,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
}

impl Metric {
    /// Monotone stand-in for the distance: squared Euclidean distance, or
    /// the Manhattan distance itself. Orderings and ties match the true
    /// distance and no square root is needed.
    pub fn dissimilarity<S: Scalar>(&self, a: &[S], b: &[S]) -> S {
        let diffs = a.iter().zip(b).map(|(p, q)| p.clone() - q.clone());
        match self {
            Metric::Euclidean => diffs.fold(S::zero(), |acc, d| acc + d.clone() * d),
            Metric::Manhattan => diffs.fold(S::zero(), |acc, d| acc + d.abs()),
        }
    }

    /// A radius expressed on the scale of [`Metric::dissimilarity`].
    pub fn radius_bound<S: Scalar>(&self, r: &S) -> S {
        match self {
            Metric::Euclidean => r.clone() * r.clone(),
            Metric::Manhattan => r.clone(),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "manhattan" => Ok(Metric::Manhattan),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NeighborhoodMode<S> {
    KNearest(usize),
    FixedRadius(S),
}

/// Rule choosing which observations count as close to a query point.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodSpec<S> {
    pub mode: NeighborhoodMode<S>,
    pub metric: Metric,
}

impl<S: Scalar> NeighborhoodSpec<S> {
    pub fn k_nearest(k: usize, metric: Metric) -> Self {
        NeighborhoodSpec { mode: NeighborhoodMode::KNearest(k), metric }
    }

    pub fn fixed_radius(r: S, metric: Metric) -> Self {
        NeighborhoodSpec { mode: NeighborhoodMode::FixedRadius(r), metric }
    }
}

/// Indices (in training order) of the neighborhood of `x0`. For
/// `KNearest(k)` every case tied with the k-th nearest is included.
pub(crate) fn neighborhood_indices<S: Scalar>(
    x0: &FeatureVector<S>,
    t: &TrainingSet<S>,
    spec: &NeighborhoodSpec<S>,
) -> Result<Vec<usize>> {
    if x0.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: x0.dim() });
    }
    let q = x0.to_metric_coords()?;
    let dissim = t
        .cases()
        .iter()
        .map(|c| Ok(spec.metric.dissimilarity(&q, &c.x.to_metric_coords()?)))
        .collect::<Result<Vec<S>>>()?;
    let bound = match &spec.mode {
        NeighborhoodMode::KNearest(k) => {
            let k = *k;
            if k == 0 {
                return Err(Error::InvalidParameter { name: "k", reason: "must be positive".into() });
            }
            if k > t.len() {
                return Err(Error::KExceedsSampleSize { k, m: t.len() });
            }
            let mut sorted = dissim.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            sorted.swap_remove(k - 1)
        }
        NeighborhoodMode::FixedRadius(r) => {
            if *r <= S::zero() {
                return Err(Error::InvalidParameter { name: "radius", reason: "must be positive".into() });
            }
            spec.metric.radius_bound(r)
        }
    };
    let members: Vec<usize> = dissim
        .iter()
        .enumerate()
        .filter(|(_, d)| **d <= bound)
        .map(|(i, _)| i)
        .collect();
    if members.is_empty() {
        return Err(Error::EmptyNeighborhood);
    }
    Ok(members)
}

/// Observations close to `x0`, in training order.
pub fn smoothing_counterparts<S: Scalar>(
    x0: &FeatureVector<S>,
    t: &TrainingSet<S>,
    spec: &NeighborhoodSpec<S>,
) -> Result<CounterpartSet<S>> {
    let members = neighborhood_indices(x0, t, spec)?;
    Ok(CounterpartSet::from_training(members.into_iter().map(|i| t.cases()[i].clone()).collect()))
}

/// `|h(x0) - mean of counterpart feedbacks|`.
pub fn smoothing_case_inconsistency<S: Scalar>(h_value: &S, counterparts: &CounterpartSet<S>) -> Result<S> {
    let mean = counterparts.mean_feedback().ok_or(Error::EmptyNeighborhood)?;
    Ok((h_value.clone() - mean).abs())
}

/// The minimiser in closed form: the counterpart mean.
pub fn smoothing_fit<S: Scalar>(
    x0: &FeatureVector<S>,
    t: &TrainingSet<S>,
    spec: &NeighborhoodSpec<S>,
) -> Result<Hypothesis<S>> {
    let counterparts = smoothing_counterparts(x0, t, spec)?;
    let mean = counterparts.mean_feedback().ok_or(Error::EmptyNeighborhood)?;
    Ok(Hypothesis::pointwise(x0.clone(), mean))
}

/// Baseline case of a pointwise hypothesis: its single hypothetical case.
pub(crate) fn pointwise_baseline<S: Scalar>(f: &Hypothesis<S>, x0: &FeatureVector<S>) -> Result<Baseline<S>> {
    let value = f.evaluate(x0)?;
    Ok(Baseline { cases: vec![Case::new(x0.clone(), value)], provenance: Provenance::FromHypothesis })
}

/// Local smoothing at one query point.
#[derive(Debug, Clone, PartialEq)]
pub struct Smoothing<S> {
    pub x0: FeatureVector<S>,
    pub spec: NeighborhoodSpec<S>,
}

impl<S: Scalar> Paradigm<S> for Smoothing<S> {
    fn family(&self) -> Family {
        Family::Smoothing
    }

    fn baseline(&self, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Baseline<S>> {
        pointwise_baseline(f, &self.x0)
    }

    fn counterparts(&self, _alpha: &Case<S>, _f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<CounterpartSet<S>> {
        smoothing_counterparts(&self.x0, t, &self.spec)
    }

    fn case_inconsistency(&self, alpha: &Case<S>, counterparts: &CounterpartSet<S>, _f: &Hypothesis<S>) -> Result<S> {
        smoothing_case_inconsistency(&alpha.y, counterparts)
    }

    fn aggregation(&self, _f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Aggregation<S>> {
        Ok(Aggregation::Sum)
    }

    fn search(&self, t: &TrainingSet<S>) -> Result<Search<S>> {
        smoothing_fit(&self.x0, t, &self.spec).map(Search::Solved)
    }
}
