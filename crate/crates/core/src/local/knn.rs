use crate::error::Result;
use crate::local::smoothing::{pointwise_baseline, smoothing_case_inconsistency, smoothing_counterparts};
use crate::local::{Metric, NeighborhoodSpec, Prediction};
use crate::paradigm::{
    binary_candidates, select_hypothesis, Aggregation, Baseline, Case, CounterpartSet, Family, FeatureVector,
    FeedbackDomain, Hypothesis, Paradigm, Param, ProblemStatement, Search, TrainingSet,
};
use crate::scalar::Scalar;

/// k-NN classification at one query point over labels `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KNearestNeighbors<S> {
    pub x0: FeatureVector<S>,
    pub k: usize,
    pub metric: Metric,
}

impl<S: Scalar> Paradigm<S> for KNearestNeighbors<S> {
    fn family(&self) -> Family {
        Family::Knn
    }

    fn baseline(&self, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Baseline<S>> {
        pointwise_baseline(f, &self.x0)
    }

    fn counterparts(&self, _alpha: &Case<S>, _f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<CounterpartSet<S>> {
        smoothing_counterparts(&self.x0, t, &NeighborhoodSpec::k_nearest(self.k, self.metric))
    }

    fn case_inconsistency(&self, alpha: &Case<S>, counterparts: &CounterpartSet<S>, _f: &Hypothesis<S>) -> Result<S> {
        smoothing_case_inconsistency(&alpha.y, counterparts)
    }

    fn aggregation(&self, _f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Aggregation<S>> {
        Ok(Aggregation::Sum)
    }

    fn search(&self, _t: &TrainingSet<S>) -> Result<Search<S>> {
        Ok(Search::Finite(binary_candidates(&self.x0, FeedbackDomain::ZeroOne)))
    }
}

/// Picks the label in `{0, 1}` closest to the mean label of the k nearest
/// observations; a mean of exactly 1/2 yields 0.
pub fn knn_predict<S: Scalar>(
    x0: &FeatureVector<S>,
    t: &TrainingSet<S>,
    k: usize,
    metric: Metric,
) -> Result<Prediction<S>> {
    let problem = ProblemStatement::new(
        Family::Knn,
        vec![Param::X0(x0.clone()), Param::K(k), Param::Metric(metric)],
    )?;
    let learner = KNearestNeighbors { x0: x0.clone(), k, metric };
    select_hypothesis(&learner, &problem, t).map(Prediction::from)
}
