//! Query-time learners: each hypothesis is defined only at the query point
//! `x0`, and its counterparts are observations near `x0`.

mod knn;
mod naive_bayes;
mod smoothing;
mod tree;

pub use knn::{knn_predict, KNearestNeighbors};
pub use naive_bayes::{nb_case_inconsistency, nb_predict, nb_transform, NaiveBayes, TransformedProblem};
pub use smoothing::{
    smoothing_case_inconsistency, smoothing_counterparts, smoothing_fit, Metric, NeighborhoodMode,
    NeighborhoodSpec, Smoothing,
};
pub use tree::{
    dtree_build, dtree_counterparts, dtree_predict, DecisionTree, Leaf, RankRange, StopReason, TreeConfig, TreeNode,
    TreePartition,
};

use crate::paradigm::{InconsistencyReport, Selection};
use crate::scalar::Scalar;

/// A binary prediction at one query point.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<S> {
    pub label: S,
    /// Report of the chosen hypothesis.
    pub report: InconsistencyReport<S>,
    /// Totals of `h0` and `h1`, in that order.
    pub totals: Vec<S>,
}

impl<S: Scalar> From<Selection<S>> for Prediction<S> {
    fn from(sel: Selection<S>) -> Self {
        let label = sel.hypothesis.pointwise_value().cloned().unwrap_or_else(S::zero);
        Prediction { label, report: sel.report, totals: sel.candidate_totals }
    }
}
