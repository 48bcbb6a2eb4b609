//! The learner contract shared by every algorithm in the crate.
//!
//! A learner names its baseline cases `H(f, T)`, the counterparts
//! `xi(alpha, f)` of each baseline case, a non-negative case
//! inconsistency `mu` and an aggregation into the total `Lambda`. Learning
//! is then one procedure, [`select_hypothesis`], returning the hypothesis
//! with the smallest total.

mod domain;
mod erm;
mod hypothesis;
mod problem;
mod report;

pub use domain::{
    validate_training_set, Case, FeatureKind, FeatureSpec, FeatureValue, FeatureVector, FeedbackDomain,
    Provenance, Schema, TrainingSet, ValueKind,
};
pub use erm::{erm_total_inconsistency, Erm};
pub use hypothesis::{hypothetical_cases, merged_cases, Hypothesis, LinearHypothesis};
pub use problem::{Family, Param, Params, ProblemStatement};
pub use report::{Aggregation, Baseline, CounterpartSet, Counterparts, InconsistencyReport, ReportEntry};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Where the argmin over a learner's hypothesis class comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Search<S> {
    /// Finite class, compared exhaustively in the given order. The first
    /// entry wins ties.
    Finite(Vec<Hypothesis<S>>),
    /// Continuous class, already minimised by a closed form or a solver.
    Solved(Hypothesis<S>),
}

/// A learner expressed as an inconsistency minimiser.
pub trait Paradigm<S: Scalar> {
    fn family(&self) -> Family;

    fn baseline(&self, f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<Baseline<S>>;

    fn counterparts(&self, alpha: &Case<S>, f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<CounterpartSet<S>>;

    fn case_inconsistency(&self, alpha: &Case<S>, counterparts: &CounterpartSet<S>, f: &Hypothesis<S>) -> Result<S>;

    fn aggregation(&self, f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<Aggregation<S>>;

    fn search(&self, t: &TrainingSet<S>) -> Result<Search<S>>;

    /// Evaluates every baseline case of `f` and aggregates, in baseline
    /// order.
    fn report(&self, f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<InconsistencyReport<S>> {
        let baseline = self.baseline(f, t)?;
        let mut entries = Vec::with_capacity(baseline.cases.len());
        for alpha in &baseline.cases {
            let counterparts = self.counterparts(alpha, f, t)?;
            let mu = self.case_inconsistency(alpha, &counterparts, f)?;
            entries.push(ReportEntry { case: alpha.clone(), mu, counterparts: counterparts.count() });
        }
        Ok(InconsistencyReport::new(f.clone(), baseline.provenance, entries, self.aggregation(f, t)?))
    }
}

/// Outcome of [`select_hypothesis`].
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<S> {
    pub hypothesis: Hypothesis<S>,
    pub report: InconsistencyReport<S>,
    /// Total inconsistency of every hypothesis that was compared, in search
    /// order.
    pub candidate_totals: Vec<S>,
}

/// Returns the hypothesis of `learner` minimising total inconsistency on `t`.
pub fn select_hypothesis<S: Scalar>(
    learner: &dyn Paradigm<S>,
    problem: &ProblemStatement<S>,
    t: &TrainingSet<S>,
) -> Result<Selection<S>> {
    if learner.family() != problem.family {
        return Err(Error::IncompatibleFamily { expected: problem.family, found: learner.family() });
    }
    t.check_feedback(problem.y_domain)?;
    match learner.search(t)? {
        Search::Finite(candidates) => {
            let mut best: Option<InconsistencyReport<S>> = None;
            let mut totals = Vec::with_capacity(candidates.len());
            for h in &candidates {
                let report = learner.report(h, t)?;
                totals.push(report.total.clone());
                let better = match &best {
                    None => true,
                    Some(b) => report.total < b.total,
                };
                if better {
                    best = Some(report);
                }
            }
            let report = best.ok_or(Error::EmptySet)?;
            Ok(Selection { hypothesis: report.hypothesis.clone(), report, candidate_totals: totals })
        }
        Search::Solved(h) => {
            let report = learner.report(&h, t)?;
            let totals = vec![report.total.clone()];
            Ok(Selection { hypothesis: h, report, candidate_totals: totals })
        }
    }
}

/// The two constant hypotheses at `x0`, negative label first.
pub fn binary_candidates<S: Scalar>(x0: &FeatureVector<S>, domain: FeedbackDomain) -> Vec<Hypothesis<S>> {
    let negative = match domain {
        FeedbackDomain::MinusPlusOne => -S::one(),
        _ => S::zero(),
    };
    vec![Hypothesis::pointwise(x0.clone(), negative), Hypothesis::pointwise(x0.clone(), S::one())]
}
