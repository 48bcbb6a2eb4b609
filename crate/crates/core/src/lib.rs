//! Learners as inconsistency minimisers.
//!
//! Every learner in this crate is described by the same six pieces: a
//! problem statement, a training set, baseline cases, their counterparts, a
//! per-case inconsistency and a total inconsistency. Fitting is one
//! procedure, [`paradigm::select_hypothesis`], which returns the hypothesis
//! with the smallest total.
//!
//! | learner | baseline cases | counterparts | total |
//! |---|---|---|---|
//! | ERM | observations | hypothetical case at `x_i` | sum |
//! | smoothing, k-NN | `<x0, h(x0)>` | nearby observations | the single term |
//! | decision tree | `<x0, h(x0)>` | observations in `x0`'s leaf | the single term |
//! | Naive Bayes | `<[x0]_i, h>` per feature | observations sharing the value | product |
//! | linear SVM | observations | margin half-space of the label | `w ||b||^2 + mean` |
//! | linear SVR | observations | hypothetical case at `x_i` | `sum + lambda ||b||^2` |
//!
//! Scoring code is generic over [`Scalar`], implemented for `f32`, `f64`
//! and [`Exact`] rationals; iterative solvers require [`Real`]. The
//! [`oracle`] module holds brute-force references used by the tests and by
//! the `plearn verify` command.

pub mod dataio;
pub mod error;
pub mod linear;
pub mod local;
pub mod oracle;
pub mod paradigm;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type Case64 = paradigm::Case<f64>;
pub type FeatureVector64 = paradigm::FeatureVector<f64>;
pub type TrainingSet64 = paradigm::TrainingSet<f64>;
pub type Hypothesis64 = paradigm::Hypothesis<f64>;
pub type LinearHypothesis64 = paradigm::LinearHypothesis<f64>;
pub type InconsistencyReport64 = paradigm::InconsistencyReport<f64>;
pub type ProblemStatement64 = paradigm::ProblemStatement<f64>;

pub type CaseExact = paradigm::Case<Exact>;
pub type TrainingSetExact = paradigm::TrainingSet<Exact>;
pub type LinearHypothesisExact = paradigm::LinearHypothesis<Exact>;

pub type TrainingSet32 = paradigm::TrainingSet<f32>;
pub type LinearHypothesis32 = paradigm::LinearHypothesis<f32>;

/// Learner for a validated problem statement. Pointwise learners use the
/// statement's `x0`; the decision tree is grown on `t` here.
pub fn instantiate<S: Real>(
    problem: &paradigm::ProblemStatement<S>,
    t: &paradigm::TrainingSet<S>,
    solver: &linear::SolverConfig<S>,
) -> Result<Box<dyn paradigm::Paradigm<S>>> {
    use paradigm::Family;
    let x0 = || {
        problem.x0().cloned().ok_or(Error::MissingParameter { family: problem.family, name: "x0" })
    };
    let p = &problem.params;
    let missing = |name| Error::MissingParameter { family: problem.family, name };
    Ok(match problem.family {
        Family::Erm => Box::new(paradigm::Erm { solver: solver.clone() }),
        Family::Smoothing => Box::new(local::Smoothing {
            x0: x0()?,
            spec: problem.neighborhood().ok_or_else(|| missing("k"))?,
        }),
        Family::Knn => Box::new(local::KNearestNeighbors {
            x0: x0()?,
            k: p.k.ok_or_else(|| missing("k"))?,
            metric: p.metric.unwrap_or_default(),
        }),
        Family::Dtree => Box::new(local::DecisionTree::fit(x0()?, t, &problem.tree_config())?),
        Family::Nb => Box::new(local::NaiveBayes { x0: x0()? }),
        Family::Svm => Box::new(linear::Svm {
            params: linear::SvmParams::new(p.w.ok_or_else(|| missing("w"))?)?,
            solver: solver.clone(),
        }),
        Family::Svr => Box::new(linear::Svr {
            params: linear::SvrParams::new(
                p.epsilon.ok_or_else(|| missing("epsilon"))?,
                p.lambda.ok_or_else(|| missing("lambda"))?,
            )?,
            solver: solver.clone(),
        }),
    })
}
