//! Linear learners: the hinge-slack SVM in its unconstrained form and
//! epsilon-insensitive support vector regression, both solved in the primal
//! by deterministic subgradient descent.

mod solver;
mod svm;
mod svr;

pub use solver::{minimize, SolveTrace, SolverConfig};
pub use svm::{
    margin_distance, svm_case_inconsistency, svm_constrained_objective, svm_first_infeasible, svm_objective,
    svm_regularizer, svm_slack, svm_solve, svm_subgradient, svm_verify_lemma1, svm_verify_statement1,
    svm_verify_statement2, HalfSpace, SlackVector, Svm, SvmObjective, SvmParams,
};
pub use svr::{
    svr_case_inconsistency, svr_objective, svr_solve, svr_subgradient, v_epsilon, Svr, SvrObjective, SvrParams,
};

use crate::error::{Error, Result};
use crate::paradigm::{InconsistencyReport, LinearHypothesis, TrainingSet};
use crate::scalar::Scalar;

/// Output of a linear solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved<S> {
    pub hypothesis: LinearHypothesis<S>,
    pub report: InconsistencyReport<S>,
    pub trace: SolveTrace<S>,
}

/// Training set as real rows, extracted once.
#[derive(Debug, Clone)]
pub(crate) struct Design<S> {
    pub rows: Vec<Vec<S>>,
    pub y: Vec<S>,
}

impl<S: Scalar> Design<S> {
    pub fn new(t: &TrainingSet<S>) -> Result<Self> {
        let rows = t.cases().iter().map(|c| c.x.to_reals()).collect::<Result<Vec<_>>>()?;
        Ok(Design { rows, y: t.feedbacks().cloned().collect() })
    }

    pub fn check_dim(&self, f: &LinearHypothesis<S>) -> Result<()> {
        match self.rows.first() {
            Some(r) if r.len() != f.dim() => Err(Error::DimensionMismatch { expected: f.dim(), found: r.len() }),
            _ => Ok(()),
        }
    }

    pub fn m(&self) -> S {
        S::from_count(self.rows.len())
    }
}
