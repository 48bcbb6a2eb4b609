use crate::error::{Error, Result};
use crate::linear::{svr_solve, SolverConfig, SvrParams};
use crate::paradigm::domain::{Case, Provenance, TrainingSet};
use crate::paradigm::hypothesis::Hypothesis;
use crate::paradigm::problem::Family;
use crate::paradigm::report::{Aggregation, Baseline, CounterpartSet};
use crate::paradigm::{Paradigm, Search};
use crate::scalar::{Real, Scalar};

/// `sum_i |y_i - f(x_i)|` in training order.
pub fn erm_total_inconsistency<S: Scalar>(f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<S> {
    t.cases().iter().try_fold(S::zero(), |acc, c| {
        let fx = f.evaluate(&c.x)?;
        Ok(acc + (c.y.clone() - fx).abs())
    })
}

/// Empirical risk minimisation over linear functions with absolute loss.
/// Each observation's only counterpart is the hypothetical case at the
/// same point.
#[derive(Debug, Clone)]
pub struct Erm<S> {
    pub solver: SolverConfig<S>,
}

impl<S: Real> Default for Erm<S> {
    fn default() -> Self {
        Erm { solver: SolverConfig::default() }
    }
}

impl<S: Real> Paradigm<S> for Erm<S> {
    fn family(&self) -> Family {
        Family::Erm
    }

    fn baseline(&self, _f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<Baseline<S>> {
        Ok(Baseline { cases: t.cases().to_vec(), provenance: Provenance::FromTraining })
    }

    fn counterparts(&self, alpha: &Case<S>, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<CounterpartSet<S>> {
        let fx = f.evaluate(&alpha.x)?;
        Ok(CounterpartSet::from_hypothesis(vec![Case::new(alpha.x.clone(), fx)]))
    }

    fn case_inconsistency(&self, alpha: &Case<S>, counterparts: &CounterpartSet<S>, _f: &Hypothesis<S>) -> Result<S> {
        let fx = &counterparts.cases().and_then(|c| c.first()).ok_or(Error::EmptyNeighborhood)?.y;
        Ok((alpha.y - *fx).abs())
    }

    fn aggregation(&self, _f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Aggregation<S>> {
        Ok(Aggregation::Sum)
    }

    fn search(&self, t: &TrainingSet<S>) -> Result<Search<S>> {
        // Absolute loss is the epsilon-insensitive loss with a zero-width
        // tube and no regularizer.
        let params = SvrParams { epsilon: S::zero(), lambda: S::zero() };
        let solved = svr_solve(t, &params, &self.solver)?;
        Ok(Search::Solved(Hypothesis::Linear(solved.hypothesis)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paradigm::{FeatureVector, LinearHypothesis, Param, ProblemStatement, select_hypothesis};

    fn set(points: &[(f64, f64)]) -> TrainingSet<f64> {
        TrainingSet::new(points.iter().map(|&(x, y)| Case::new(FeatureVector::from_f64s(&[x]), y)).collect()).unwrap()
    }

    fn linear(b: f64, a: f64) -> Hypothesis<f64> {
        Hypothesis::Linear(LinearHypothesis::new(vec![b], a))
    }

    #[test]
    fn hand_evaluated_totals() {
        assert_eq!(erm_total_inconsistency(&linear(0.0, 0.0), &set(&[(1.0, 0.5)])).unwrap(), 0.5);
        assert_eq!(erm_total_inconsistency(&linear(1.0, 0.0), &set(&[(1.0, 1.0), (2.0, 2.0)])).unwrap(), 0.0);
    }

    #[test]
    fn pointwise_hypothesis_is_undefined_on_training_points() {
        let h = Hypothesis::pointwise(FeatureVector::from_f64s(&[9.0]), 0.0);
        assert!(matches!(erm_total_inconsistency(&h, &set(&[(1.0, 0.5)])), Err(Error::UndefinedAt { .. })));
    }

    #[test]
    fn report_matches_direct_total() {
        let t = set(&[(0.0, 1.0), (1.0, 0.0), (2.0, 3.0)]);
        let f = linear(0.5, 0.25);
        let report = Erm::default().report(&f, &t).unwrap();
        assert_eq!(report.total, erm_total_inconsistency(&f, &t).unwrap());
        assert_eq!(report.baseline_provenance, Provenance::FromTraining);
        assert!(report.entries.iter().all(|e| e.counterparts == Some(1)));
    }

    #[test]
    fn selection_fits_a_line() {
        let t = set(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]);
        let p = ProblemStatement::new(Family::Erm, Vec::<Param<f64>>::new()).unwrap();
        let sel = select_hypothesis(&Erm::default(), &p, &t).unwrap();
        assert!(sel.report.total < 0.05, "total {}", sel.report.total);
    }
}
