use crate::error::{Error, Result};
use crate::linear::solver::{minimize, SolverConfig};
use crate::linear::{Design, Solved};
use crate::paradigm::{
    Aggregation, Baseline, Case, CounterpartSet, Family, Hypothesis, InconsistencyReport, LinearHypothesis, Paradigm,
    Provenance, ReportEntry, Search, TrainingSet,
};
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct SvrParams<S> {
    /// Half-width of the insensitive tube.
    pub epsilon: S,
    pub lambda: S,
}

impl<S: Scalar> SvrParams<S> {
    pub fn new(epsilon: S, lambda: S) -> Result<Self> {
        if epsilon < S::zero() || !epsilon.is_finite_value() {
            return Err(Error::InvalidParameter { name: "epsilon", reason: "must be non-negative".into() });
        }
        if lambda < S::zero() || !lambda.is_finite_value() {
            return Err(Error::InvalidParameter { name: "lambda", reason: "must be non-negative".into() });
        }
        Ok(SvrParams { epsilon, lambda })
    }
}

/// Epsilon-insensitive loss: 0 inside the tube, `|r| - epsilon` outside.
pub fn v_epsilon<S: Scalar>(r: &S, epsilon: &S) -> S {
    let magnitude = r.abs();
    if magnitude < *epsilon {
        S::zero()
    } else {
        magnitude - epsilon.clone()
    }
}

pub fn svr_case_inconsistency<S: Scalar>(beta: &Case<S>, f: &LinearHypothesis<S>, p: &SvrParams<S>) -> Result<S> {
    let fx = f.evaluate(&beta.x)?;
    Ok(v_epsilon(&(beta.y.clone() - fx), &p.epsilon))
}

fn residual_losses<S: Scalar>(f: &LinearHypothesis<S>, d: &Design<S>, p: &SvrParams<S>) -> Result<Vec<S>> {
    d.rows
        .iter()
        .zip(&d.y)
        .map(|(x, y)| Ok(v_epsilon(&(y.clone() - f.eval_reals(x)?), &p.epsilon)))
        .collect()
}

fn objective_on<S: Scalar>(f: &LinearHypothesis<S>, d: &Design<S>, p: &SvrParams<S>) -> Result<S> {
    let sum = residual_losses(f, d, p)?.into_iter().fold(S::zero(), |acc, v| acc + v);
    Ok(sum + p.lambda.clone() * f.weight_norm_sq())
}

fn design_for<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>) -> Result<Design<S>> {
    let d = Design::new(t)?;
    d.check_dim(f)?;
    Ok(d)
}

/// The SVR objective over one training set, with the rows extracted once.
#[derive(Debug, Clone)]
pub struct SvrObjective<S> {
    design: Design<S>,
    params: SvrParams<S>,
}

impl<S: Scalar> SvrObjective<S> {
    pub fn new(t: &TrainingSet<S>, params: &SvrParams<S>) -> Result<Self> {
        Ok(SvrObjective { design: Design::new(t)?, params: params.clone() })
    }

    pub fn value(&self, f: &LinearHypothesis<S>) -> Result<S> {
        self.design.check_dim(f)?;
        objective_on(f, &self.design, &self.params)
    }

    pub fn subgradient(&self, f: &LinearHypothesis<S>) -> Result<LinearHypothesis<S>> {
        self.design.check_dim(f)?;
        subgradient_on(f, &self.design, &self.params)
    }
}

/// `sum_i V_eps(y_i - f(x_i)) + lambda ||b||^2`, without dividing by `m`.
pub fn svr_objective<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>, p: &SvrParams<S>) -> Result<S> {
    objective_on(f, &design_for(f, t)?, p)
}

fn subgradient_on<S: Scalar>(f: &LinearHypothesis<S>, d: &Design<S>, p: &SvrParams<S>) -> Result<LinearHypothesis<S>> {
    let two = S::one() + S::one();
    let mut gb: Vec<S> = f.b.iter().map(|bj| two.clone() * p.lambda.clone() * bj.clone()).collect();
    let mut ga = S::zero();
    for (x, y) in d.rows.iter().zip(&d.y) {
        let r = y.clone() - f.eval_reals(x)?;
        // Zero inside the tube and on its boundary.
        if r.abs() <= p.epsilon {
            continue;
        }
        let sign = r.signum();
        for (g, xi) in gb.iter_mut().zip(x) {
            *g = g.clone() - sign.clone() * xi.clone();
        }
        ga = ga - sign;
    }
    Ok(LinearHypothesis::new(gb, ga))
}

/// Subgradient of case `i`'s term `V_eps(y_i - f(x_i)) + lambda ||b||^2 / m`;
/// the objective is the sum of these terms.
fn term_subgradient_on<S: Scalar>(
    f: &LinearHypothesis<S>,
    d: &Design<S>,
    p: &SvrParams<S>,
    i: usize,
) -> Result<LinearHypothesis<S>> {
    let two = S::one() + S::one();
    let (x, y) = (&d.rows[i], &d.y[i]);
    let r = y.clone() - f.eval_reals(x)?;
    let sign = if r.abs() <= p.epsilon { S::zero() } else { r.signum() };
    let m = d.m();
    let b = f
        .b
        .iter()
        .zip(x)
        .map(|(bj, xj)| two.clone() * p.lambda.clone() * bj.clone() / m.clone() - sign.clone() * xj.clone())
        .collect();
    Ok(LinearHypothesis::new(b, -sign))
}

/// A subgradient of the SVR objective with respect to `(b, a)`.
pub fn svr_subgradient<S: Scalar>(
    f: &LinearHypothesis<S>,
    t: &TrainingSet<S>,
    p: &SvrParams<S>,
) -> Result<LinearHypothesis<S>> {
    subgradient_on(f, &design_for(f, t)?, p)
}

fn svr_aggregation<S: Scalar>(f: &LinearHypothesis<S>, p: &SvrParams<S>) -> Aggregation<S> {
    Aggregation::Regularized { penalty: p.lambda.clone() * f.weight_norm_sq(), divisor: S::one() }
}

fn svr_report<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>, p: &SvrParams<S>) -> Result<InconsistencyReport<S>> {
    let entries = t
        .cases()
        .iter()
        .map(|c| Ok(ReportEntry { case: c.clone(), mu: svr_case_inconsistency(c, f, p)?, counterparts: Some(1) }))
        .collect::<Result<Vec<_>>>()?;
    Ok(InconsistencyReport::new(Hypothesis::Linear(f.clone()), Provenance::FromTraining, entries, svr_aggregation(f, p)))
}

pub fn svr_solve<S: Real>(t: &TrainingSet<S>, p: &SvrParams<S>, cfg: &SolverConfig<S>) -> Result<Solved<S>> {
    let d = Design::new(t)?;
    let (hypothesis, trace) = minimize(
        t.dim(),
        t.len(),
        |f| objective_on(f, &d, p),
        |f, i| term_subgradient_on(f, &d, p, i),
        cfg,
    )?;
    let report = svr_report(&hypothesis, t, p)?;
    Ok(Solved { hypothesis, report, trace })
}

/// Linear epsilon-insensitive regression as an inconsistency minimiser.
/// Each observation's counterpart is the hypothetical case at its point.
#[derive(Debug, Clone, PartialEq)]
pub struct Svr<S> {
    pub params: SvrParams<S>,
    pub solver: SolverConfig<S>,
}

impl<S: Real> Paradigm<S> for Svr<S> {
    fn family(&self) -> Family {
        Family::Svr
    }

    fn baseline(&self, _f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<Baseline<S>> {
        Ok(Baseline { cases: t.cases().to_vec(), provenance: Provenance::FromTraining })
    }

    fn counterparts(&self, alpha: &Case<S>, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<CounterpartSet<S>> {
        let fx = f.evaluate(&alpha.x)?;
        Ok(CounterpartSet::from_hypothesis(vec![Case::new(alpha.x.clone(), fx)]))
    }

    fn case_inconsistency(&self, alpha: &Case<S>, counterparts: &CounterpartSet<S>, _f: &Hypothesis<S>) -> Result<S> {
        let fx = counterparts.cases().and_then(|c| c.first()).ok_or(Error::EmptyNeighborhood)?.y;
        Ok(v_epsilon(&(alpha.y - fx), &self.params.epsilon))
    }

    fn aggregation(&self, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Aggregation<S>> {
        let lin = f.as_linear().ok_or_else(|| Error::UndefinedAt { point: "points other than x0".into() })?;
        Ok(svr_aggregation(lin, &self.params))
    }

    fn search(&self, t: &TrainingSet<S>) -> Result<Search<S>> {
        let solved = svr_solve(t, &self.params, &self.solver)?;
        Ok(Search::Solved(Hypothesis::Linear(solved.hypothesis)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paradigm::{erm_total_inconsistency, FeatureVector};

    fn x(v: f64) -> FeatureVector<f64> {
        FeatureVector::from_f64s(&[v])
    }

    fn set(points: &[(f64, f64)]) -> TrainingSet<f64> {
        TrainingSet::new(points.iter().map(|&(p, y)| Case::new(x(p), y)).collect()).unwrap()
    }

    #[test]
    fn loss_by_hand() {
        assert_eq!(v_epsilon(&0.3, &0.5), 0.0);
        assert_eq!(v_epsilon(&1.0, &0.5), 0.5);
        assert_eq!(v_epsilon(&-2.0, &0.5), 1.5);
        // Both branches agree on the tube boundary.
        assert_eq!(v_epsilon(&0.5, &0.5), 0.0);
    }

    #[test]
    fn case_inconsistency_by_hand() {
        let f = LinearHypothesis::new(vec![1.0], 0.0);
        let p = SvrParams::new(0.25, 0.0).unwrap();
        assert_eq!(svr_case_inconsistency(&Case::new(x(2.0), 2.0), &f, &p).unwrap(), 0.0);
        assert_eq!(svr_case_inconsistency(&Case::new(x(2.0), 2.25), &f, &p).unwrap(), 0.0);
        assert_eq!(svr_case_inconsistency(&Case::new(x(2.0), 2.5), &f, &p).unwrap(), 0.25);
    }

    #[test]
    fn objective_by_hand() {
        let p = SvrParams::new(0.5, 1.0).unwrap();
        assert_eq!(svr_objective(&LinearHypothesis::zero(1), &set(&[(0.0, 1.0)]), &p).unwrap(), 0.5);
        let line = LinearHypothesis::new(vec![2.0], 1.0);
        let t = set(&[(0.0, 1.0), (1.0, 3.0)]);
        assert_eq!(svr_objective(&line, &t, &SvrParams::new(0.0, 0.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn reduces_to_absolute_loss() {
        let t = set(&[(0.0, 1.0), (1.0, -3.0), (2.5, 0.125)]);
        let f = LinearHypothesis::new(vec![0.3], -0.7);
        let p = SvrParams::new(0.0, 0.0).unwrap();
        assert_eq!(
            svr_objective(&f, &t, &p).unwrap(),
            erm_total_inconsistency(&Hypothesis::Linear(f), &t).unwrap()
        );
    }

    #[test]
    fn report_total_is_the_objective() {
        let t = set(&[(0.0, 1.0), (1.0, -3.0), (2.5, 0.125)]);
        let f = LinearHypothesis::new(vec![0.3], -0.7);
        let p = SvrParams::new(0.2, 0.4).unwrap();
        let report = svr_report(&f, &t, &p).unwrap();
        assert_eq!(report.total, svr_objective(&f, &t, &p).unwrap());
        assert_eq!(report.reaggregate(), report.total);
    }

    #[test]
    fn parameters_checked() {
        assert!(SvrParams::new(-0.1, 0.0).is_err());
        assert!(SvrParams::new(0.0, -1.0).is_err());
    }
}
