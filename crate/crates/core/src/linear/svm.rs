use crate::error::{Error, Result};
use crate::linear::solver::{minimize, SolverConfig};
use crate::linear::{Design, Solved};
use crate::paradigm::{
    Aggregation, Baseline, Case, CounterpartSet, Counterparts, Family, FeatureVector, FeedbackDomain, Hypothesis,
    LinearHypothesis, Paradigm, Provenance, ReportEntry, InconsistencyReport, Search, TrainingSet,
};
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct SvmParams<S> {
    /// Regularization weight, strictly positive.
    pub w: S,
}

impl<S: Scalar> SvmParams<S> {
    pub fn new(w: S) -> Result<Self> {
        if w <= S::zero() || !w.is_finite_value() {
            return Err(Error::InvalidParameter { name: "w", reason: "must be positive".into() });
        }
        Ok(SvmParams { w })
    }
}

/// Per-case slack values, aligned with the training set.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackVector<S> {
    pub zeta: Vec<S>,
}

/// The margin-satisfying region `{x : y f(x) >= 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace<S> {
    pub f: LinearHypothesis<S>,
    pub y: S,
}

impl<S: Scalar> HalfSpace<S> {
    pub fn new(f: LinearHypothesis<S>, y: S) -> Self {
        HalfSpace { f, y }
    }

    pub fn contains(&self, x: &FeatureVector<S>) -> Result<bool> {
        Ok(self.y.clone() * self.f.evaluate(x)? >= S::one())
    }
}

/// `|y f(x) - 1|`, the distance to the hyperplane bounding the half-space
/// in the margin scale.
pub fn margin_distance<S: Scalar>(x: &FeatureVector<S>, hs: &HalfSpace<S>) -> Result<S> {
    Ok((hs.y.clone() * hs.f.evaluate(x)? - S::one()).abs())
}

fn hinge<S: Scalar>(margin: S) -> S {
    if margin >= S::one() {
        S::zero()
    } else {
        S::one() - margin
    }
}

fn design_for<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>) -> Result<Design<S>> {
    t.check_feedback(FeedbackDomain::MinusPlusOne)?;
    let design = Design::new(t)?;
    design.check_dim(f)?;
    Ok(design)
}

fn slack_on<S: Scalar>(f: &LinearHypothesis<S>, d: &Design<S>) -> Result<Vec<S>> {
    d.rows
        .iter()
        .zip(&d.y)
        .map(|(x, y)| Ok(hinge(y.clone() * f.eval_reals(x)?)))
        .collect()
}

fn objective_on<S: Scalar>(f: &LinearHypothesis<S>, d: &Design<S>, p: &SvmParams<S>) -> Result<S> {
    let slack = slack_on(f, d)?;
    Ok(constrained_value(f, &slack, d.m(), p))
}

/// `w ||b||^2 + (sum zeta) / m`; shared by both formulations.
fn constrained_value<S: Scalar>(f: &LinearHypothesis<S>, zeta: &[S], m: S, p: &SvmParams<S>) -> S {
    let penalty = p.w.clone() * f.weight_norm_sq();
    let sum = zeta.iter().fold(S::zero(), |acc, z| acc + z.clone());
    penalty + sum / m
}

/// The SVM objectives over one training set, with the rows extracted once.
#[derive(Debug, Clone)]
pub struct SvmObjective<S> {
    design: Design<S>,
    params: SvmParams<S>,
}

impl<S: Scalar> SvmObjective<S> {
    pub fn new(t: &TrainingSet<S>, params: &SvmParams<S>) -> Result<Self> {
        t.check_feedback(FeedbackDomain::MinusPlusOne)?;
        Ok(SvmObjective { design: Design::new(t)?, params: params.clone() })
    }

    pub fn slack(&self, f: &LinearHypothesis<S>) -> Result<SlackVector<S>> {
        self.design.check_dim(f)?;
        Ok(SlackVector { zeta: slack_on(f, &self.design)? })
    }

    /// `y_i f(x_i)` per case.
    pub fn margins(&self, f: &LinearHypothesis<S>) -> Result<Vec<S>> {
        self.design.check_dim(f)?;
        self.design.rows.iter().zip(&self.design.y).map(|(x, y)| Ok(y.clone() * f.eval_reals(x)?)).collect()
    }

    /// Unconstrained objective.
    pub fn value(&self, f: &LinearHypothesis<S>) -> Result<S> {
        self.design.check_dim(f)?;
        objective_on(f, &self.design, &self.params)
    }

    /// Constrained objective at `zeta`; fails on infeasible slack.
    pub fn constrained_value(&self, f: &LinearHypothesis<S>, zeta: &SlackVector<S>) -> Result<S> {
        self.design.check_dim(f)?;
        if let Some(index) = first_infeasible_on(f, &self.design, zeta)? {
            return Err(Error::InfeasibleSlack { index });
        }
        Ok(constrained_value(f, &zeta.zeta, self.design.m(), &self.params))
    }

    /// `w ||b||^2 + (sum zeta) / m` without checking feasibility.
    pub fn penalized_value(&self, f: &LinearHypothesis<S>, zeta: &SlackVector<S>) -> Result<S> {
        self.design.check_dim(f)?;
        if zeta.zeta.len() != self.design.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.design.rows.len(), found: zeta.zeta.len() });
        }
        Ok(constrained_value(f, &zeta.zeta, self.design.m(), &self.params))
    }

    /// Largest amount by which `zeta` violates a constraint; zero when
    /// feasible.
    pub fn max_violation(&self, f: &LinearHypothesis<S>, zeta: &SlackVector<S>) -> Result<S> {
        self.design.check_dim(f)?;
        if zeta.zeta.len() != self.design.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.design.rows.len(), found: zeta.zeta.len() });
        }
        let mut worst = S::zero();
        for ((x, y), z) in self.design.rows.iter().zip(&self.design.y).zip(&zeta.zeta) {
            let gap = S::one() - z.clone() - y.clone() * f.eval_reals(x)?;
            worst = S::max_of(S::max_of(worst, gap), -z.clone());
        }
        Ok(worst)
    }

    pub fn subgradient(&self, f: &LinearHypothesis<S>) -> Result<LinearHypothesis<S>> {
        self.design.check_dim(f)?;
        subgradient_on(f, &self.design, &self.params)
    }
}

fn first_infeasible_on<S: Scalar>(f: &LinearHypothesis<S>, d: &Design<S>, zeta: &SlackVector<S>) -> Result<Option<usize>> {
    if zeta.zeta.len() != d.rows.len() {
        return Err(Error::DimensionMismatch { expected: d.rows.len(), found: zeta.zeta.len() });
    }
    for (i, ((x, y), z)) in d.rows.iter().zip(&d.y).zip(&zeta.zeta).enumerate() {
        let margin = y.clone() * f.eval_reals(x)?;
        if margin < S::one() - z.clone() || *z < S::zero() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Minimal feasible slacks: `max(0, 1 - y_i f(x_i))`.
pub fn svm_slack<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>) -> Result<SlackVector<S>> {
    let d = design_for(f, t)?;
    Ok(SlackVector { zeta: slack_on(f, &d)? })
}

/// Zero inside the half-space of the case's own label, otherwise the
/// distance to its boundary.
pub fn svm_case_inconsistency<S: Scalar>(alpha: &Case<S>, f: &LinearHypothesis<S>) -> Result<S> {
    if !FeedbackDomain::MinusPlusOne.contains(&alpha.y) {
        return Err(Error::FeedbackOutOfDomain {
            index: 0,
            value: alpha.y.to_string(),
            domain: FeedbackDomain::MinusPlusOne.to_string(),
        });
    }
    let region = HalfSpace::new(f.clone(), alpha.y.clone());
    if region.contains(&alpha.x)? {
        Ok(S::zero())
    } else {
        margin_distance(&alpha.x, &region)
    }
}

/// `||[f]_1||^2`, the hypothesis-only part of the objective.
pub fn svm_regularizer<S: Scalar>(f: &LinearHypothesis<S>) -> S {
    f.weight_norm_sq()
}

/// The unconstrained objective `w ||b||^2 + (1/m) sum_i max(0, 1 - y_i f(x_i))`.
pub fn svm_objective<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>, p: &SvmParams<S>) -> Result<S> {
    let d = design_for(f, t)?;
    objective_on(f, &d, p)
}

/// Index of the first slack violating `y_i f(x_i) >= 1 - zeta_i` or
/// `zeta_i >= 0`.
pub fn svm_first_infeasible<S: Scalar>(
    f: &LinearHypothesis<S>,
    t: &TrainingSet<S>,
    zeta: &SlackVector<S>,
) -> Result<Option<usize>> {
    let d = design_for(f, t)?;
    first_infeasible_on(f, &d, zeta)
}

/// The constrained objective `w ||b||^2 + (1/m) sum zeta_i` at a feasible
/// slack vector.
pub fn svm_constrained_objective<S: Scalar>(
    f: &LinearHypothesis<S>,
    t: &TrainingSet<S>,
    zeta: &SlackVector<S>,
    p: &SvmParams<S>,
) -> Result<S> {
    if let Some(index) = svm_first_infeasible(f, t, zeta)? {
        return Err(Error::InfeasibleSlack { index });
    }
    Ok(constrained_value(f, &zeta.zeta, S::from_count(t.len()), p))
}

/// The closed-form slacks satisfy the margin constraints.
pub fn svm_verify_statement1<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>) -> Result<bool> {
    let slack = svm_slack(f, t)?;
    Ok(svm_first_infeasible(f, t, &slack)?.is_none())
}

/// The closed-form slacks are componentwise no larger than any feasible
/// slacks `zeta`.
pub fn svm_verify_statement2<S: Scalar>(
    f: &LinearHypothesis<S>,
    t: &TrainingSet<S>,
    zeta: &SlackVector<S>,
) -> Result<bool> {
    if let Some(index) = svm_first_infeasible(f, t, zeta)? {
        return Err(Error::InfeasibleSlack { index });
    }
    let minimal = svm_slack(f, t)?;
    Ok(minimal.zeta.iter().zip(&zeta.zeta).all(|(lo, z)| lo <= z))
}

/// The constrained objective at the closed-form slacks equals the
/// unconstrained objective.
pub fn svm_verify_lemma1<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>, p: &SvmParams<S>) -> Result<bool> {
    let slack = svm_slack(f, t)?;
    let constrained = svm_constrained_objective(f, t, &slack, p)?;
    Ok(constrained == svm_objective(f, t, p)?)
}

fn subgradient_on<S: Scalar>(f: &LinearHypothesis<S>, d: &Design<S>, p: &SvmParams<S>) -> Result<LinearHypothesis<S>> {
    let two = S::one() + S::one();
    let mut gb: Vec<S> = vec![S::zero(); f.dim()];
    let mut ga = S::zero();
    for (x, y) in d.rows.iter().zip(&d.y) {
        // y f(x) == 1 counts as inactive.
        if y.clone() * f.eval_reals(x)? < S::one() {
            for (g, xi) in gb.iter_mut().zip(x) {
                *g = g.clone() - y.clone() * xi.clone();
            }
            ga = ga - y.clone();
        }
    }
    let m = d.m();
    let b = gb
        .into_iter()
        .zip(&f.b)
        .map(|(g, bj)| two.clone() * p.w.clone() * bj.clone() + g / m.clone())
        .collect();
    Ok(LinearHypothesis::new(b, ga / m))
}

/// Subgradient of case `i`'s term `w ||b||^2 + max(0, 1 - y_i f(x_i))`;
/// the objective is the mean of these terms.
fn term_subgradient_on<S: Scalar>(
    f: &LinearHypothesis<S>,
    d: &Design<S>,
    p: &SvmParams<S>,
    i: usize,
) -> Result<LinearHypothesis<S>> {
    let two = S::one() + S::one();
    let (x, y) = (&d.rows[i], &d.y[i]);
    let active = y.clone() * f.eval_reals(x)? < S::one();
    let b = f
        .b
        .iter()
        .zip(x)
        .map(|(bj, xj)| {
            let reg = two.clone() * p.w.clone() * bj.clone();
            if active {
                reg - y.clone() * xj.clone()
            } else {
                reg
            }
        })
        .collect();
    let a = if active { -y.clone() } else { S::zero() };
    Ok(LinearHypothesis::new(b, a))
}

/// A subgradient of the unconstrained objective with respect to `(b, a)`.
pub fn svm_subgradient<S: Scalar>(
    f: &LinearHypothesis<S>,
    t: &TrainingSet<S>,
    p: &SvmParams<S>,
) -> Result<LinearHypothesis<S>> {
    let d = design_for(f, t)?;
    subgradient_on(f, &d, p)
}

/// Case-by-case report of `f`: observations as baseline cases, each against
/// the half-space of its own label.
fn svm_report<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>, p: &SvmParams<S>) -> Result<InconsistencyReport<S>> {
    let entries = t
        .cases()
        .iter()
        .map(|c| Ok(ReportEntry { case: c.clone(), mu: svm_case_inconsistency(c, f)?, counterparts: None }))
        .collect::<Result<Vec<_>>>()?;
    Ok(InconsistencyReport::new(
        Hypothesis::Linear(f.clone()),
        Provenance::FromTraining,
        entries,
        svm_aggregation(f, t, p),
    ))
}

fn svm_aggregation<S: Scalar>(f: &LinearHypothesis<S>, t: &TrainingSet<S>, p: &SvmParams<S>) -> Aggregation<S> {
    Aggregation::Regularized { penalty: p.w.clone() * f.weight_norm_sq(), divisor: S::from_count(t.len()) }
}

/// Minimises the unconstrained objective from `b = 0, a = 0`.
pub fn svm_solve<S: Real>(t: &TrainingSet<S>, p: &SvmParams<S>, cfg: &SolverConfig<S>) -> Result<Solved<S>> {
    t.check_feedback(FeedbackDomain::MinusPlusOne)?;
    let d = Design::new(t)?;
    let (hypothesis, trace) = minimize(
        t.dim(),
        t.len(),
        |f| objective_on(f, &d, p),
        |f, i| term_subgradient_on(f, &d, p, i),
        cfg,
    )?;
    let report = svm_report(&hypothesis, t, p)?;
    Ok(Solved { hypothesis, report, trace })
}

/// Linear SVM as an inconsistency minimiser.
#[derive(Debug, Clone, PartialEq)]
pub struct Svm<S> {
    pub params: SvmParams<S>,
    pub solver: SolverConfig<S>,
}

fn linear_of<S: Scalar>(f: &Hypothesis<S>) -> Result<&LinearHypothesis<S>> {
    f.as_linear().ok_or_else(|| Error::UndefinedAt { point: "points other than x0".into() })
}

impl<S: Real> Paradigm<S> for Svm<S> {
    fn family(&self) -> Family {
        Family::Svm
    }

    fn baseline(&self, _f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<Baseline<S>> {
        Ok(Baseline { cases: t.cases().to_vec(), provenance: Provenance::FromTraining })
    }

    fn counterparts(&self, alpha: &Case<S>, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<CounterpartSet<S>> {
        Ok(CounterpartSet {
            members: Counterparts::HalfSpace(HalfSpace::new(linear_of(f)?.clone(), alpha.y)),
            provenance: Provenance::FromHypothesis,
        })
    }

    fn case_inconsistency(&self, alpha: &Case<S>, _counterparts: &CounterpartSet<S>, f: &Hypothesis<S>) -> Result<S> {
        svm_case_inconsistency(alpha, linear_of(f)?)
    }

    fn aggregation(&self, f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<Aggregation<S>> {
        Ok(svm_aggregation(linear_of(f)?, t, &self.params))
    }

    fn search(&self, t: &TrainingSet<S>) -> Result<Search<S>> {
        let solved = svm_solve(t, &self.params, &self.solver)?;
        Ok(Search::Solved(Hypothesis::Linear(solved.hypothesis)))
    }
}
