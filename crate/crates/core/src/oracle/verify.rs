//! Randomized checks of the SVM / SVM* equivalence.

use std::cell::Cell;
use std::fmt;

use rand::Rng;

use crate::error::Result;
use crate::linear::{svm_first_infeasible, svm_objective, svm_slack, SlackVector, SvmObjective, SvmParams};
use crate::oracle::brute::random_feasible_slack;
use crate::oracle::generate::{
    generate_instance, lift_linear, lift_training_set, random_dyadic_linear, random_linear, rng_from_seed,
    FeatureDraw, LabelScheme, RandomInstance,
};
use crate::oracle::grid::{grid_search_linear, GridBox};
use crate::paradigm::{FeedbackDomain, LinearHypothesis, TrainingSet};
use crate::scalar::Scalar;
use crate::Exact;

/// Trial counts for every randomized check, kept together so a full run
/// stays short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialBudget {
    pub feasibility: usize,
    pub minimality: usize,
    pub agreement: usize,
    pub inconsistency: usize,
    pub tiny_argmin: usize,
    pub solver_quality: usize,
    pub smoothing: usize,
    pub knn_queries: usize,
    pub naive_bayes: usize,
    pub tree: usize,
    pub tree_probes: usize,
    pub svr_reduction: usize,
    pub subgradient: usize,
}

impl Default for TrialBudget {
    fn default() -> Self {
        TrialBudget {
            feasibility: 1000,
            minimality: 1000,
            agreement: 1000,
            inconsistency: 1000,
            tiny_argmin: 50,
            solver_quality: 50,
            smoothing: 200,
            knn_queries: 20,
            naive_bayes: 500,
            tree: 200,
            tree_probes: 1000,
            svr_reduction: 500,
            subgradient: 100,
        }
    }
}

impl TrialBudget {
    /// The equivalence checks with `n` trials each.
    pub fn uniform(n: usize) -> Self {
        TrialBudget { feasibility: n, minimality: n, agreement: n, inconsistency: n, tiny_argmin: n, ..Self::default() }
    }
}

/// Grid used for tiny instances: `[-3, 3]` per axis.
pub const TINY_GRID_HALF_WIDTH: f64 = 3.0;
pub const TINY_GRID_STEP: f64 = 0.05;
/// Allowed constraint violation when slacks are computed in `f64`.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;
/// Largest increment [`random_feasible_slack`] adds to a minimal slack.
pub const FEASIBLE_NOISE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Seed of the first failing trial and what went wrong there.
    pub first_failure: Option<(u64, String)>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_failure {
            None => write!(f, "PASS {} ({} trials)", self.name, self.trials),
            Some((seed, why)) => write!(
                f,
                "FAIL {} ({}/{} trials failed; first failing seed {}: {})",
                self.name, self.failures, self.trials, seed, why
            ),
        }
    }
}

/// Runs `trial` on seeds `base, base + 1, ..`; `Ok(None)` is a pass.
pub fn run_check<F>(name: &'static str, base_seed: u64, trials: usize, mut trial: F) -> CheckOutcome
where
    F: FnMut(u64) -> Result<Option<String>>,
{
    let mut out = CheckOutcome { name, trials, failures: 0, first_failure: None };
    for i in 0..trials {
        let seed = base_seed.wrapping_add(i as u64);
        let failure = match trial(seed) {
            Ok(None) => continue,
            Ok(Some(why)) => why,
            Err(e) => e.to_string(),
        };
        out.failures += 1;
        if out.first_failure.is_none() {
            out.first_failure = Some((seed, failure));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySummary {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn first_failing_seed(&self) -> Option<u64> {
        self.outcomes.iter().find_map(|o| o.first_failure.as_ref().map(|(s, _)| *s))
    }
}

/// How slack vectors are derived from a hypothesis. The harness takes this
/// as a parameter so that a deliberately broken rule can be shown to fail.
pub trait SlackRule {
    fn slack<S: Scalar>(&self, f: &LinearHypothesis<S>, objective: &SvmObjective<S>) -> Result<SlackVector<S>>;
}

/// `max(0, 1 - y f(x))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedFormSlack;

impl SlackRule for ClosedFormSlack {
    fn slack<S: Scalar>(&self, f: &LinearHypothesis<S>, objective: &SvmObjective<S>) -> Result<SlackVector<S>> {
        objective.slack(f)
    }
}

/// A labelled data set with `n <= 3`, `m <= 20` and a hypothesis. Half of
/// the seeds use dyadic grids so that cases land on the margin exactly.
pub fn svm_instance(seed: u64) -> Result<(LinearHypothesis<f64>, TrainingSet<f64>, f64)> {
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(1..=3usize);
    let on_grid = rng.gen_bool(0.5);
    let (features, cap) = if on_grid {
        (FeatureDraw::Grid((-4..=4).map(|i| f64::from(i) * 0.5).collect()), 9usize.pow(n as u32))
    } else {
        (FeatureDraw::Continuous { lo: -2.0, hi: 2.0 }, usize::MAX)
    };
    let m = rng.gen_range(1..=20usize.min(cap));
    let f = if on_grid { random_dyadic_linear(&mut rng, n) } else { random_linear(&mut rng, n, 2.0) };
    let w = [0.01, 0.1, 0.5, 1.0][rng.gen_range(0..4)];
    let spec = RandomInstance {
        seed: rng.gen(),
        n,
        m,
        features,
        labels: LabelScheme::Coin(FeedbackDomain::MinusPlusOne),
        queries: 0,
    };
    let (t, _) = generate_instance(&spec)?;
    Ok((f, t, w))
}

/// `n <= 2`, `m <= 6`, for exhaustive grid searches.
pub fn tiny_svm_instance(seed: u64) -> Result<(TrainingSet<f64>, f64)> {
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(1..=2usize);
    let m = rng.gen_range(1..=6usize);
    let w = [0.01, 0.1, 0.5][rng.gen_range(0..3)];
    let spec = RandomInstance {
        seed: rng.gen(),
        n,
        m,
        features: FeatureDraw::Continuous { lo: -2.0, hi: 2.0 },
        labels: LabelScheme::Coin(FeedbackDomain::MinusPlusOne),
        queries: 0,
    };
    Ok((generate_instance(&spec)?.0, w))
}

struct ExactInstance {
    f: LinearHypothesis<Exact>,
    t: TrainingSet<Exact>,
    params: SvmParams<Exact>,
    objective: SvmObjective<Exact>,
    raw: (LinearHypothesis<f64>, TrainingSet<f64>),
}

fn exact_instance(seed: u64) -> Result<ExactInstance> {
    let (f64_f, f64_t, w) = svm_instance(seed)?;
    let t: TrainingSet<Exact> = lift_training_set(&f64_t)?;
    let params = SvmParams::new(Exact::from_f64_lossless(w))?;
    let objective = SvmObjective::new(&t, &params)?;
    Ok(ExactInstance { f: lift_linear(&f64_f), t, params, objective, raw: (f64_f, f64_t) })
}

/// The rule's slacks satisfy every margin constraint.
pub fn check_slack_feasible<R: SlackRule>(rule: &R, base_seed: u64, trials: usize) -> CheckOutcome {
    run_check("closed-form slack is feasible", base_seed, trials, |seed| {
        let inst = exact_instance(seed)?;
        let zeta = rule.slack(&inst.f, &inst.objective)?;
        Ok(svm_first_infeasible(&inst.f, &inst.t, &zeta)?.map(|i| format!("constraint {} violated", i + 1)))
    })
}

/// The rule's slacks are componentwise below random feasible slacks.
pub fn check_slack_minimal<R: SlackRule>(rule: &R, base_seed: u64, trials: usize) -> CheckOutcome {
    run_check("closed-form slack is minimal", base_seed, trials, |seed| {
        let inst = exact_instance(seed)?;
        let zeta = rule.slack(&inst.f, &inst.objective)?;
        let (raw_f, raw_t) = &inst.raw;
        let feasible: SlackVector<Exact> = {
            let t: TrainingSet<Exact> = lift_training_set(raw_t)?;
            random_feasible_slack(&lift_linear(raw_f), &t, seed ^ 0x5eed, FEASIBLE_NOISE)?
        };
        Ok(zeta
            .zeta
            .iter()
            .zip(&feasible.zeta)
            .position(|(lo, z)| lo > z)
            .map(|i| format!("slack {} exceeds a feasible slack", i + 1)))
    })
}

/// Constrained objective at the rule's slacks equals the unconstrained one.
pub fn check_objectives_agree<R: SlackRule>(rule: &R, base_seed: u64, trials: usize) -> CheckOutcome {
    run_check("objectives agree at closed-form slack", base_seed, trials, |seed| {
        let inst = exact_instance(seed)?;
        let zeta = rule.slack(&inst.f, &inst.objective)?;
        let constrained = inst.objective.constrained_value(&inst.f, &zeta)?;
        let unconstrained = svm_objective(&inst.f, &inst.t, &inst.params)?;
        Ok((constrained != unconstrained).then(|| format!("{constrained} != {unconstrained}")))
    })
}

/// Per-case inconsistencies equal the closed-form slacks.
pub fn check_inconsistency_is_slack(base_seed: u64, trials: usize) -> CheckOutcome {
    run_check("case inconsistency equals slack", base_seed, trials, |seed| {
        let inst = exact_instance(seed)?;
        let zeta = svm_slack(&inst.f, &inst.t)?;
        for (i, (case, z)) in inst.t.cases().iter().zip(&zeta.zeta).enumerate() {
            let mu = crate::linear::svm_case_inconsistency(case, &inst.f)?;
            if mu != *z {
                return Ok(Some(format!("case {}: mu {mu} != slack {z}", i + 1)));
            }
        }
        Ok(None)
    })
}

/// On tiny instances both objectives have the same first grid minimizer.
pub fn check_tiny_argmin<R: SlackRule>(rule: &R, base_seed: u64, trials: usize) -> CheckOutcome {
    run_check("same grid minimizer on tiny instances", base_seed, trials, |seed| {
        let (t, w) = tiny_svm_instance(seed)?;
        let objective = SvmObjective::new(&t, &SvmParams::new(w)?)?;
        let bounds = GridBox::cube(t.dim(), -TINY_GRID_HALF_WIDTH, TINY_GRID_HALF_WIDTH);
        let (f_star, v_star) = grid_search_linear(|f| objective.value(f), &bounds, TINY_GRID_STEP)?;
        // Rounding makes 1 - (1 - y f(x)) differ from y f(x) in the last
        // bits, so feasibility is checked up to a tolerance here.
        let worst = Cell::new(0.0f64);
        let (f_con, v_con) = grid_search_linear(
            |f| {
                let zeta = rule.slack(f, &objective)?;
                worst.set(worst.get().max(objective.max_violation(f, &zeta)?));
                objective.penalized_value(f, &zeta)
            },
            &bounds,
            TINY_GRID_STEP,
        )?;
        let worst = worst.get();
        if worst > FEASIBILITY_TOLERANCE {
            return Ok(Some(format!("slack infeasible by {worst}")));
        }
        Ok((f_star != f_con || v_star != v_con).then(|| format!("minimizers differ: {f_star} vs {f_con}")))
    })
}

/// Everything the `verify` command runs, with the given slack rule.
pub fn verify_equivalence_with<R: SlackRule>(rule: &R, base_seed: u64, budget: &TrialBudget) -> VerifySummary {
    VerifySummary {
        outcomes: vec![
            check_slack_feasible(rule, base_seed, budget.feasibility),
            check_slack_minimal(rule, base_seed, budget.minimality),
            check_objectives_agree(rule, base_seed, budget.agreement),
            check_tiny_argmin(rule, base_seed, budget.tiny_argmin),
        ],
    }
}

pub fn verify_equivalence(base_seed: u64, budget: &TrialBudget) -> VerifySummary {
    verify_equivalence_with(&ClosedFormSlack, base_seed, budget)
}
