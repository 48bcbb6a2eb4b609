use crate::linear::HalfSpace;
use crate::paradigm::domain::{Case, Provenance};
use crate::paradigm::hypothesis::Hypothesis;
use crate::scalar::Scalar;

/// Members of a counterpart set. Half-space counterparts are infinite and
/// kept symbolically.
#[derive(Debug, Clone, PartialEq)]
pub enum Counterparts<S> {
    Cases(Vec<Case<S>>),
    HalfSpace(HalfSpace<S>),
}

/// Cases deemed similar to one baseline case, drawn from the opposite
/// source.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterpartSet<S> {
    pub members: Counterparts<S>,
    pub provenance: Provenance,
}

impl<S: Scalar> CounterpartSet<S> {
    pub fn from_training(cases: Vec<Case<S>>) -> Self {
        CounterpartSet { members: Counterparts::Cases(cases), provenance: Provenance::FromTraining }
    }

    pub fn from_hypothesis(cases: Vec<Case<S>>) -> Self {
        CounterpartSet { members: Counterparts::Cases(cases), provenance: Provenance::FromHypothesis }
    }

    /// `None` for infinite sets.
    pub fn count(&self) -> Option<usize> {
        match &self.members {
            Counterparts::Cases(c) => Some(c.len()),
            Counterparts::HalfSpace(_) => None,
        }
    }

    pub fn cases(&self) -> Option<&[Case<S>]> {
        match &self.members {
            Counterparts::Cases(c) => Some(c),
            Counterparts::HalfSpace(_) => None,
        }
    }

    /// Arithmetic mean of member feedbacks, in member order. `None` for
    /// empty or infinite sets.
    pub fn mean_feedback(&self) -> Option<S> {
        let cases = self.cases()?;
        if cases.is_empty() {
            return None;
        }
        let sum = cases.iter().fold(S::zero(), |acc, c| acc + c.y.clone());
        Some(sum / S::from_count(cases.len()))
    }
}

/// Baseline cases `H(f, T)` with their common provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Baseline<S> {
    pub cases: Vec<Case<S>>,
    pub provenance: Provenance,
}

/// How case inconsistencies combine into the total.
#[derive(Debug, Clone, PartialEq)]
pub enum Aggregation<S> {
    Sum,
    Product,
    /// `penalty + sum / divisor`, a hypothesis-only term plus a scaled sum.
    Regularized { penalty: S, divisor: S },
}

impl<S: Scalar> Aggregation<S> {
    /// Folds in iteration order, which callers keep equal to baseline order.
    pub fn apply<'a, I>(&self, mus: I) -> S
    where
        I: IntoIterator<Item = &'a S>,
    {
        match self {
            Aggregation::Sum => mus.into_iter().fold(S::zero(), |acc, mu| acc + mu.clone()),
            Aggregation::Product => mus.into_iter().fold(S::one(), |acc, mu| acc * mu.clone()),
            Aggregation::Regularized { penalty, divisor } => {
                let sum = mus.into_iter().fold(S::zero(), |acc, mu| acc + mu.clone());
                penalty.clone() + sum / divisor.clone()
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Aggregation::Sum => "sum",
            Aggregation::Product => "product",
            Aggregation::Regularized { .. } => "regularized_sum",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry<S> {
    pub case: Case<S>,
    pub mu: S,
    /// `None` when the counterpart set is infinite.
    pub counterparts: Option<usize>,
}

/// Per-baseline-case inconsistencies of one hypothesis and their total.
#[derive(Debug, Clone, PartialEq)]
pub struct InconsistencyReport<S> {
    pub hypothesis: Hypothesis<S>,
    pub baseline_provenance: Provenance,
    pub entries: Vec<ReportEntry<S>>,
    pub aggregation: Aggregation<S>,
    pub total: S,
}

impl<S: Scalar> InconsistencyReport<S> {
    pub fn new(
        hypothesis: Hypothesis<S>,
        baseline_provenance: Provenance,
        entries: Vec<ReportEntry<S>>,
        aggregation: Aggregation<S>,
    ) -> Self {
        let total = aggregation.apply(entries.iter().map(|e| &e.mu));
        InconsistencyReport { hypothesis, baseline_provenance, entries, aggregation, total }
    }

    /// Recomputes the total from the entries.
    pub fn reaggregate(&self) -> S {
        self.aggregation.apply(self.entries.iter().map(|e| &e.mu))
    }

    pub fn mus(&self) -> impl Iterator<Item = &S> + '_ {
        self.entries.iter().map(|e| &e.mu)
    }
}
