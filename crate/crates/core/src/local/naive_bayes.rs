use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::local::Prediction;
use crate::paradigm::{
    binary_candidates, select_hypothesis, Aggregation, Baseline, Case, CounterpartSet, Family, FeatureValue,
    FeatureVector, FeedbackDomain, Hypothesis, Paradigm, Param, ProblemStatement, Provenance, Search, TrainingSet,
};
use crate::scalar::Scalar;

/// Single-feature problem obtained by splitting every observation into one
/// case per feature. Repeated cases are expected and kept.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedProblem<S> {
    /// Pooled value set, sorted.
    pub values: Vec<String>,
    /// The coordinates of the query point, in feature order.
    pub x0: Vec<String>,
    /// `n * m` cases `<[x]_i, y>`, observation-major.
    pub cases: Vec<Case<S>>,
}

fn nominal_symbols<S: Scalar>(x: &FeatureVector<S>) -> Result<Vec<&str>> {
    x.values()
        .iter()
        .enumerate()
        .map(|(pos, v)| match v {
            FeatureValue::Nominal(s) => Ok(s.as_str()),
            _ => Err(Error::NotNominal { position: pos + 1 }),
        })
        .collect()
}

pub(crate) fn single_value_case<S: Scalar>(symbol: &str, y: S) -> Case<S> {
    Case::new(FeatureVector::nominal([symbol]), y)
}

/// Flattens `T` into the pooled single-feature problem at `x0`.
pub fn nb_transform<S: Scalar>(x0: &FeatureVector<S>, t: &TrainingSet<S>) -> Result<TransformedProblem<S>> {
    if x0.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: x0.dim() });
    }
    t.check_feedback(FeedbackDomain::ZeroOne)?;
    if let Some(schema) = t.schema() {
        schema.check_disjoint_nominals()?;
    }
    let query = nominal_symbols(x0)?;
    let mut owner: HashMap<String, usize> = HashMap::new();
    let mut claim = |sym: &str, pos: usize| -> Result<()> {
        match owner.get(sym) {
            Some(&first) if first != pos => Err(Error::NonDisjointValueSets {
                symbol: sym.to_string(),
                first: first.min(pos),
                second: first.max(pos),
            }),
            Some(_) => Ok(()),
            None => {
                owner.insert(sym.to_string(), pos);
                Ok(())
            }
        }
    };
    let mut cases = Vec::with_capacity(t.len() * t.dim());
    for case in t.cases() {
        for (pos, sym) in nominal_symbols(&case.x)?.into_iter().enumerate() {
            claim(sym, pos + 1)?;
            cases.push(single_value_case(sym, case.y.clone()));
        }
    }
    for (pos, sym) in query.iter().enumerate() {
        claim(sym, pos + 1)?;
    }
    let mut values: Vec<String> = owner.into_keys().collect();
    values.sort();
    Ok(TransformedProblem { values, x0: query.into_iter().map(str::to_string).collect(), cases })
}

/// Fraction of same-valued cases in `T'` whose label differs from
/// `alpha`'s; 1/2 when the value never occurs.
pub fn nb_case_inconsistency<S: Scalar>(alpha: &Case<S>, transformed: &[Case<S>]) -> S {
    let (matching, differing) = transformed
        .iter()
        .filter(|beta| beta.x == alpha.x)
        .fold((0usize, 0usize), |(n, d), beta| (n + 1, d + usize::from(beta.y != alpha.y)));
    if matching == 0 {
        return S::one() / (S::one() + S::one());
    }
    S::from_count(differing) / S::from_count(matching)
}

/// Naive Bayes at one query point over nominal features and labels
/// `{0, 1}`; the total is the product of the per-feature inconsistencies.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayes<S> {
    pub x0: FeatureVector<S>,
}

impl<S: Scalar> Paradigm<S> for NaiveBayes<S> {
    fn family(&self) -> Family {
        Family::Nb
    }

    fn baseline(&self, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Baseline<S>> {
        let value = f.evaluate(&self.x0)?;
        let cases = nominal_symbols(&self.x0)?
            .into_iter()
            .map(|sym| single_value_case(sym, value.clone()))
            .collect();
        Ok(Baseline { cases, provenance: Provenance::FromHypothesis })
    }

    fn counterparts(&self, alpha: &Case<S>, _f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<CounterpartSet<S>> {
        let transformed = nb_transform(&self.x0, t)?;
        Ok(CounterpartSet::from_training(
            transformed.cases.into_iter().filter(|beta| beta.x == alpha.x).collect(),
        ))
    }

    fn case_inconsistency(&self, alpha: &Case<S>, counterparts: &CounterpartSet<S>, _f: &Hypothesis<S>) -> Result<S> {
        Ok(nb_case_inconsistency(alpha, counterparts.cases().unwrap_or(&[])))
    }

    fn aggregation(&self, _f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Aggregation<S>> {
        Ok(Aggregation::Product)
    }

    fn search(&self, _t: &TrainingSet<S>) -> Result<Search<S>> {
        Ok(Search::Finite(binary_candidates(&self.x0, FeedbackDomain::ZeroOne)))
    }
}

pub fn nb_predict<S: Scalar>(x0: &FeatureVector<S>, t: &TrainingSet<S>) -> Result<Prediction<S>> {
    // Surface transform errors (overlapping value sets, kinds) up front.
    nb_transform(x0, t)?;
    let problem = ProblemStatement::new(Family::Nb, vec![Param::X0(x0.clone())])?;
    select_hypothesis(&NaiveBayes { x0: x0.clone() }, &problem, t).map(Prediction::from)
}
