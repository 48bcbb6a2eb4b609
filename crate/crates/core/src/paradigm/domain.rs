use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Kind of a single feature position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Numeric,
    Ordinal,
    Nominal,
}

/// One component of a feature vector.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureValue<S> {
    Numeric(S),
    /// Rank within the declared ordered level list, starting at 0.
    Ordinal(usize),
    Nominal(String),
}

impl<S> FeatureValue<S> {
    pub fn kind(&self) -> ValueKind {
        match self {
            FeatureValue::Numeric(_) => ValueKind::Numeric,
            FeatureValue::Ordinal(_) => ValueKind::Ordinal,
            FeatureValue::Nominal(_) => ValueKind::Nominal,
        }
    }
}

impl<S: fmt::Display> fmt::Display for FeatureValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Numeric(v) => write!(f, "{v}"),
            FeatureValue::Ordinal(r) => write!(f, "#{r}"),
            FeatureValue::Nominal(s) => f.write_str(s),
        }
    }
}

/// Declared kind of a feature column, with its finite value set where one
/// is needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureKind {
    Numeric,
    Ordinal { levels: Vec<String> },
    Nominal { symbols: Vec<String> },
}

impl FeatureKind {
    pub fn value_kind(&self) -> ValueKind {
        match self {
            FeatureKind::Numeric => ValueKind::Numeric,
            FeatureKind::Ordinal { .. } => ValueKind::Ordinal,
            FeatureKind::Nominal { .. } => ValueKind::Nominal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

/// Descriptor of the feature domain X.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Schema {
    pub features: Vec<FeatureSpec>,
}

impl Schema {
    pub fn new(features: Vec<FeatureSpec>) -> Self {
        Schema { features }
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    /// Checks that one feature vector conforms to the declared kinds and
    /// value sets.
    pub fn check<S: Scalar>(&self, x: &FeatureVector<S>) -> std::result::Result<(), String> {
        if x.dim() != self.dim() {
            return Err(format!("dimension {} differs from schema dimension {}", x.dim(), self.dim()));
        }
        for (pos, (value, spec)) in x.values().iter().zip(&self.features).enumerate() {
            match (value, &spec.kind) {
                (FeatureValue::Numeric(_), FeatureKind::Numeric) => {}
                (FeatureValue::Ordinal(rank), FeatureKind::Ordinal { levels }) => {
                    if *rank >= levels.len() {
                        return Err(format!(
                            "feature {}: rank {rank} outside {} declared levels",
                            pos + 1,
                            levels.len()
                        ));
                    }
                }
                (FeatureValue::Nominal(sym), FeatureKind::Nominal { symbols }) => {
                    if !symbols.contains(sym) {
                        return Err(format!("feature {}: undeclared symbol `{sym}`", pos + 1));
                    }
                }
                _ => {
                    return Err(format!(
                        "feature {}: value kind {:?} but declared {:?}",
                        pos + 1,
                        value.kind(),
                        spec.kind.value_kind()
                    ))
                }
            }
        }
        Ok(())
    }

    /// Fails with `NonDisjointValueSets` when a nominal symbol is declared
    /// for two positions. Positions are 1-based in the error.
    pub fn check_disjoint_nominals(&self) -> Result<()> {
        let mut owner: HashMap<&str, usize> = HashMap::new();
        for (pos, spec) in self.features.iter().enumerate() {
            if let FeatureKind::Nominal { symbols } = &spec.kind {
                for sym in symbols {
                    if let Some(&first) = owner.get(sym.as_str()) {
                        if first != pos + 1 {
                            return Err(Error::NonDisjointValueSets {
                                symbol: sym.clone(),
                                first,
                                second: pos + 1,
                            });
                        }
                    } else {
                        owner.insert(sym, pos + 1);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Ordered list of feature values. Component access through
/// [`FeatureVector::component`] is 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector<S> {
    values: Vec<FeatureValue<S>>,
}

impl<S: Scalar> FeatureVector<S> {
    pub fn new(values: Vec<FeatureValue<S>>) -> Self {
        FeatureVector { values }
    }

    pub fn numeric<I: IntoIterator<Item = S>>(values: I) -> Self {
        FeatureVector::new(values.into_iter().map(FeatureValue::Numeric).collect())
    }

    /// Numeric vector from doubles, converted without rounding where the
    /// scalar type allows it.
    pub fn from_f64s(values: &[f64]) -> Self {
        FeatureVector::numeric(values.iter().map(|&v| S::from_f64_lossless(v)))
    }

    pub fn ordinal<I: IntoIterator<Item = usize>>(ranks: I) -> Self {
        FeatureVector::new(ranks.into_iter().map(FeatureValue::Ordinal).collect())
    }

    pub fn nominal<I, T>(symbols: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        FeatureVector::new(symbols.into_iter().map(|s| FeatureValue::Nominal(s.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[FeatureValue<S>] {
        &self.values
    }

    /// `[x]_i` with `i` starting at 1.
    pub fn component(&self, i: usize) -> Option<&FeatureValue<S>> {
        i.checked_sub(1).and_then(|idx| self.values.get(idx))
    }

    pub fn kinds(&self) -> Vec<ValueKind> {
        self.values.iter().map(FeatureValue::kind).collect()
    }

    /// All components as reals; fails on the first non-numeric position.
    pub fn to_reals(&self) -> Result<Vec<S>> {
        self.values
            .iter()
            .enumerate()
            .map(|(pos, v)| match v {
                FeatureValue::Numeric(x) => Ok(x.clone()),
                _ => Err(Error::NonNumericFeature { position: pos + 1 }),
            })
            .collect()
    }

    /// Coordinates used by distance computations: numeric values as-is and
    /// ordinal features by rank.
    pub fn to_metric_coords(&self) -> Result<Vec<S>> {
        self.values
            .iter()
            .enumerate()
            .map(|(pos, v)| match v {
                FeatureValue::Numeric(x) => Ok(x.clone()),
                FeatureValue::Ordinal(r) => Ok(S::from_count(*r)),
                FeatureValue::Nominal(_) => Err(Error::NonNumericFeature { position: pos + 1 }),
            })
            .collect()
    }

    pub fn to_ranks(&self) -> Result<Vec<usize>> {
        self.values
            .iter()
            .enumerate()
            .map(|(pos, v)| match v {
                FeatureValue::Ordinal(r) => Ok(*r),
                _ => Err(Error::NotOrdinal { position: pos + 1 }),
            })
            .collect()
    }

    fn hash_key(&self) -> Vec<KeyPart> {
        self.values
            .iter()
            .map(|v| match v {
                // -0.0 and 0.0 compare equal, so they must share a bucket.
                FeatureValue::Numeric(x) => KeyPart::Num((x.to_f64_lossy() + 0.0).to_bits()),
                FeatureValue::Ordinal(r) => KeyPart::Ord(*r),
                FeatureValue::Nominal(s) => KeyPart::Nom(s.clone()),
            })
            .collect()
    }
}

impl<S: fmt::Display> fmt::Display for FeatureVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Hash, PartialEq, Eq)]
enum KeyPart {
    Num(u64),
    Ord(usize),
    Nom(String),
}

/// An observation or hypothetical pair `<x, y>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Case<S> {
    pub x: FeatureVector<S>,
    pub y: S,
}

impl<S: Scalar> Case<S> {
    pub fn new(x: FeatureVector<S>, y: S) -> Self {
        Case { x, y }
    }
}

impl<S: fmt::Display> fmt::Display for Case<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.x, self.y)
    }
}

/// Validated, non-empty, ordered collection of observations with pairwise
/// distinct feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet<S> {
    cases: Vec<Case<S>>,
    kinds: Vec<ValueKind>,
    schema: Option<Schema>,
}

/// Builds a [`TrainingSet`], checking emptiness, homogeneity and
/// distinctness of feature vectors.
pub fn validate_training_set<S: Scalar>(cases: Vec<Case<S>>) -> Result<TrainingSet<S>> {
    TrainingSet::new(cases)
}

impl<S: Scalar> TrainingSet<S> {
    pub fn new(cases: Vec<Case<S>>) -> Result<Self> {
        Self::build(cases, None)
    }

    /// Like [`TrainingSet::new`] and additionally checks every vector
    /// against `schema`.
    pub fn with_schema(cases: Vec<Case<S>>, schema: Schema) -> Result<Self> {
        Self::build(cases, Some(schema))
    }

    fn build(cases: Vec<Case<S>>, schema: Option<Schema>) -> Result<Self> {
        let first = cases.first().ok_or(Error::EmptySet)?;
        let kinds = first.x.kinds();
        for (index, case) in cases.iter().enumerate() {
            if case.x.dim() != kinds.len() {
                return Err(Error::SchemaMismatch {
                    index,
                    detail: format!("dimension {} differs from {}", case.x.dim(), kinds.len()),
                });
            }
            if let Some(pos) = case.x.values().iter().zip(&kinds).position(|(v, k)| v.kind() != *k) {
                return Err(Error::SchemaMismatch {
                    index,
                    detail: format!("feature {} changes kind", pos + 1),
                });
            }
            let non_finite = case.x.values().iter().any(|v| match v {
                FeatureValue::Numeric(x) => !x.is_finite_value(),
                _ => false,
            });
            if non_finite || !case.y.is_finite_value() {
                return Err(Error::SchemaMismatch {
                    index,
                    detail: "non-finite value".to_string(),
                });
            }
            if let Some(schema) = &schema {
                schema
                    .check(&case.x)
                    .map_err(|detail| Error::SchemaMismatch { index, detail })?;
            }
        }
        let mut seen: HashMap<Vec<KeyPart>, Vec<usize>> = HashMap::new();
        for (index, case) in cases.iter().enumerate() {
            let bucket = seen.entry(case.x.hash_key()).or_default();
            if let Some(&first) = bucket.iter().find(|&&j| cases[j].x == case.x) {
                return Err(Error::DuplicateFeatureVector { first, second: index });
            }
            bucket.push(index);
        }
        Ok(TrainingSet { cases, kinds, schema })
    }

    pub fn cases(&self) -> &[Case<S>] {
        &self.cases
    }

    /// Sample size `m`.
    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Feature dimension `n`.
    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn kinds(&self) -> &[ValueKind] {
        &self.kinds
    }

    pub fn schema(&self) -> Option<&Schema> {
        self.schema.as_ref()
    }

    pub fn feedbacks(&self) -> impl Iterator<Item = &S> + '_ {
        self.cases.iter().map(|c| &c.y)
    }

    /// Fails with `FeedbackOutOfDomain` on the first case outside `domain`.
    pub fn check_feedback(&self, domain: FeedbackDomain) -> Result<()> {
        match self.cases.iter().position(|c| !domain.contains(&c.y)) {
            None => Ok(()),
            Some(index) => Err(Error::FeedbackOutOfDomain {
                index,
                value: self.cases[index].y.to_string(),
                domain: domain.to_string(),
            }),
        }
    }

    /// Explicit relabelling between the two binary encodings
    /// (0 <-> -1, 1 <-> 1). Real-valued domains are rejected.
    pub fn recode(&self, from: FeedbackDomain, to: FeedbackDomain) -> Result<Self> {
        self.check_feedback(from)?;
        let negative = match to {
            FeedbackDomain::ZeroOne => S::zero(),
            FeedbackDomain::MinusPlusOne => -S::one(),
            FeedbackDomain::Real => {
                return Err(Error::InvalidParameter {
                    name: "feedback",
                    reason: "recoding targets a binary domain".into(),
                })
            }
        };
        if from == FeedbackDomain::Real {
            return Err(Error::InvalidParameter {
                name: "feedback",
                reason: "recoding starts from a binary domain".into(),
            });
        }
        let cases = self
            .cases
            .iter()
            .map(|c| {
                let y = if c.y == S::one() { S::one() } else { negative.clone() };
                Case::new(c.x.clone(), y)
            })
            .collect();
        Ok(TrainingSet {
            cases,
            kinds: self.kinds.clone(),
            schema: self.schema.clone(),
        })
    }
}

/// Descriptor of the feedback domain Y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackDomain {
    Real,
    /// `{0, 1}`, used by k-NN, decision trees and Naive Bayes.
    ZeroOne,
    /// `{-1, 1}`, used by the linear SVM.
    MinusPlusOne,
}

impl FeedbackDomain {
    pub fn contains<S: Scalar>(&self, y: &S) -> bool {
        match self {
            FeedbackDomain::Real => y.is_finite_value(),
            FeedbackDomain::ZeroOne => y.is_zero() || y.is_one(),
            FeedbackDomain::MinusPlusOne => y.is_one() || *y == -S::one(),
        }
    }
}

impl fmt::Display for FeedbackDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeedbackDomain::Real => "R",
            FeedbackDomain::ZeroOne => "{0, 1}",
            FeedbackDomain::MinusPlusOne => "{-1, 1}",
        })
    }
}

/// Origin of a set of cases: the training set or a hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    FromTraining,
    FromHypothesis,
}

impl Provenance {
    pub fn opposite(self) -> Self {
        match self {
            Provenance::FromTraining => Provenance::FromHypothesis,
            Provenance::FromHypothesis => Provenance::FromTraining,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(x: f64, y: f64) -> Case<f64> {
        Case::new(FeatureVector::from_f64s(&[x]), y)
    }

    #[test]
    fn distinct_points_validate() {
        let t = validate_training_set(vec![case(0.0, 1.0), case(1.0, 0.0)]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.cases()[1].y, 0.0);
    }

    #[test]
    fn duplicate_feature_vector_rejected() {
        let err = validate_training_set(vec![case(0.0, 1.0), case(0.0, 0.0)]).unwrap_err();
        assert_eq!(err, Error::DuplicateFeatureVector { first: 0, second: 1 });
        let err = validate_training_set(vec![case(0.0, 1.0), case(-0.0, 0.0)]).unwrap_err();
        assert_eq!(err, Error::DuplicateFeatureVector { first: 0, second: 1 });
    }

    #[test]
    fn empty_set_rejected() {
        assert_eq!(validate_training_set::<f64>(vec![]).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn heterogeneous_vectors_rejected() {
        let mixed = vec![
            case(0.0, 1.0),
            Case::new(FeatureVector::ordinal([1]), 0.0),
        ];
        assert!(matches!(validate_training_set(mixed), Err(Error::SchemaMismatch { index: 1, .. })));
        let dims = vec![case(0.0, 1.0), Case::new(FeatureVector::from_f64s(&[1.0, 2.0]), 0.0)];
        assert!(matches!(validate_training_set(dims), Err(Error::SchemaMismatch { index: 1, .. })));
        let nan = vec![case(f64::NAN, 1.0)];
        assert!(matches!(validate_training_set(nan), Err(Error::SchemaMismatch { index: 0, .. })));
    }

    #[test]
    fn component_access_is_one_based() {
        let x = FeatureVector::<f64>::from_f64s(&[4.0, 5.0]);
        assert_eq!(x.component(1), Some(&FeatureValue::Numeric(4.0)));
        assert_eq!(x.component(2), Some(&FeatureValue::Numeric(5.0)));
        assert_eq!(x.component(0), None);
        assert_eq!(x.component(3), None);
    }

    #[test]
    fn schema_checks_value_sets() {
        let schema = Schema::new(vec![
            FeatureSpec { name: "size".into(), kind: FeatureKind::Ordinal { levels: vec!["s".into(), "m".into()] } },
            FeatureSpec { name: "color".into(), kind: FeatureKind::Nominal { symbols: vec!["red".into()] } },
        ]);
        let ok = FeatureVector::<f64>::new(vec![FeatureValue::Ordinal(1), FeatureValue::Nominal("red".into())]);
        assert!(schema.check(&ok).is_ok());
        let rank = FeatureVector::<f64>::new(vec![FeatureValue::Ordinal(2), FeatureValue::Nominal("red".into())]);
        assert!(schema.check(&rank).is_err());
        let sym = FeatureVector::<f64>::new(vec![FeatureValue::Ordinal(0), FeatureValue::Nominal("blue".into())]);
        assert!(TrainingSet::with_schema(vec![Case::new(sym, 1.0)], schema).is_err());
    }

    #[test]
    fn overlapping_nominal_sets_detected() {
        let schema = Schema::new(vec![
            FeatureSpec { name: "f1".into(), kind: FeatureKind::Nominal { symbols: vec!["a".into()] } },
            FeatureSpec { name: "f2".into(), kind: FeatureKind::Nominal { symbols: vec!["a".into()] } },
        ]);
        assert_eq!(
            schema.check_disjoint_nominals(),
            Err(Error::NonDisjointValueSets { symbol: "a".into(), first: 1, second: 2 })
        );
    }

    #[test]
    fn recoding_is_explicit() {
        let t = TrainingSet::new(vec![case(0.0, 0.0), case(1.0, 1.0)]).unwrap();
        let pm = t.recode(FeedbackDomain::ZeroOne, FeedbackDomain::MinusPlusOne).unwrap();
        assert_eq!(pm.feedbacks().copied().collect::<Vec<_>>(), vec![-1.0, 1.0]);
        assert!(pm.check_feedback(FeedbackDomain::ZeroOne).is_err());
        let back = pm.recode(FeedbackDomain::MinusPlusOne, FeedbackDomain::ZeroOne).unwrap();
        assert_eq!(back, t);
    }
}
