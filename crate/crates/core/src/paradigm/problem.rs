use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::{Metric, NeighborhoodSpec, TreeConfig};
use crate::paradigm::domain::{FeatureVector, FeedbackDomain, Schema};
use crate::scalar::Scalar;

/// Identifier of a hypothesis class together with the learner that searches
/// it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Erm,
    Smoothing,
    Knn,
    Dtree,
    Nb,
    Svm,
    Svr,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Erm,
        Family::Smoothing,
        Family::Knn,
        Family::Dtree,
        Family::Nb,
        Family::Svm,
        Family::Svr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Erm => "erm",
            Family::Smoothing => "smoothing",
            Family::Knn => "knn",
            Family::Dtree => "dtree",
            Family::Nb => "nb",
            Family::Svm => "svm",
            Family::Svr => "svr",
        }
    }

    /// Feedback encoding the family is defined over.
    pub fn feedback_domain(self) -> FeedbackDomain {
        match self {
            Family::Erm | Family::Smoothing | Family::Svr => FeedbackDomain::Real,
            Family::Knn | Family::Dtree | Family::Nb => FeedbackDomain::ZeroOne,
            Family::Svm => FeedbackDomain::MinusPlusOne,
        }
    }

    /// Query-time learners define hypotheses only at a single point.
    pub fn is_pointwise(self) -> bool {
        matches!(self, Family::Smoothing | Family::Knn | Family::Dtree | Family::Nb)
    }

    fn required(self) -> &'static [ParamName] {
        use ParamName::*;
        match self {
            Family::Erm => &[],
            Family::Smoothing => &[X0],
            Family::Knn => &[X0, K],
            Family::Dtree => &[X0],
            Family::Nb => &[X0],
            Family::Svm => &[W],
            Family::Svr => &[Epsilon, Lambda],
        }
    }

    fn optional(self) -> &'static [ParamName] {
        use ParamName::*;
        match self {
            Family::Smoothing => &[K, Radius, Metric],
            Family::Knn => &[Metric],
            Family::Dtree => &[MaxDepth, MinLeaf, Purity],
            _ => &[],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown learner `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ParamName {
    X0,
    K,
    Radius,
    Metric,
    W,
    Epsilon,
    Lambda,
    MaxDepth,
    MinLeaf,
    Purity,
}

impl ParamName {
    fn as_str(self) -> &'static str {
        match self {
            ParamName::X0 => "x0",
            ParamName::K => "k",
            ParamName::Radius => "radius",
            ParamName::Metric => "metric",
            ParamName::W => "w",
            ParamName::Epsilon => "epsilon",
            ParamName::Lambda => "lambda",
            ParamName::MaxDepth => "max_depth",
            ParamName::MinLeaf => "min_leaf",
            ParamName::Purity => "purity",
        }
    }
}

/// One entry of the parameter vector `v`.
#[derive(Debug, Clone, PartialEq)]
pub enum Param<S> {
    X0(FeatureVector<S>),
    K(usize),
    Radius(S),
    Metric(Metric),
    W(S),
    Epsilon(S),
    Lambda(S),
    MaxDepth(usize),
    MinLeaf(usize),
    Purity(S),
}

impl<S> Param<S> {
    fn name(&self) -> ParamName {
        match self {
            Param::X0(_) => ParamName::X0,
            Param::K(_) => ParamName::K,
            Param::Radius(_) => ParamName::Radius,
            Param::Metric(_) => ParamName::Metric,
            Param::W(_) => ParamName::W,
            Param::Epsilon(_) => ParamName::Epsilon,
            Param::Lambda(_) => ParamName::Lambda,
            Param::MaxDepth(_) => ParamName::MaxDepth,
            Param::MinLeaf(_) => ParamName::MinLeaf,
            Param::Purity(_) => ParamName::Purity,
        }
    }
}

/// Validated parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<S> {
    pub x0: Option<FeatureVector<S>>,
    pub k: Option<usize>,
    pub radius: Option<S>,
    pub metric: Option<Metric>,
    pub w: Option<S>,
    pub epsilon: Option<S>,
    pub lambda: Option<S>,
    pub max_depth: Option<usize>,
    pub min_leaf: Option<usize>,
    pub purity: Option<S>,
}

impl<S> Default for Params<S> {
    fn default() -> Self {
        Params {
            x0: None,
            k: None,
            radius: None,
            metric: None,
            w: None,
            epsilon: None,
            lambda: None,
            max_depth: None,
            min_leaf: None,
            purity: None,
        }
    }
}

/// The problem statement `{X, Y, F, v}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemStatement<S> {
    pub x_schema: Option<Schema>,
    pub y_domain: FeedbackDomain,
    pub family: Family,
    pub params: Params<S>,
}

fn invalid(name: ParamName, reason: &str) -> Error {
    Error::InvalidParameter { name: name.as_str(), reason: reason.to_string() }
}

impl<S: Scalar> ProblemStatement<S> {
    /// Validates `params` against what `family` requires and accepts.
    pub fn new(family: Family, params: Vec<Param<S>>) -> Result<Self> {
        let mut v = Params::default();
        let mut given: Vec<ParamName> = Vec::new();
        for p in params {
            let name = p.name();
            if given.contains(&name) {
                return Err(Error::DuplicateParameter { name: name.as_str() });
            }
            if !family.required().contains(&name) && !family.optional().contains(&name) {
                return Err(Error::UnknownParameter { family, name: name.as_str() });
            }
            given.push(name);
            match p {
                Param::X0(x) => v.x0 = Some(x),
                Param::K(k) => {
                    if k == 0 {
                        return Err(invalid(name, "must be positive"));
                    }
                    v.k = Some(k);
                }
                Param::Radius(r) => {
                    if r <= S::zero() {
                        return Err(invalid(name, "must be positive"));
                    }
                    v.radius = Some(r);
                }
                Param::Metric(m) => v.metric = Some(m),
                Param::W(w) => {
                    if w <= S::zero() || !w.is_finite_value() {
                        return Err(invalid(name, "must be positive"));
                    }
                    v.w = Some(w);
                }
                Param::Epsilon(e) => {
                    if e < S::zero() || !e.is_finite_value() {
                        return Err(invalid(name, "must be non-negative"));
                    }
                    v.epsilon = Some(e);
                }
                Param::Lambda(l) => {
                    if l < S::zero() || !l.is_finite_value() {
                        return Err(invalid(name, "must be non-negative"));
                    }
                    v.lambda = Some(l);
                }
                Param::MaxDepth(d) => {
                    if d == 0 {
                        return Err(invalid(name, "must be positive"));
                    }
                    v.max_depth = Some(d);
                }
                Param::MinLeaf(n) => {
                    if n == 0 {
                        return Err(invalid(name, "must be positive"));
                    }
                    v.min_leaf = Some(n);
                }
                Param::Purity(p) => {
                    let half = S::one() / (S::one() + S::one());
                    if p < S::zero() || p > half {
                        return Err(invalid(name, "must lie in [0, 0.5]"));
                    }
                    v.purity = Some(p);
                }
            }
        }
        if let Some(missing) = family.required().iter().find(|n| !given.contains(n)) {
            return Err(Error::MissingParameter { family, name: missing.as_str() });
        }
        if family == Family::Smoothing && v.k.is_some() == v.radius.is_some() {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "smoothing takes exactly one of k and radius".into(),
            });
        }
        Ok(ProblemStatement { x_schema: None, y_domain: family.feedback_domain(), family, params: v })
    }

    pub fn with_schema(mut self, schema: Schema) -> Self {
        self.x_schema = Some(schema);
        self
    }

    pub fn x0(&self) -> Option<&FeatureVector<S>> {
        self.params.x0.as_ref()
    }

    /// Neighborhood rule for smoothing and k-NN.
    pub fn neighborhood(&self) -> Option<NeighborhoodSpec<S>> {
        let metric = self.params.metric.unwrap_or_default();
        match (&self.params.k, &self.params.radius) {
            (Some(k), _) => Some(NeighborhoodSpec::k_nearest(*k, metric)),
            (None, Some(r)) => Some(NeighborhoodSpec::fixed_radius(r.clone(), metric)),
            (None, None) => None,
        }
    }

    pub fn tree_config(&self) -> TreeConfig<S> {
        let mut cfg = TreeConfig::default();
        if let Some(d) = self.params.max_depth {
            cfg.max_depth = d;
        }
        if let Some(n) = self.params.min_leaf {
            cfg.min_leaf_size = n;
        }
        if let Some(p) = &self.params.purity {
            cfg.purity_threshold = p.clone();
        }
        cfg
    }
}
