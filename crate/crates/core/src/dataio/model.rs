//! Versioned JSON model files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::{Metric, TreePartition};
use crate::paradigm::{Family, FeatureSpec, FeatureVector, LinearHypothesis, Param, ProblemStatement};

pub const MODEL_FORMAT: &str = "plearn-model";
pub const MODEL_VERSION: u32 = 1;

/// Learner parameters other than the query point.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metric: Option<Metric>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_leaf: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub purity: Option<f64>,
}

impl ModelParams {
    pub fn to_params(&self, x0: Option<FeatureVector<f64>>) -> Vec<Param<f64>> {
        let mut out = Vec::new();
        out.extend(x0.map(Param::X0));
        out.extend(self.k.map(Param::K));
        out.extend(self.radius.map(Param::Radius));
        out.extend(self.metric.map(Param::Metric));
        out.extend(self.w.map(Param::W));
        out.extend(self.epsilon.map(Param::Epsilon));
        out.extend(self.lambda.map(Param::Lambda));
        out.extend(self.max_depth.map(Param::MaxDepth));
        out.extend(self.min_leaf.map(Param::MinLeaf));
        out.extend(self.purity.map(Param::Purity));
        out
    }

    /// Problem statement for `family` at `x0`.
    pub fn problem(&self, family: Family, x0: Option<FeatureVector<f64>>) -> Result<ProblemStatement<f64>> {
        ProblemStatement::new(family, self.to_params(x0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Payload {
    Linear { b: Vec<f64>, a: f64 },
    Tree { tree: TreePartition },
    /// Query-time learners keep nothing beyond their parameters.
    None,
}

impl Payload {
    pub fn linear(f: &LinearHypothesis<f64>) -> Self {
        Payload::Linear { b: f.b.clone(), a: f.a }
    }

    pub fn as_linear(&self) -> Option<LinearHypothesis<f64>> {
        match self {
            Payload::Linear { b, a } => Some(LinearHypothesis::new(b.clone(), *a)),
            _ => None,
        }
    }
}

/// Identifies the data a model was trained on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataRef {
    pub sha256: String,
    pub rows: usize,
    pub target: String,
    pub features: Vec<FeatureSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub family: Family,
    pub params: ModelParams,
    pub payload: Payload,
    pub data: DataRef,
    /// Total inconsistency reported at training time.
    pub total_inconsistency: f64,
}

impl ModelFile {
    pub fn new(family: Family, params: ModelParams, payload: Payload, data: DataRef, total: f64) -> Self {
        ModelFile {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            family,
            params,
            payload,
            data,
            total_inconsistency: total,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::ModelFormat { detail: e.to_string() })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // Look at the envelope first so that a newer file is reported as
        // such rather than as a field mismatch.
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::ModelFormat { detail: e.to_string() })?;
        if value.get("format").and_then(|v| v.as_str()) != Some(MODEL_FORMAT) {
            return Err(Error::ModelFormat { detail: format!("missing `\"format\": \"{MODEL_FORMAT}\"`") });
        }
        let version = value
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::ModelFormat { detail: "missing version".into() })?;
        if version != u64::from(MODEL_VERSION) {
            return Err(Error::UnsupportedVersion { found: version as u32, supported: MODEL_VERSION });
        }
        let model: ModelFile = serde_json::from_value(value).map_err(|e| Error::ModelFormat { detail: e.to_string() })?;
        let consistent = match (&model.payload, model.family) {
            (Payload::Linear { b, .. }, Family::Svm | Family::Svr | Family::Erm) => b.len() == model.data.features.len(),
            (Payload::Tree { tree }, Family::Dtree) => tree.n_features == model.data.features.len(),
            (Payload::None, f) => f.is_pointwise() && f != Family::Dtree,
            _ => false,
        };
        if !consistent {
            return Err(Error::ModelFormat { detail: format!("payload does not fit learner `{}`", model.family) });
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")
            .map_err(|e| Error::Io { path: path.display().to_string(), detail: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&super::dataset::read_text(path)?)
    }
}
