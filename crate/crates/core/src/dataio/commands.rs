//! Training, prediction and audits over files, as run by the CLI.

use serde::Serialize;

use crate::dataio::dataset::Dataset;
use crate::dataio::model::{DataRef, ModelFile, ModelParams, Payload};
use crate::error::{Error, Result};
use crate::linear::SolverConfig;
use crate::local::{dtree_build, DecisionTree, TreePartition};
use crate::paradigm::{
    select_hypothesis, Aggregation, Family, FeatureVector, Hypothesis, InconsistencyReport, Paradigm, TrainingSet,
};

/// Learner at `x0`; a decision tree reuses `tree` instead of regrowing.
fn learner_at(
    family: Family,
    params: &ModelParams,
    x0: Option<FeatureVector<f64>>,
    t: &TrainingSet<f64>,
    tree: Option<&TreePartition>,
    solver: &SolverConfig<f64>,
) -> Result<(crate::ProblemStatement64, Box<dyn Paradigm<f64>>)> {
    let problem = params.problem(family, x0.clone())?;
    let learner: Box<dyn Paradigm<f64>> = match (family, tree, x0) {
        (Family::Dtree, Some(tree), Some(x0)) => Box::new(DecisionTree { x0, partition: tree.clone() }),
        _ => crate::instantiate(&problem, t, solver)?,
    };
    Ok((problem, learner))
}

fn data_ref(data: &Dataset) -> DataRef {
    DataRef {
        sha256: data.sha256.clone(),
        rows: data.set.len(),
        target: data.target.clone(),
        features: data.schema.features.clone(),
    }
}

/// Fits `family` on `data`. Linear learners are solved here; query-time
/// learners are validated and their total is the self-audit total.
pub fn train(family: Family, params: ModelParams, data: &Dataset, solver: &SolverConfig<f64>) -> Result<ModelFile> {
    if family == Family::Erm {
        return Err(Error::InvalidParameter { name: "learner", reason: "erm is not a trainable learner".into() });
    }
    let probe = family.is_pointwise().then(|| data.set.cases()[0].x.clone());
    let problem = params.problem(family, probe)?;
    data.set.check_feedback(family.feedback_domain())?;
    let (payload, tree) = match family {
        Family::Svm | Family::Svr => {
            let learner = crate::instantiate(&problem, &data.set, solver)?;
            let selection = select_hypothesis(learner.as_ref(), &problem, &data.set)?;
            let f = selection.hypothesis.as_linear().cloned().expect("linear learner returns a linear hypothesis");
            let model = ModelFile::new(family, params, Payload::linear(&f), data_ref(data), selection.report.total);
            return Ok(model);
        }
        Family::Dtree => {
            let tree = dtree_build(&data.set, &problem.tree_config())?;
            (Payload::Tree { tree: tree.clone() }, Some(tree))
        }
        _ => (Payload::None, None),
    };
    let mut model = ModelFile::new(family, params, payload, data_ref(data), 0.0);
    model.total_inconsistency = self_audit(&model, data, tree.as_ref(), solver)?.total;
    Ok(model)
}

fn check_features(model: &ModelFile, data: &Dataset) -> Result<()> {
    if model.data.features != data.schema.features {
        return Err(Error::DataMismatch { detail: "feature columns differ from the model's".into() });
    }
    Ok(())
}

fn check_same_data(model: &ModelFile, data: &Dataset) -> Result<()> {
    check_features(model, data)?;
    if model.data.sha256 != data.sha256 {
        return Err(Error::DataMismatch { detail: "content hash differs from the training data".into() });
    }
    Ok(())
}

fn tree_of(model: &ModelFile) -> Option<&TreePartition> {
    match &model.payload {
        Payload::Tree { tree } => Some(tree),
        _ => None,
    }
}

/// One prediction per query, in order. Query-time learners need the
/// training data in `data`.
pub fn predict(
    model: &ModelFile,
    data: Option<&Dataset>,
    queries: &[FeatureVector<f64>],
    solver: &SolverConfig<f64>,
) -> Result<Vec<f64>> {
    if let Some(f) = model.payload.as_linear() {
        return queries.iter().map(|x| f.evaluate(x)).collect();
    }
    let data = data.ok_or_else(|| Error::DataMismatch { detail: "this learner needs its training data (--data)".into() })?;
    check_same_data(model, data)?;
    queries
        .iter()
        .map(|x0| {
            let (problem, learner) =
                learner_at(model.family, &model.params, Some(x0.clone()), &data.set, tree_of(model), solver)?;
            let selection = select_hypothesis(learner.as_ref(), &problem, &data.set)?;
            Ok(selection.hypothesis.pointwise_value().copied().unwrap_or_default())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    /// 1-based position of the case in the data.
    pub index: usize,
    /// Line in the data file.
    pub line: usize,
    pub x: Vec<String>,
    pub y: f64,
    pub mu: f64,
    /// Number of counterparts; absent when the set is infinite or the case
    /// has several baseline cases.
    pub counterparts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub family: Family,
    pub hypothesis: String,
    pub aggregation: &'static str,
    /// Hypothesis-only term of a regularized total.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalty: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<f64>,
    pub total: f64,
    /// Sorted by decreasing `mu`, then by index.
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    fn from_rows(
        family: Family,
        hypothesis: String,
        aggregation: &Aggregation<f64>,
        total: f64,
        mut rows: Vec<AuditRow>,
    ) -> Self {
        rows.sort_by(|a, b| b.mu.total_cmp(&a.mu).then(a.index.cmp(&b.index)));
        let (penalty, divisor) = match aggregation {
            Aggregation::Regularized { penalty, divisor } => (Some(*penalty), Some(*divisor)),
            _ => (None, None),
        };
        AuditReport { family, hypothesis, aggregation: aggregation.name(), penalty, divisor, total, rows }
    }

    /// Recombines the `mu` column in index order with the learner's rule.
    pub fn reaggregate(&self) -> f64 {
        let mut rows: Vec<&AuditRow> = self.rows.iter().collect();
        rows.sort_by_key(|r| r.index);
        let mus: Vec<f64> = rows.iter().map(|r| r.mu).collect();
        let aggregation = match (self.aggregation, self.penalty, self.divisor) {
            ("product", _, _) => Aggregation::Product,
            (_, Some(penalty), Some(divisor)) => Aggregation::Regularized { penalty, divisor },
            _ => Aggregation::Sum,
        };
        aggregation.apply(&mus)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::ModelFormat { detail: e.to_string() })
    }
}

fn row(data: &Dataset, i: usize, mu: f64, counterparts: Option<usize>) -> AuditRow {
    let case = &data.set.cases()[i];
    let x = case
        .x
        .values()
        .iter()
        .zip(&data.schema.features)
        .map(|(v, spec)| match (v, &spec.kind) {
            (crate::paradigm::FeatureValue::Ordinal(r), crate::paradigm::FeatureKind::Ordinal { levels }) => {
                levels[*r].clone()
            }
            _ => v.to_string(),
        })
        .collect();
    AuditRow { index: i + 1, line: data.lines[i], x, y: case.y, mu, counterparts }
}

fn linear_report(model: &ModelFile, data: &Dataset, solver: &SolverConfig<f64>) -> Result<InconsistencyReport<f64>> {
    let f = model.payload.as_linear().expect("checked by caller");
    let (_, learner) = learner_at(model.family, &model.params, None, &data.set, None, solver)?;
    learner.report(&Hypothesis::Linear(f), &data.set)
}

/// Query-time learners: every case is scored as the hypothesis
/// `h(x_i) = y_i` of the learner placed at `x_i`; the total is the sum.
fn self_audit(
    model: &ModelFile,
    data: &Dataset,
    tree: Option<&TreePartition>,
    solver: &SolverConfig<f64>,
) -> Result<AuditReport> {
    let mut rows = Vec::with_capacity(data.set.len());
    for (i, case) in data.set.cases().iter().enumerate() {
        let (_, learner) = learner_at(model.family, &model.params, Some(case.x.clone()), &data.set, tree, solver)?;
        let h = Hypothesis::pointwise(case.x.clone(), case.y);
        let report = learner.report(&h, &data.set)?;
        let counterparts = match report.entries.as_slice() {
            [only] => only.counterparts,
            _ => None,
        };
        rows.push(row(data, i, report.total, counterparts));
    }
    let total = Aggregation::Sum.apply(rows.iter().map(|r| &r.mu));
    Ok(AuditReport::from_rows(model.family, "h(x_i) = y_i at every case".into(), &Aggregation::Sum, total, rows))
}

/// Per-case inconsistencies of `model` on `data`, largest first.
pub fn audit(model: &ModelFile, data: &Dataset, solver: &SolverConfig<f64>) -> Result<AuditReport> {
    check_features(model, data)?;
    data.set.check_feedback(model.family.feedback_domain())?;
    if model.payload.as_linear().is_some() {
        let report = linear_report(model, data, solver)?;
        let rows = report.entries.iter().enumerate().map(|(i, e)| row(data, i, e.mu, e.counterparts)).collect();
        return Ok(AuditReport::from_rows(
            model.family,
            report.hypothesis.to_string(),
            &report.aggregation,
            report.total,
            rows,
        ));
    }
    check_same_data(model, data)?;
    self_audit(model, data, tree_of(model), solver)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::dataset::{parse_dataset, ColumnKinds};

    fn data(text: &str) -> Dataset {
        parse_dataset(text, None, &ColumnKinds::default()).unwrap()
    }

    #[test]
    fn svm_train_then_audit_reproduces_total() {
        let d = data("x,y\n-1,-1\n1,1\n0.5,-1\n2,1\n");
        let params = ModelParams { w: Some(0.01), ..Default::default() };
        let model = train(Family::Svm, params, &d, &SolverConfig::default()).unwrap();
        let back = ModelFile::from_json(&model.to_json().unwrap()).unwrap();
        let report = audit(&back, &d, &SolverConfig::default()).unwrap();
        assert_eq!(report.total.to_bits(), model.total_inconsistency.to_bits());
        assert_eq!(report.reaggregate(), report.total);
        assert!(report.rows.windows(2).all(|w| w[0].mu >= w[1].mu));
    }

    #[test]
    fn knn_predict_needs_matching_data() {
        let d = data("x,y\n0,0\n1,1\n3,1\n");
        let model = train(Family::Knn, ModelParams { k: Some(1), ..Default::default() }, &d, &SolverConfig::default()).unwrap();
        let q = vec![FeatureVector::from_f64s(&[1.0]), FeatureVector::from_f64s(&[0.1])];
        assert_eq!(predict(&model, Some(&d), &q, &SolverConfig::default()).unwrap(), vec![1.0, 0.0]);
        let other = data("x,y\n0,0\n1,1\n4,1\n");
        assert!(matches!(predict(&model, Some(&other), &q, &SolverConfig::default()), Err(Error::DataMismatch { .. })));
        assert!(matches!(predict(&model, None, &q, &SolverConfig::default()), Err(Error::DataMismatch { .. })));
    }

    #[test]
    fn zero_k_is_a_usage_error() {
        let d = data("x,y\n0,0\n1,1\n");
        let err = train(Family::Knn, ModelParams { k: Some(0), ..Default::default() }, &d, &SolverConfig::default()).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn linear_prediction_is_the_raw_value() {
        let d = data("x,y\n0,0\n1,1\n");
        let model = ModelFile::new(
            Family::Svr,
            ModelParams { epsilon: Some(0.0), lambda: Some(0.0), ..Default::default() },
            Payload::Linear { b: vec![1.0], a: 0.0 },
            data_ref(&d),
            0.0,
        );
        let out = predict(&model, None, &[FeatureVector::from_f64s(&[2.0])], &SolverConfig::default()).unwrap();
        assert_eq!(out, vec![2.0]);
    }
}
