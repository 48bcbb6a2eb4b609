use std::collections::BTreeMap;

use proptest::prelude::*;

use plearn::linear::{Svm, SvmParams, Svr, SvrParams, SolverConfig};
use plearn::local::{
    smoothing_case_inconsistency, smoothing_counterparts, DecisionTree, KNearestNeighbors, Metric, NaiveBayes,
    NeighborhoodSpec, Smoothing, TreeConfig,
};
use plearn::paradigm::{
    erm_total_inconsistency, select_hypothesis, Aggregation, Case, Erm, Family, FeatureVector, Hypothesis,
    LinearHypothesis, Param, Paradigm, ProblemStatement, TrainingSet,
};

/// Distinct points keyed by their coordinates; later duplicates are dropped.
fn dedup<K: Ord, V>(rows: Vec<(K, V)>) -> Vec<(K, V)> {
    let mut seen = BTreeMap::new();
    for (k, v) in rows {
        seen.entry(k).or_insert(v);
    }
    seen.into_iter().collect()
}

fn numeric_set(rows: Vec<((i32, i32), bool)>, pm: bool) -> TrainingSet<f64> {
    let cases = dedup(rows)
        .into_iter()
        .map(|((a, b), y)| {
            let y = match (y, pm) {
                (true, _) => 1.0,
                (false, true) => -1.0,
                (false, false) => 0.0,
            };
            Case::new(FeatureVector::from_f64s(&[a as f64 / 4.0, b as f64 / 4.0]), y)
        })
        .collect();
    TrainingSet::new(cases).unwrap()
}

fn rows() -> impl Strategy<Value = Vec<((i32, i32), bool)>> {
    prop::collection::vec(((-12i32..12, -12i32..12), any::<bool>()), 1..25)
}

fn linear() -> impl Strategy<Value = LinearHypothesis<f64>> {
    (-8i32..8, -8i32..8, -8i32..8).prop_map(|(b1, b2, a)| LinearHypothesis::from_f64s(&[b1 as f64 / 4.0, b2 as f64 / 4.0], a as f64 / 4.0))
}

fn query() -> impl Strategy<Value = FeatureVector<f64>> {
    (-12i32..12, -12i32..12).prop_map(|(a, b)| FeatureVector::from_f64s(&[a as f64 / 4.0, b as f64 / 4.0]))
}

/// Every baseline case's counterparts come from the other source, and every
/// case inconsistency is non-negative.
fn check_report<L: Paradigm<f64>>(learner: &L, f: &Hypothesis<f64>, t: &TrainingSet<f64>) -> Result<(), TestCaseError> {
    let baseline = learner.baseline(f, t).unwrap();
    for alpha in &baseline.cases {
        let c = learner.counterparts(alpha, f, t).unwrap();
        prop_assert_ne!(c.provenance, baseline.provenance);
        let mu = learner.case_inconsistency(alpha, &c, f).unwrap();
        prop_assert!(mu >= 0.0, "mu = {}", mu);
    }
    let report = learner.report(f, t).unwrap();
    prop_assert_eq!(report.total.to_bits(), report.reaggregate().to_bits());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn linear_learners_oppose_provenance(rows in rows(), f in linear(), w in 1u8..8, eps in 0u8..4, lambda in 0u8..4) {
        let svm_t = numeric_set(rows.clone(), true);
        let reg_t = numeric_set(rows, false);
        let h = Hypothesis::Linear(f);
        let svm = Svm { params: SvmParams::new(w as f64 / 4.0).unwrap(), solver: SolverConfig::default() };
        check_report(&svm, &h, &svm_t)?;
        let svr = Svr { params: SvrParams::new(eps as f64 / 4.0, lambda as f64 / 4.0).unwrap(), solver: SolverConfig::default() };
        check_report(&svr, &h, &reg_t)?;
        check_report(&Erm::default(), &h, &reg_t)?;
    }

    #[test]
    fn local_learners_oppose_provenance(rows in rows(), x0 in query(), k in 1usize..6, label in any::<bool>()) {
        let t = numeric_set(rows, false);
        let h = Hypothesis::pointwise(x0.clone(), if label { 1.0 } else { 0.0 });
        let spec = NeighborhoodSpec::k_nearest(k.min(t.len()), Metric::Euclidean);
        check_report(&Smoothing { x0: x0.clone(), spec }, &h, &t)?;
        check_report(&KNearestNeighbors { x0: x0.clone(), k: k.min(t.len()), metric: Metric::Manhattan }, &h, &t)?;
    }

    #[test]
    fn plain_svr_matches_erm(rows in rows(), f in linear()) {
        let t = numeric_set(rows, false);
        let h = Hypothesis::Linear(f);
        let svr = Svr { params: SvrParams::new(0.0, 0.0).unwrap(), solver: SolverConfig::default() };
        let total = svr.report(&h, &t).unwrap().total;
        prop_assert!((total - erm_total_inconsistency(&h, &t).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn aggregation_is_monotone(mus in prop::collection::vec(0u16..400, 1..12), at in any::<prop::sample::Index>(), bump in 1u16..50, divisor in 1u8..20) {
        let mus: Vec<f64> = mus.into_iter().map(|m| m as f64 / 16.0).collect();
        let mut raised = mus.clone();
        let i = at.index(mus.len());
        raised[i] += bump as f64 / 16.0;
        for agg in [Aggregation::Sum, Aggregation::Product, Aggregation::Regularized { penalty: 0.5, divisor: divisor as f64 }] {
            prop_assert!(agg.apply(&raised) >= agg.apply(&mus), "{}", agg.name());
        }
    }

    #[test]
    fn selection_is_first_minimum(rows in rows(), x0 in query(), k in 1usize..6) {
        let t = numeric_set(rows, false);
        let k = k.min(t.len());
        let problem = ProblemStatement::new(Family::Knn, vec![Param::X0(x0.clone()), Param::K(k)]).unwrap();
        let sel = select_hypothesis(&KNearestNeighbors { x0, k, metric: Metric::Euclidean }, &problem, &t).unwrap();
        let min = sel.candidate_totals.iter().cloned().fold(f64::INFINITY, f64::min);
        let first = sel.candidate_totals.iter().position(|&v| v == min).unwrap();
        prop_assert_eq!(sel.report.total, min);
        prop_assert_eq!(sel.hypothesis.pointwise_value().cloned(), Some(first as f64));
    }

    #[test]
    fn smoothing_mean_is_optimal(rows in rows(), x0 in query(), k in 1usize..6, c in -20i32..20) {
        let t = numeric_set(rows, false);
        let spec = NeighborhoodSpec::k_nearest(k.min(t.len()), Metric::Euclidean);
        let problem = ProblemStatement::new(Family::Smoothing, vec![Param::X0(x0.clone()), Param::K(k.min(t.len()))]).unwrap();
        let sel = select_hypothesis(&Smoothing { x0: x0.clone(), spec: spec.clone() }, &problem, &t).unwrap();
        let counterparts = smoothing_counterparts(&x0, &t, &spec).unwrap();
        let other = smoothing_case_inconsistency(&(c as f64 / 8.0), &counterparts).unwrap();
        prop_assert!(sel.report.total <= other + 1e-12);
    }

    #[test]
    fn tree_partition_covers_every_point(ranks in prop::collection::vec(((0usize..5, 0usize..4), any::<bool>()), 1..20), probe in (0usize..5, 0usize..4), depth in 1usize..5) {
        let cases: Vec<Case<f64>> = dedup(ranks)
            .into_iter()
            .map(|((a, b), y)| Case::new(FeatureVector::ordinal([a, b]), if y { 1.0 } else { 0.0 }))
            .collect();
        let t = TrainingSet::new(cases).unwrap();
        let cfg = TreeConfig { max_depth: depth, ..TreeConfig::default() };
        let x0 = FeatureVector::ordinal([probe.0, probe.1]);
        let tree = DecisionTree::fit(x0.clone(), &t, &cfg).unwrap();
        let point = [probe.0, probe.1];
        prop_assert_eq!(tree.partition.leaves().iter().filter(|l| l.contains(&point)).count(), 1);
        for case in t.cases() {
            let r = case.x.to_ranks().unwrap();
            prop_assert_eq!(tree.partition.leaves().iter().filter(|l| l.contains(&r)).count(), 1);
        }
        let h = Hypothesis::pointwise(x0, 1.0);
        check_report(&tree, &h, &t)?;
    }

    #[test]
    fn naive_bayes_opposes_provenance(rows in prop::collection::vec(((0usize..3, 0usize..3), any::<bool>()), 1..9), probe in (0usize..3, 0usize..3), label in any::<bool>()) {
        let nominal = |(a, b): (usize, usize)| FeatureVector::nominal([format!("f0_{a}"), format!("f1_{b}")]);
        let cases: Vec<Case<f64>> = dedup(rows).into_iter().map(|(x, y)| Case::new(nominal(x), if y { 1.0 } else { 0.0 })).collect();
        let t = TrainingSet::new(cases).unwrap();
        let x0 = nominal(probe);
        let h = Hypothesis::pointwise(x0.clone(), if label { 1.0 } else { 0.0 });
        check_report(&NaiveBayes { x0 }, &h, &t)?;
    }
}
