//! Binary partitioning of an ordinal feature domain.
//!
//! Each internal node tests one feature against a rank threshold
//! (`rank <= t` goes left). Splits maximise the size-weighted decrease of
//! the impurity `p (1 - p)`; candidate scores are compared as exact
//! rationals so ties resolve deterministically (lowest feature, then lowest
//! threshold).

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::smoothing::{pointwise_baseline, smoothing_case_inconsistency};
use crate::local::Prediction;
use crate::paradigm::{
    binary_candidates, select_hypothesis, Aggregation, Baseline, Case, CounterpartSet, Family, FeatureVector,
    FeedbackDomain, Hypothesis, Paradigm, Param, ProblemStatement, Search, TrainingSet,
};
use crate::scalar::Scalar;

/// Stopping controls for [`dtree_build`].
#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig<S> {
    pub max_depth: usize,
    pub min_leaf_size: usize,
    /// A node whose minority-label fraction is at most this becomes a leaf.
    pub purity_threshold: S,
}

impl<S: Scalar> Default for TreeConfig<S> {
    fn default() -> Self {
        TreeConfig { max_depth: 8, min_leaf_size: 1, purity_threshold: S::zero() }
    }
}

/// Why a node was not split further.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxDepth,
    TooFewCases,
    Pure,
    NoImprovingSplit,
}

/// Inclusive rank interval; `hi = None` is unbounded above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRange {
    pub lo: usize,
    pub hi: Option<usize>,
}

impl RankRange {
    pub const ALL: RankRange = RankRange { lo: 0, hi: None };

    pub fn contains(&self, rank: usize) -> bool {
        rank >= self.lo && self.hi.is_none_or(|hi| rank <= hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    pub id: usize,
    pub depth: usize,
    /// Indices into the training set the tree was built from.
    pub cases: Vec<usize>,
    /// Box of ranks this leaf covers, one range per feature.
    pub region: Vec<RankRange>,
    pub stop: StopReason,
}

impl Leaf {
    pub fn contains(&self, ranks: &[usize]) -> bool {
        ranks.len() == self.region.len() && ranks.iter().zip(&self.region).all(|(r, range)| range.contains(*r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        /// 1-based feature position.
        feature: usize,
        threshold: usize,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf(Leaf),
}

/// A built tree: a partition of the ordinal domain into leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreePartition {
    pub root: TreeNode,
    pub n_features: usize,
    pub sample_size: usize,
}

impl TreePartition {
    pub fn leaves(&self) -> Vec<&Leaf> {
        fn walk<'a>(node: &'a TreeNode, out: &mut Vec<&'a Leaf>) {
            match node {
                TreeNode::Leaf(leaf) => out.push(leaf),
                TreeNode::Split { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Leaf reached by following the split tests from the root.
    pub fn route_ranks(&self, ranks: &[usize]) -> Result<&Leaf> {
        if ranks.len() != self.n_features {
            return Err(Error::DimensionMismatch { expected: self.n_features, found: ranks.len() });
        }
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf(leaf) => return Ok(leaf),
                TreeNode::Split { feature, threshold, left, right } => {
                    node = if ranks[feature - 1] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn route<S: Scalar>(&self, x: &FeatureVector<S>) -> Result<&Leaf> {
        self.route_ranks(&x.to_ranks()?)
    }

    /// Internal nodes as `(feature, threshold, impurity decrease)`, with the
    /// decrease recomputed from the node's cases.
    pub fn split_gains<S: Scalar>(&self, t: &TrainingSet<S>) -> Result<Vec<(usize, usize, Ratio<i128>)>> {
        let rows = ordinal_rows(t)?;
        let labels = binary_labels(t)?;
        fn cases_under(node: &TreeNode) -> Vec<usize> {
            match node {
                TreeNode::Leaf(l) => l.cases.clone(),
                TreeNode::Split { left, right, .. } => {
                    let mut v = cases_under(left);
                    v.extend(cases_under(right));
                    v
                }
            }
        }
        fn walk(
            node: &TreeNode,
            rows: &[Vec<usize>],
            labels: &[bool],
            out: &mut Vec<(usize, usize, Ratio<i128>)>,
        ) {
            if let TreeNode::Split { feature, threshold, left, right } = node {
                let idx = cases_under(node);
                let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| rows[i][feature - 1] <= *threshold);
                out.push((*feature, *threshold, impurity_decrease(&idx, &l, &r, labels)));
                walk(left, rows, labels, out);
                walk(right, rows, labels, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &rows, &labels, &mut out);
        Ok(out)
    }
}

fn ordinal_rows<S: Scalar>(t: &TrainingSet<S>) -> Result<Vec<Vec<usize>>> {
    t.cases().iter().map(|c| c.x.to_ranks()).collect()
}

fn binary_labels<S: Scalar>(t: &TrainingSet<S>) -> Result<Vec<bool>> {
    t.check_feedback(FeedbackDomain::ZeroOne)?;
    Ok(t.cases().iter().map(|c| c.y.is_one()).collect())
}

fn count_ones(idx: &[usize], labels: &[bool]) -> i128 {
    idx.iter().filter(|&&i| labels[i]).count() as i128
}

/// Size-weighted decrease of `p (1 - p)` when `node` splits into `left`
/// and `right`, as an exact fraction.
fn impurity_decrease(node: &[usize], left: &[usize], right: &[usize], labels: &[bool]) -> Ratio<i128> {
    let weighted = |idx: &[usize], parent: i128| {
        // (|idx| / parent) * p (1 - p) with p = ones / |idx|
        let n = idx.len() as i128;
        let ones = count_ones(idx, labels);
        Ratio::new(ones * (n - ones), n * parent)
    };
    let n = node.len() as i128;
    weighted(node, n) - weighted(left, n) - weighted(right, n)
}

struct Builder<'a, S> {
    rows: &'a [Vec<usize>],
    labels: &'a [bool],
    cfg: &'a TreeConfig<S>,
    next_leaf: usize,
}

impl<S: Scalar> Builder<'_, S> {
    fn leaf(&mut self, cases: Vec<usize>, depth: usize, region: Vec<RankRange>, stop: StopReason) -> TreeNode {
        let id = self.next_leaf;
        self.next_leaf += 1;
        TreeNode::Leaf(Leaf { id, depth, cases, region, stop })
    }

    fn best_split(&self, cases: &[usize]) -> Option<(usize, usize, Ratio<i128>)> {
        let n_features = self.rows.first().map_or(0, Vec::len);
        let mut best: Option<(usize, usize, Ratio<i128>)> = None;
        for f in 0..n_features {
            let mut ranks: Vec<usize> = cases.iter().map(|&i| self.rows[i][f]).collect();
            ranks.sort_unstable();
            ranks.dedup();
            // The largest rank sends everything left.
            for &threshold in ranks.iter().take(ranks.len().saturating_sub(1)) {
                let (l, r): (Vec<usize>, Vec<usize>) = cases.iter().partition(|&&i| self.rows[i][f] <= threshold);
                if l.len() < self.cfg.min_leaf_size || r.len() < self.cfg.min_leaf_size {
                    continue;
                }
                let gain = impurity_decrease(cases, &l, &r, self.labels);
                if best.as_ref().is_none_or(|(_, _, g)| gain > *g) {
                    best = Some((f + 1, threshold, gain));
                }
            }
        }
        best
    }

    fn build(&mut self, cases: Vec<usize>, depth: usize, region: Vec<RankRange>) -> TreeNode {
        let n = cases.len();
        let ones = count_ones(&cases, self.labels) as usize;
        let minority = S::from_count(ones.min(n - ones)) / S::from_count(n);
        if minority <= self.cfg.purity_threshold {
            return self.leaf(cases, depth, region, StopReason::Pure);
        }
        if depth >= self.cfg.max_depth {
            return self.leaf(cases, depth, region, StopReason::MaxDepth);
        }
        if n < 2 * self.cfg.min_leaf_size {
            return self.leaf(cases, depth, region, StopReason::TooFewCases);
        }
        match self.best_split(&cases) {
            Some((feature, threshold, gain)) if gain > Ratio::from_integer(0) => {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    cases.iter().partition(|&&i| self.rows[i][feature - 1] <= threshold);
                let mut left_region = region.clone();
                left_region[feature - 1].hi = Some(threshold);
                let mut right_region = region;
                right_region[feature - 1].lo = threshold + 1;
                let left = self.build(l, depth + 1, left_region);
                let right = self.build(r, depth + 1, right_region);
                TreeNode::Split { feature, threshold, left: Box::new(left), right: Box::new(right) }
            }
            _ => self.leaf(cases, depth, region, StopReason::NoImprovingSplit),
        }
    }
}

/// Grows a tree over an ordinal training set with labels in `{0, 1}`.
pub fn dtree_build<S: Scalar>(t: &TrainingSet<S>, cfg: &TreeConfig<S>) -> Result<TreePartition> {
    if cfg.max_depth == 0 {
        return Err(Error::InvalidParameter { name: "max_depth", reason: "must be positive".into() });
    }
    if cfg.min_leaf_size == 0 {
        return Err(Error::InvalidParameter { name: "min_leaf", reason: "must be positive".into() });
    }
    let rows = ordinal_rows(t)?;
    let labels = binary_labels(t)?;
    let mut builder = Builder { rows: &rows, labels: &labels, cfg, next_leaf: 0 };
    let root = builder.build((0..t.len()).collect(), 0, vec![RankRange::ALL; t.dim()]);
    Ok(TreePartition { root, n_features: t.dim(), sample_size: t.len() })
}

/// Observations whose feature vectors fall in the leaf containing `x0`.
pub fn dtree_counterparts<S: Scalar>(
    x0: &FeatureVector<S>,
    partition: &TreePartition,
    t: &TrainingSet<S>,
) -> Result<CounterpartSet<S>> {
    if partition.sample_size != t.len() {
        return Err(Error::SchemaMismatch {
            index: 0,
            detail: format!("tree built on {} cases, given {}", partition.sample_size, t.len()),
        });
    }
    let leaf = partition.route(x0)?;
    if leaf.cases.is_empty() {
        return Err(Error::EmptyLeaf { leaf: leaf.id });
    }
    let members = leaf
        .cases
        .iter()
        .map(|&i| t.cases().get(i).cloned().ok_or(Error::EmptyLeaf { leaf: leaf.id }))
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterpartSet::from_training(members))
}

/// Decision-tree classification at one query point.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree<S> {
    pub x0: FeatureVector<S>,
    pub partition: TreePartition,
}

impl<S: Scalar> DecisionTree<S> {
    pub fn fit(x0: FeatureVector<S>, t: &TrainingSet<S>, cfg: &TreeConfig<S>) -> Result<Self> {
        Ok(DecisionTree { x0, partition: dtree_build(t, cfg)? })
    }
}

impl<S: Scalar> Paradigm<S> for DecisionTree<S> {
    fn family(&self) -> Family {
        Family::Dtree
    }

    fn baseline(&self, f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Baseline<S>> {
        pointwise_baseline(f, &self.x0)
    }

    fn counterparts(&self, _alpha: &Case<S>, _f: &Hypothesis<S>, t: &TrainingSet<S>) -> Result<CounterpartSet<S>> {
        dtree_counterparts(&self.x0, &self.partition, t)
    }

    fn case_inconsistency(&self, alpha: &Case<S>, counterparts: &CounterpartSet<S>, _f: &Hypothesis<S>) -> Result<S> {
        smoothing_case_inconsistency(&alpha.y, counterparts)
    }

    fn aggregation(&self, _f: &Hypothesis<S>, _t: &TrainingSet<S>) -> Result<Aggregation<S>> {
        Ok(Aggregation::Sum)
    }

    fn search(&self, _t: &TrainingSet<S>) -> Result<Search<S>> {
        Ok(Search::Finite(binary_candidates(&self.x0, FeedbackDomain::ZeroOne)))
    }
}

/// Label in `{0, 1}` closest to the mean label of `x0`'s leaf; ties give 0.
pub fn dtree_predict<S: Scalar>(
    x0: &FeatureVector<S>,
    partition: &TreePartition,
    t: &TrainingSet<S>,
) -> Result<Prediction<S>> {
    let problem = ProblemStatement::new(Family::Dtree, vec![Param::X0(x0.clone())])?;
    let learner = DecisionTree { x0: x0.clone(), partition: partition.clone() };
    select_hypothesis(&learner, &problem, t).map(Prediction::from)
}
