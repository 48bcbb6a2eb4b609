//! Direct recomputations that share no code with the learners they check.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linear::SlackVector;
use crate::local::Metric;
use crate::oracle::generate::rng_from_seed;
use crate::paradigm::{FeatureValue, FeatureVector, LinearHypothesis, TrainingSet};
use crate::scalar::Scalar;

fn coords<S: Scalar>(x: &FeatureVector<S>) -> Result<Vec<S>> {
    x.values()
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            FeatureValue::Numeric(r) => Ok(r.clone()),
            FeatureValue::Ordinal(r) => Ok(S::from_count(*r)),
            FeatureValue::Nominal(_) => Err(Error::NonNumericFeature { position: i + 1 }),
        })
        .collect()
}

fn distance_rank<S: Scalar>(a: &[S], b: &[S], metric: Metric) -> S {
    let mut acc = S::zero();
    for (p, q) in a.iter().zip(b) {
        let d = p.clone() - q.clone();
        acc = match metric {
            Metric::Euclidean => acc + d.clone() * d,
            Metric::Manhattan => acc + if d < S::zero() { -d } else { d },
        };
    }
    acc
}

/// Majority label among the cases that have fewer than `k` cases strictly
/// closer to `x0`. Labels are `{0, 1}`; a tie votes 0.
pub fn brute_knn_majority<S: Scalar>(x0: &FeatureVector<S>, t: &TrainingSet<S>, k: usize, metric: Metric) -> Result<S> {
    if k == 0 {
        return Err(Error::InvalidParameter { name: "k", reason: "must be positive".into() });
    }
    if k > t.len() {
        return Err(Error::KExceedsSampleSize { k, m: t.len() });
    }
    if x0.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: x0.dim() });
    }
    let q = coords(x0)?;
    let d = t.cases().iter().map(|c| Ok(distance_rank(&q, &coords(&c.x)?, metric))).collect::<Result<Vec<S>>>()?;
    let (mut ones, mut zeros) = (0usize, 0usize);
    for (i, di) in d.iter().enumerate() {
        let closer = d.iter().filter(|dj| *dj < di).count();
        if closer < k {
            if t.cases()[i].y == S::one() {
                ones += 1;
            } else {
                zeros += 1;
            }
        }
    }
    Ok(if ones > zeros { S::one() } else { S::zero() })
}

/// Product over feature positions of the fraction of observations sharing
/// `x0`'s value at that position whose label differs from `h_label`; 1/2
/// for a value no observation has.
pub fn brute_nb_total<S: Scalar>(x0: &FeatureVector<S>, t: &TrainingSet<S>, h_label: &S) -> S {
    let mut total = S::one();
    for (i, v) in x0.values().iter().enumerate() {
        let mut same = 0usize;
        let mut differ = 0usize;
        for c in t.cases() {
            if c.x.values().get(i) == Some(v) {
                same += 1;
                if c.y != *h_label {
                    differ += 1;
                }
            }
        }
        let factor = if same == 0 {
            S::from_f64_lossless(0.5)
        } else {
            S::from_count(differ) / S::from_count(same)
        };
        total = total * factor;
    }
    total
}

/// A feasible slack vector: the minimal one plus reproducible nonnegative
/// noise, each increment on a 1/1024 lattice in `[0, max_noise]`.
pub fn random_feasible_slack<S: Scalar>(
    f: &LinearHypothesis<S>,
    t: &TrainingSet<S>,
    seed: u64,
    max_noise: f64,
) -> Result<SlackVector<S>> {
    if f.b.len() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: f.b.len() });
    }
    let mut rng = rng_from_seed(seed);
    let steps = (max_noise * 1024.0).floor().max(0.0) as u32;
    let mut zeta = Vec::with_capacity(t.len());
    for c in t.cases() {
        let x = coords(&c.x)?;
        let mut fx = f.a.clone();
        for (xi, bi) in x.iter().zip(&f.b) {
            fx = fx + xi.clone() * bi.clone();
        }
        let gap = S::one() - c.y.clone() * fx;
        let base = if gap > S::zero() { gap } else { S::zero() };
        let u = S::from_f64_lossless(f64::from(rng.gen_range(0..=steps)) / 1024.0);
        zeta.push(base + u);
    }
    Ok(SlackVector { zeta })
}
