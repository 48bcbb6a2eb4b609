//! Seeded synthetic data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::paradigm::{Case, FeatureValue, FeatureVector, FeedbackDomain, LinearHypothesis, TrainingSet};
use crate::scalar::Scalar;

/// Attempts per case before giving up on drawing a fresh feature vector.
const MAX_DRAWS_PER_CASE: usize = 200;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Smooth part of a synthetic dependence.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseFunction {
    Linear { b: Vec<f64>, a: f64 },
    /// Steps on one feature (0-based): `values[j]` on the j-th interval cut
    /// by the sorted `thresholds`.
    PiecewiseConstant { feature: usize, thresholds: Vec<f64>, values: Vec<f64> },
}

impl BaseFunction {
    pub fn eval(&self, coords: &[f64]) -> f64 {
        match self {
            BaseFunction::Linear { b, a } => coords.iter().zip(b).map(|(x, w)| x * w).sum::<f64>() + a,
            BaseFunction::PiecewiseConstant { feature, thresholds, values } => {
                let v = coords.get(*feature).copied().unwrap_or(0.0);
                let idx = thresholds.iter().filter(|&&t| v > t).count();
                values.get(idx).or(values.last()).copied().unwrap_or(0.0)
            }
        }
    }
}

/// Stand-in for the unknown dependence between features and feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDependence {
    pub base: BaseFunction,
    /// Uniform noise in `[-noise, noise]` added to the base value.
    pub noise: f64,
    /// Fraction of cases whose feedback is corrupted, in `[0, 1)`.
    pub outlier_fraction: f64,
}

impl SyntheticDependence {
    pub fn exact(base: BaseFunction) -> Self {
        SyntheticDependence { base, noise: 0.0, outlier_fraction: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureDraw {
    /// Uniform reals in `[lo, hi)`.
    Continuous { lo: f64, hi: f64 },
    /// Uniform choice among the listed coordinates, per component.
    Grid(Vec<f64>),
    /// Ranks in `0..levels`.
    Ordinal { levels: usize },
    /// Symbols `f{i}_{j}`, `j < symbols`, so positions never share symbols.
    Nominal { symbols: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum LabelScheme {
    /// Real feedback from the dependence.
    Real(SyntheticDependence),
    /// Sign of the dependence in the given binary encoding; outliers flip.
    Binary { domain: FeedbackDomain, dependence: SyntheticDependence },
    /// Independent uniform labels.
    Coin(FeedbackDomain),
}

/// Recipe for one reproducible random data set.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstance {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub features: FeatureDraw,
    pub labels: LabelScheme,
    /// Number of extra query points drawn after the training set.
    pub queries: usize,
}

fn draw_vector(rng: &mut ChaCha8Rng, n: usize, draw: &FeatureDraw) -> (FeatureVector<f64>, Vec<f64>) {
    let mut values = Vec::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        match draw {
            FeatureDraw::Continuous { lo, hi } => {
                let v = rng.gen_range(*lo..*hi);
                values.push(FeatureValue::Numeric(v));
                coords.push(v);
            }
            FeatureDraw::Grid(points) => {
                let v = points[rng.gen_range(0..points.len())];
                values.push(FeatureValue::Numeric(v));
                coords.push(v);
            }
            FeatureDraw::Ordinal { levels } => {
                let r = rng.gen_range(0..*levels);
                values.push(FeatureValue::Ordinal(r));
                coords.push(r as f64);
            }
            FeatureDraw::Nominal { symbols } => {
                let j = rng.gen_range(0..*symbols);
                values.push(FeatureValue::Nominal(format!("f{}_{}", i + 1, j)));
                coords.push(j as f64);
            }
        }
    }
    (FeatureVector::new(values), coords)
}

fn apply_dependence(rng: &mut ChaCha8Rng, dep: &SyntheticDependence, coords: &[f64]) -> (f64, bool) {
    let mut y = dep.base.eval(coords);
    if dep.noise > 0.0 {
        y += rng.gen_range(-dep.noise..=dep.noise);
    }
    let outlier = dep.outlier_fraction > 0.0 && rng.gen_bool(dep.outlier_fraction);
    (y, outlier)
}

fn label(rng: &mut ChaCha8Rng, scheme: &LabelScheme, coords: &[f64]) -> f64 {
    let negative = |d: &FeedbackDomain| if *d == FeedbackDomain::MinusPlusOne { -1.0 } else { 0.0 };
    match scheme {
        LabelScheme::Real(dep) => {
            let (y, outlier) = apply_dependence(rng, dep, coords);
            if outlier {
                y + 10.0 * (1.0 + dep.noise) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
            } else {
                y
            }
        }
        LabelScheme::Binary { domain, dependence } => {
            let (y, outlier) = apply_dependence(rng, dependence, coords);
            if (y >= 0.0) != outlier {
                1.0
            } else {
                negative(domain)
            }
        }
        LabelScheme::Coin(domain) => {
            if rng.gen_bool(0.5) {
                1.0
            } else {
                negative(domain)
            }
        }
    }
}

/// Draws a training set with pairwise distinct feature vectors, then the
/// query points. Same recipe, same data.
pub fn generate_instance(spec: &RandomInstance) -> Result<(TrainingSet<f64>, Vec<FeatureVector<f64>>)> {
    let mut rng = rng_from_seed(spec.seed);
    let mut cases: Vec<Case<f64>> = Vec::with_capacity(spec.m);
    let mut attempts = 0usize;
    while cases.len() < spec.m {
        let (x, coords) = draw_vector(&mut rng, spec.n, &spec.features);
        attempts += 1;
        if cases.iter().any(|c| c.x == x) {
            if attempts > MAX_DRAWS_PER_CASE * spec.m.max(1) {
                return Err(Error::ExhaustedRetries { attempts });
            }
            continue;
        }
        let y = label(&mut rng, &spec.labels, &coords);
        cases.push(Case::new(x, y));
    }
    let queries = (0..spec.queries).map(|_| draw_vector(&mut rng, spec.n, &spec.features).0).collect();
    Ok((TrainingSet::new(cases)?, queries))
}

/// Linear hypothesis with coefficients uniform in `[-scale, scale)`.
pub fn random_linear(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> LinearHypothesis<f64> {
    let b = (0..n).map(|_| rng.gen_range(-scale..scale)).collect();
    LinearHypothesis::new(b, rng.gen_range(-scale..scale))
}

/// Linear hypothesis with coefficients on a coarse dyadic lattice, so that
/// cases on the margin boundary occur often.
pub fn random_dyadic_linear(rng: &mut ChaCha8Rng, n: usize) -> LinearHypothesis<f64> {
    let pick = |rng: &mut ChaCha8Rng| f64::from(rng.gen_range(-4i32..=4)) * 0.5;
    let b = (0..n).map(|_| pick(rng)).collect();
    LinearHypothesis::new(b, pick(rng))
}

/// Converts a double-valued set to another scalar type. Exact for `f64`
/// and rationals; may fail with a duplicate for `f32`.
pub fn lift_training_set<S: Scalar>(t: &TrainingSet<f64>) -> Result<TrainingSet<S>> {
    let cases = t.cases().iter().map(|c| Case::new(lift_vector(&c.x), S::from_f64_lossless(c.y))).collect();
    TrainingSet::new(cases)
}

pub fn lift_vector<S: Scalar>(x: &FeatureVector<f64>) -> FeatureVector<S> {
    FeatureVector::new(
        x.values()
            .iter()
            .map(|v| match v {
                FeatureValue::Numeric(r) => FeatureValue::Numeric(S::from_f64_lossless(*r)),
                FeatureValue::Ordinal(r) => FeatureValue::Ordinal(*r),
                FeatureValue::Nominal(s) => FeatureValue::Nominal(s.clone()),
            })
            .collect(),
    )
}

pub fn lift_linear<S: Scalar>(f: &LinearHypothesis<f64>) -> LinearHypothesis<S> {
    LinearHypothesis::from_f64s(&f.b, f.a)
}
