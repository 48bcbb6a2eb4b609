use crate::error::{Error, Result};
use crate::paradigm::LinearHypothesis;
use crate::scalar::Real;

/// Step schedule and stopping rule for [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<S> {
    /// Initial step size; the step at epoch `t` is `eta0 / (1 + t * decay)`.
    pub eta0: S,
    pub decay: S,
    /// Stop once the epoch-end objective changes by less than this.
    pub tol: S,
    /// Maximum number of epochs (passes over the training cases).
    pub max_iters: usize,
    /// Consecutive epochs whose change must stay below `tol` before the run
    /// stops; a single small change can be an oscillation crossing itself.
    pub patience: usize,
}

impl<S: Real> Default for SolverConfig<S> {
    fn default() -> Self {
        SolverConfig {
            eta0: S::from_f64_lossless(0.1),
            decay: S::from_f64_lossless(0.01),
            tol: S::from_f64_lossless(1e-8),
            max_iters: 50_000,
            patience: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace<S> {
    /// Best objective seen at the end of each epoch.
    pub best_per_epoch: Vec<S>,
    pub epochs: usize,
    pub converged: bool,
}

/// Deterministic incremental subgradient descent from the origin. The
/// objective is a sum of `terms` convex terms (one per training case); an
/// epoch visits them in order, stepping along a subgradient of each with
/// the epoch's step size. The run stops once the objective at the end of
/// `patience` consecutive epochs has each time changed by less than `tol`,
/// and the best epoch-end iterate is returned.
pub fn minimize<S, V, G>(
    dim: usize,
    terms: usize,
    objective: V,
    term_subgradient: G,
    cfg: &SolverConfig<S>,
) -> Result<(LinearHypothesis<S>, SolveTrace<S>)>
where
    S: Real,
    V: Fn(&LinearHypothesis<S>) -> Result<S>,
    G: Fn(&LinearHypothesis<S>, usize) -> Result<LinearHypothesis<S>>,
{
    let mut current = LinearHypothesis::zero(dim);
    let mut value = objective(&current)?;
    if !value.is_finite() {
        return Err(Error::SolverDiverged { iteration: 0 });
    }
    let mut best = (current.clone(), value);
    let mut trace = SolveTrace { best_per_epoch: Vec::new(), epochs: 0, converged: false };
    let mut quiet = 0usize;
    for epoch in 0..cfg.max_iters {
        let step = cfg.eta0 / (S::one() + S::from_count(epoch) * cfg.decay);
        for i in 0..terms {
            let g = term_subgradient(&current, i)?;
            for (bj, gj) in current.b.iter_mut().zip(&g.b) {
                *bj = *bj - step * *gj;
            }
            current.a = current.a - step * g.a;
        }
        let next = objective(&current)?;
        if !next.is_finite() {
            return Err(Error::SolverDiverged { iteration: epoch + 1 });
        }
        if next < best.1 {
            best = (current.clone(), next);
        }
        trace.best_per_epoch.push(best.1);
        trace.epochs = epoch + 1;
        let change = (next - value).abs();
        value = next;
        quiet = if change < cfg.tol { quiet + 1 } else { 0 };
        if quiet >= cfg.patience.max(1) {
            trace.converged = true;
            break;
        }
    }
    Ok((best.0, trace))
}
