//! Gradient descent with step halving on flat parameter vectors.

/// A differentiable scalar function of a flat parameter vector.
pub trait Objective {
    fn n_params(&self) -> usize;

    fn value(&self, params: &[f64]) -> f64;

    fn value_and_gradient(&self, params: &[f64]) -> (f64, Vec<f64>);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentSettings {
    pub step_size: f64,
    pub max_iters: usize,
    /// Stop once an accepted step improves the objective by less than this.
    pub tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct DescentOutcome {
    pub params: Vec<f64>,
    /// Objective at the start and after every accepted step; non-increasing.
    pub trace: Vec<f64>,
    pub converged: bool,
}

/// Smallest step tried before declaring a stationary point.
const MIN_STEP: f64 = 1e-14;

/// Plain gradient descent. Each iteration starts from `step_size` and halves
/// the step until the objective does not increase.
pub fn descend<O: Objective + ?Sized>(
    objective: &O,
    start: Vec<f64>,
    settings: DescentSettings,
) -> DescentOutcome {
    let mut params = start;
    let mut current = objective.value(&params);
    let mut trace = vec![current];
    let mut converged = false;
    let mut candidate = vec![0.0; params.len()];

    for _ in 0..settings.max_iters {
        let (_, grad) = objective.value_and_gradient(&params);
        if grad.iter().all(|g| *g == 0.0) {
            converged = true;
            break;
        }
        let mut step = settings.step_size;
        let accepted = loop {
            for ((c, p), g) in candidate.iter_mut().zip(&params).zip(&grad) {
                *c = p - step * g;
            }
            let value = objective.value(&candidate);
            if value <= current {
                break Some(value);
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        let Some(value) = accepted else {
            converged = true;
            break;
        };
        let improvement = current - value;
        std::mem::swap(&mut params, &mut candidate);
        current = value;
        trace.push(current);
        if improvement < settings.tolerance {
            converged = true;
            break;
        }
    }

    DescentOutcome {
        params,
        trace,
        converged,
    }
}
