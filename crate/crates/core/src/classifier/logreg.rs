//! L2-regularised multinomial logistic regression solved with L-BFGS.
//!
//! The objective is the mean softmax cross-entropy plus
//! `l2_strength / 2 * ‖W‖²`; biases are not penalised. Optimisation starts
//! from zero and uses a monotone backtracking line search, so every accepted
//! step lowers the objective.

use std::collections::VecDeque;

use log::debug;

use super::{LinearModel, TrainConfig, TrainSummary};
use crate::corpus::CefrLevel;
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

const HISTORY: usize = 10;
const ARMIJO_C1: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

/// Objective over a flat parameter vector `[W (K×D row-major), b (K)]`.
pub struct SoftmaxObjective<'a> {
    x: &'a FeatureMatrix,
    targets: Vec<usize>,
    n_classes: usize,
    l2: f64,
}

impl<'a> SoftmaxObjective<'a> {
    pub fn new(x: &'a FeatureMatrix, targets: Vec<usize>, n_classes: usize, l2: f64) -> Self {
        assert_eq!(x.n_rows(), targets.len());
        SoftmaxObjective {
            x,
            targets,
            n_classes,
            l2,
        }
    }

    pub fn n_params(&self) -> usize {
        self.n_classes * (self.x.width() + 1)
    }

    pub fn value(&self, theta: &[f64]) -> f64 {
        self.evaluate(theta, None)
    }

    pub fn value_and_gradient(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        self.evaluate(theta, Some(grad))
    }

    fn evaluate(&self, theta: &[f64], mut grad: Option<&mut [f64]>) -> f64 {
        let k = self.n_classes;
        let d = self.x.width();
        let n = self.x.n_rows() as f64;
        let (weights, biases) = theta.split_at(k * d);
        if let Some(g) = grad.as_deref_mut() {
            g.fill(0.0);
        }

        let mut loss = 0.0;
        let mut scores = vec![0.0; k];
        for (i, row) in self.x.rows().enumerate() {
            for c in 0..k {
                scores[c] = row.dot(&weights[c * d..(c + 1) * d]) + biases[c];
            }
            let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sum_exp: f64 = scores.iter().map(|s| (s - max).exp()).sum();
            let log_z = max + sum_exp.ln();
            let target = self.targets[i];
            loss += log_z - scores[target];

            if let Some(g) = grad.as_deref_mut() {
                let (gw, gb) = g.split_at_mut(k * d);
                for c in 0..k {
                    let p = (scores[c] - log_z).exp();
                    let residual = (p - f64::from(u8::from(c == target))) / n;
                    if residual != 0.0 {
                        row.axpy(residual, &mut gw[c * d..(c + 1) * d]);
                        gb[c] += residual;
                    }
                }
            }
        }

        let sq_norm: f64 = weights.iter().map(|w| w * w).sum();
        if let Some(g) = grad {
            for (gi, wi) in g[..k * d].iter_mut().zip(weights) {
                *gi += self.l2 * wi;
            }
        }
        loss / n + 0.5 * self.l2 * sq_norm
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fits a softmax-regression model to `(x, y)`.
///
/// With a single observed class the result is a constant model and no
/// optimisation runs.
pub fn train_logreg(x: &FeatureMatrix, y: &[CefrLevel], cfg: &TrainConfig) -> Result<LinearModel> {
    cfg.validate()?;
    if x.n_rows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.n_rows(),
            found: y.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::Training("no training rows".into()));
    }
    if !x.all_finite() {
        return Err(Error::Training(
            "feature matrix contains non-finite values".into(),
        ));
    }

    let mut classes: Vec<CefrLevel> = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() == 1 {
        return LinearModel::zeros(classes, x.width());
    }
    if y.len() < 2 {
        return Err(Error::Training("need at least two training rows".into()));
    }
    let targets: Vec<usize> = y
        .iter()
        .map(|l| classes.binary_search(l).expect("class list built from y"))
        .collect();

    let k = classes.len();
    let d = x.width();
    let objective = SoftmaxObjective::new(x, targets, k, cfg.l2_strength);
    let (theta, summary) = minimize_lbfgs(&objective, cfg);
    debug!(
        "logreg: {} rows, {d} features, {k} classes, {} iterations, objective {:.6}",
        y.len(),
        summary.iterations,
        summary.objective
    );

    let (weights, biases) = theta.split_at(k * d);
    Ok(LinearModel::new(classes, d, weights.to_vec(), biases.to_vec())?.with_summary(summary))
}

fn minimize_lbfgs(objective: &SoftmaxObjective<'_>, cfg: &TrainConfig) -> (Vec<f64>, TrainSummary) {
    let n = objective.n_params();
    let mut theta = vec![0.0; n];
    let mut grad = vec![0.0; n];
    let mut f = objective.value_and_gradient(&theta, &mut grad);
    let mut history = vec![f];
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(HISTORY);

    let mut next = vec![0.0; n];
    let mut next_grad = vec![0.0; n];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        if grad.iter().all(|g| g.abs() <= f64::EPSILON) {
            converged = true;
            break;
        }
        let mut direction = two_loop(&grad, &memory);
        let mut slope = dot(&grad, &direction);
        if slope >= 0.0 {
            memory.clear();
            direction = grad.iter().map(|g| -g).collect();
            slope = -dot(&grad, &grad);
        }

        let accepted = loop {
            let mut step = if memory.is_empty() {
                (1.0 / dot(&grad, &grad).sqrt()).min(1.0)
            } else {
                1.0
            };
            let mut found = None;
            while step >= MIN_STEP {
                for i in 0..n {
                    next[i] = theta[i] + step * direction[i];
                }
                let f_next = objective.value_and_gradient(&next, &mut next_grad);
                if f_next.is_finite() && f_next <= f + ARMIJO_C1 * step * slope {
                    found = Some(f_next);
                    break;
                }
                step *= 0.5;
            }
            match found {
                Some(f_next) => break Some(f_next),
                None if !memory.is_empty() => {
                    // retry once along steepest descent
                    memory.clear();
                    direction = grad.iter().map(|g| -g).collect();
                    slope = -dot(&grad, &grad);
                }
                None => break None,
            }
        };

        let Some(f_next) = accepted else {
            converged = true;
            break;
        };
        iterations += 1;

        let s: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = next_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-12 * dot(&yv, &yv).sqrt() * dot(&s, &s).sqrt() && sy > 0.0 {
            if memory.len() == HISTORY {
                memory.pop_front();
            }
            memory.push_back((s, yv, 1.0 / sy));
        }

        let rel_change = (f - f_next) / f.abs().max(f_next.abs()).max(1.0);
        std::mem::swap(&mut theta, &mut next);
        std::mem::swap(&mut grad, &mut next_grad);
        f = f_next;
        history.push(f);
        if rel_change < cfg.convergence_tol {
            converged = true;
            break;
        }
    }

    (
        theta,
        TrainSummary {
            objective: f,
            iterations,
            converged,
            history,
        },
    )
}

/// L-BFGS two-loop recursion: returns `-H g`.
fn two_loop(grad: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = grad.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let gamma = dot(s, y) / dot(y, y);
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    for qi in q.iter_mut() {
        *qi = -*qi;
    }
    q
}
