//! Closed-form block minimizers (edge and star message passing) and the
//! plain block-gradient step used by the coordinate-descent baselines.
//!
//! Every update returns fresh blocks and leaves `lambda` untouched, so a
//! scheduler can evaluate at one point and install into another.

use crate::model::{Incidence, Model};
use crate::objective::{block_slack, local_log_terms, log_edge_marginal, log_side_marginal, log_vertex_marginal, DualVector};

/// Exact minimizer of `L` over the block `(e, i)`:
/// `λ'_{e,i} = λ_{e,i} + (log S_{e,i} - log μ_i) / (2η)`.
pub fn emp_update(model: &Model, lambda: &DualVector, eta: f64, inc: Incidence) -> Vec<f64> {
    let (log_mu, log_s) = local_log_terms(model, lambda, eta, inc);
    lambda
        .block(inc)
        .iter()
        .zip(log_s.iter().zip(&log_mu))
        .map(|(l, (s, m))| l + (s - m) / (2.0 * eta))
        .collect()
}

/// Exact minimizer of `L` over all blocks `(e, i)` with `e ∈ N_i`.
///
/// Returned in the order of `model.incident(i)`.
pub fn smp_update(model: &Model, lambda: &DualVector, eta: f64, i: usize) -> Vec<(Incidence, Vec<f64>)> {
    let d = model.d();
    let incident = model.incident(i);
    let log_mu = log_vertex_marginal(model, lambda, eta, i);
    let log_s: Vec<Vec<f64>> = incident
        .iter()
        .map(|inc| log_side_marginal(&log_edge_marginal(model, lambda, eta, inc.edge), d, inc.side))
        .collect();
    // log(μ_i Π_e S_{e,i}) / (|N_i| + 1)
    let geo: Vec<f64> = (0..d)
        .map(|x| (log_mu[x] + log_s.iter().map(|s| s[x]).sum::<f64>()) / (incident.len() + 1) as f64)
        .collect();
    incident
        .iter()
        .zip(&log_s)
        .map(|(&inc, s)| {
            let block = lambda
                .block(inc)
                .iter()
                .zip(s.iter().zip(&geo))
                .map(|(l, (s, g))| l + (s - g) / eta)
                .collect();
            (inc, block)
        })
        .collect()
}

/// `λ'_{e,i} = λ_{e,i} + step · ν_{e,i}`, a gradient step on one block.
pub fn block_grad_step(model: &Model, lambda: &DualVector, eta: f64, inc: Incidence, step: f64) -> Vec<f64> {
    let nu = block_slack(model, lambda, eta, inc);
    lambda
        .block(inc)
        .iter()
        .zip(&nu)
        .map(|(l, v)| l + step * v)
        .collect()
}
