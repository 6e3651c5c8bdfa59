//! Regularized primal/dual objectives, primal recovery and slacks.
//!
//! The dual variable enters every exponent scaled by `eta`:
//!
//! ```text
//! L(λ) = 1/η Σ_i log Σ_x exp(-η C_i(x) + η Σ_{e∈N_i} λ_{e,i}(x))
//!      + 1/η Σ_e log Σ_{x∈χ²} exp(-η C_e(x) - η Σ_{i∈e} λ_{e,i}(x_i))
//! ```
//!
//! so that `∂L/∂λ_{e,i} = μ_i^λ - S_{e,i}^λ = -ν_{e,i}` exactly. All
//! exponentials go through a max-shifted log-sum-exp.

use crate::error::{Error, Result};
use crate::model::{Incidence, Model, Side};

macro_rules! block_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            d: usize,
            data: Vec<f64>,
        }

        impl $name {
            pub fn zeros(model: &Model) -> Self {
                $name { d: model.d(), data: vec![0.0; model.dual_dim()] }
            }

            /// Wraps a flat vector laid out block by block, `(edge, side)`
            /// with the low side first.
            pub fn from_vec(model: &Model, data: Vec<f64>) -> Result<Self> {
                if data.len() != model.dual_dim() {
                    return Err(Error::ShapeMismatch(format!(
                        "expected {} entries, got {}",
                        model.dual_dim(),
                        data.len()
                    )));
                }
                Ok($name { d: model.d(), data })
            }

            pub fn d(&self) -> usize {
                self.d
            }

            pub fn num_blocks(&self) -> usize {
                self.data.len() / self.d
            }

            pub fn block(&self, inc: Incidence) -> &[f64] {
                self.block_at(inc.block())
            }

            pub fn block_at(&self, b: usize) -> &[f64] {
                &self.data[b * self.d..(b + 1) * self.d]
            }

            pub fn block_mut(&mut self, inc: Incidence) -> &mut [f64] {
                let b = inc.block();
                &mut self.data[b * self.d..(b + 1) * self.d]
            }

            pub fn set_block(&mut self, inc: Incidence, values: &[f64]) {
                self.block_mut(inc).copy_from_slice(values);
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.data
            }

            pub fn as_mut_slice(&mut self) -> &mut [f64] {
                &mut self.data
            }

            pub fn into_vec(self) -> Vec<f64> {
                self.data
            }
        }
    };
}

block_vector!(
    /// Dual variables: one length-`d` block per (edge, endpoint).
    DualVector
);
block_vector!(
    /// Slack `ν_{e,i} = S_{e,i} - μ_i`, laid out like [`DualVector`].
    SlackVector
);

impl SlackVector {
    pub fn block_l1(&self, b: usize) -> f64 {
        self.block_at(b).iter().map(|v| v.abs()).sum()
    }

    /// `Σ_{e,i} ‖ν_{e,i}‖₁²`, the quantity minimized by the best-iterate rule.
    pub fn score(&self) -> f64 {
        (0..self.num_blocks()).map(|b| self.block_l1(b).powi(2)).sum()
    }

    /// `Σ_{e,i} ‖ν_{e,i}‖₁`.
    pub fn l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }
}

/// Pseudo-marginals: a length-`d` block per vertex and a row-major
/// `d * d` block per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalVector {
    d: usize,
    vertex: Vec<f64>,
    edge: Vec<f64>,
}

impl MarginalVector {
    pub fn new(model: &Model, vertex: Vec<f64>, edge: Vec<f64>) -> Result<Self> {
        let d = model.d();
        if vertex.len() != model.n() * d || edge.len() != model.m() * d * d {
            return Err(Error::ShapeMismatch(format!(
                "marginal blocks have {} + {} entries, model needs {} + {}",
                vertex.len(),
                edge.len(),
                model.n() * d,
                model.m() * d * d
            )));
        }
        Ok(MarginalVector { d, vertex, edge })
    }

    /// Every vertex block `1/d`, every edge block `1/d²`.
    pub fn uniform(model: &Model) -> Self {
        let d = model.d();
        MarginalVector {
            d,
            vertex: vec![1.0 / d as f64; model.n() * d],
            edge: vec![1.0 / (d * d) as f64; model.m() * d * d],
        }
    }

    /// Indicator marginals of an integral labelling.
    pub fn from_assignment(model: &Model, labels: &[usize]) -> Self {
        let d = model.d();
        let mut mu = MarginalVector {
            d,
            vertex: vec![0.0; model.n() * d],
            edge: vec![0.0; model.m() * d * d],
        };
        for (i, &x) in labels.iter().enumerate() {
            mu.vertex[i * d + x] = 1.0;
        }
        for (e, &(i, j)) in model.edges().iter().enumerate() {
            mu.edge[e * d * d + labels[i] * d + labels[j]] = 1.0;
        }
        mu
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.vertex.len() / self.d
    }

    pub fn m(&self) -> usize {
        self.edge.len() / (self.d * self.d)
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertex[i * self.d..(i + 1) * self.d]
    }

    pub fn vertex_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.vertex[i * self.d..(i + 1) * self.d]
    }

    pub fn edge(&self, e: usize) -> &[f64] {
        let dd = self.d * self.d;
        &self.edge[e * dd..(e + 1) * dd]
    }

    pub fn edge_mut(&mut self, e: usize) -> &mut [f64] {
        let dd = self.d * self.d;
        &mut self.edge[e * dd..(e + 1) * dd]
    }

    pub fn vertex_entries(&self) -> &[f64] {
        &self.vertex
    }

    pub fn edge_entries(&self) -> &[f64] {
        &self.edge
    }

    /// Total ℓ₁ distance between the edge blocks of two marginal vectors.
    pub fn edge_l1_distance(&self, other: &MarginalVector) -> f64 {
        self.edge
            .iter()
            .zip(&other.edge)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// ℓ∞ distance over all entries.
    pub fn max_abs_diff(&self, other: &MarginalVector) -> f64 {
        self.vertex
            .iter()
            .zip(&other.vertex)
            .chain(self.edge.iter().zip(&other.edge))
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub(crate) fn check_shape(&self, model: &Model) -> Result<()> {
        if self.d != model.d() || self.n() != model.n() || self.m() != model.m() {
            return Err(Error::ShapeMismatch(format!(
                "marginals are (n={}, m={}, d={}), model is (n={}, m={}, d={})",
                self.n(),
                self.m(),
                self.d,
                model.n(),
                model.m(),
                model.d()
            )));
        }
        Ok(())
    }
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Subtracts the log-partition in place and returns it.
fn log_normalize(xs: &mut [f64]) -> f64 {
    let z = log_sum_exp(xs);
    xs.iter_mut().for_each(|x| *x -= z);
    z
}

fn vertex_logits(model: &Model, lambda: &DualVector, eta: f64, i: usize, out: &mut [f64]) {
    let c = model.vertex_cost(i);
    for (o, &cost) in out.iter_mut().zip(c) {
        *o = -eta * cost;
    }
    for &inc in model.incident(i) {
        for (o, &l) in out.iter_mut().zip(lambda.block(inc)) {
            *o += eta * l;
        }
    }
}

fn edge_logits(model: &Model, lambda: &DualVector, eta: f64, e: usize, out: &mut [f64]) {
    let d = model.d();
    let c = model.edge_cost(e);
    let low = lambda.block(Incidence { edge: e, side: Side::Low });
    let high = lambda.block(Incidence { edge: e, side: Side::High });
    for a in 0..d {
        for b in 0..d {
            out[a * d + b] = -eta * (c[a * d + b] + low[a] + high[b]);
        }
    }
}

/// Normalized `log μ_i^λ`.
pub fn log_vertex_marginal(model: &Model, lambda: &DualVector, eta: f64, i: usize) -> Vec<f64> {
    let mut out = vec![0.0; model.d()];
    vertex_logits(model, lambda, eta, i, &mut out);
    log_normalize(&mut out);
    out
}

/// Normalized `log μ_e^λ`, row-major.
pub fn log_edge_marginal(model: &Model, lambda: &DualVector, eta: f64, e: usize) -> Vec<f64> {
    let d = model.d();
    let mut out = vec![0.0; d * d];
    edge_logits(model, lambda, eta, e, &mut out);
    log_normalize(&mut out);
    out
}

/// `log S_{e,i}` from a normalized log edge table: marginalize out the
/// label of the other endpoint.
pub fn log_side_marginal(log_edge: &[f64], d: usize, side: Side) -> Vec<f64> {
    let mut buf = vec![0.0; d];
    (0..d)
        .map(|x| {
            for (y, slot) in buf.iter_mut().enumerate() {
                *slot = match side {
                    Side::Low => log_edge[x * d + y],
                    Side::High => log_edge[y * d + x],
                };
            }
            log_sum_exp(&buf)
        })
        .collect()
}

/// `log μ_i^λ` and `log S_{e,i}^λ` for one block, the inputs of every
/// local update.
pub(crate) fn local_log_terms(
    model: &Model,
    lambda: &DualVector,
    eta: f64,
    inc: Incidence,
) -> (Vec<f64>, Vec<f64>) {
    let i = model.endpoint(inc.edge, inc.side);
    let log_mu = log_vertex_marginal(model, lambda, eta, i);
    let log_edge = log_edge_marginal(model, lambda, eta, inc.edge);
    (log_mu, log_side_marginal(&log_edge, model.d(), inc.side))
}

/// Slack of a single block, `S_{e,i} - μ_i`.
pub fn block_slack(model: &Model, lambda: &DualVector, eta: f64, inc: Incidence) -> Vec<f64> {
    let (log_mu, log_s) = local_log_terms(model, lambda, eta, inc);
    log_s
        .iter()
        .zip(&log_mu)
        .map(|(s, m)| s.exp() - m.exp())
        .collect()
}

/// Log-domain primal recovered from a dual point.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMarginals {
    d: usize,
    vertex: Vec<f64>,
    edge: Vec<f64>,
}

impl LogMarginals {
    pub fn compute(model: &Model, lambda: &DualVector, eta: f64) -> Self {
        let d = model.d();
        let mut vertex = vec![0.0; model.n() * d];
        for (i, chunk) in vertex.chunks_exact_mut(d).enumerate() {
            vertex_logits(model, lambda, eta, i, chunk);
            log_normalize(chunk);
        }
        let mut edge = vec![0.0; model.m() * d * d];
        for (e, chunk) in edge.chunks_exact_mut(d * d).enumerate() {
            edge_logits(model, lambda, eta, e, chunk);
            log_normalize(chunk);
        }
        LogMarginals { d, vertex, edge }
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertex[i * self.d..(i + 1) * self.d]
    }

    pub fn edge(&self, e: usize) -> &[f64] {
        let dd = self.d * self.d;
        &self.edge[e * dd..(e + 1) * dd]
    }

    pub fn to_marginals(&self) -> MarginalVector {
        MarginalVector {
            d: self.d,
            vertex: self.vertex.iter().map(|x| x.exp()).collect(),
            edge: self.edge.iter().map(|x| x.exp()).collect(),
        }
    }

    pub fn slack(&self, model: &Model) -> SlackVector {
        let d = self.d;
        let mut nu = SlackVector::zeros(model);
        for e in 0..model.m() {
            for side in [Side::Low, Side::High] {
                let inc = Incidence { edge: e, side };
                let log_s = log_side_marginal(self.edge(e), d, side);
                let log_mu = self.vertex(model.endpoint(e, side));
                for ((slot, s), m) in nu.block_mut(inc).iter_mut().zip(&log_s).zip(log_mu) {
                    *slot = s.exp() - m.exp();
                }
            }
        }
        nu
    }
}

/// `μ^λ`: every block is a softmax of its logits.
pub fn recover_primal(model: &Model, lambda: &DualVector, eta: f64) -> MarginalVector {
    LogMarginals::compute(model, lambda, eta).to_marginals()
}

pub fn dual_objective(model: &Model, lambda: &DualVector, eta: f64) -> f64 {
    let d = model.d();
    let mut buf = vec![0.0; d * d];
    let mut total = 0.0;
    for i in 0..model.n() {
        vertex_logits(model, lambda, eta, i, &mut buf[..d]);
        total += log_sum_exp(&buf[..d]);
    }
    for e in 0..model.m() {
        edge_logits(model, lambda, eta, e, &mut buf);
        total += log_sum_exp(&buf);
    }
    total / eta
}

/// `-L(λ)` lower-bounds the optimal value of the unregularized relaxation
/// for every `λ` and `η`.
pub fn relaxation_lower_bound(model: &Model, lambda: &DualVector, eta: f64) -> f64 {
    -dual_objective(model, lambda, eta)
}

pub fn slack(model: &Model, lambda: &DualVector, eta: f64) -> SlackVector {
    LogMarginals::compute(model, lambda, eta).slack(model)
}

/// `∇L(λ) = -ν`.
pub fn dual_gradient(model: &Model, lambda: &DualVector, eta: f64) -> DualVector {
    let nu = slack(model, lambda, eta);
    DualVector {
        d: nu.d,
        data: nu.data.iter().map(|v| -v).collect(),
    }
}

pub fn slack_score(model: &Model, lambda: &DualVector, eta: f64) -> f64 {
    slack(model, lambda, eta).score()
}

/// `⟨C, μ⟩` over all vertex and edge blocks.
pub fn primal_objective(model: &Model, mu: &MarginalVector) -> Result<f64> {
    mu.check_shape(model)?;
    let vertex: f64 = (0..model.n())
        .map(|i| dot(model.vertex_cost(i), mu.vertex(i)))
        .sum();
    let edge: f64 = (0..model.m())
        .map(|e| dot(model.edge_cost(e), mu.edge(e)))
        .sum();
    Ok(vertex + edge)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `H(p) = -Σ p (log p - 1)` summed over every block, with `0 log 0 = 0`.
pub fn entropy(mu: &MarginalVector) -> Result<f64> {
    let mut h = 0.0;
    for &p in mu.vertex.iter().chain(&mu.edge) {
        if p < 0.0 || !p.is_finite() {
            return Err(Error::InvalidArgument(format!("entropy of invalid entry {p}")));
        }
        if p > 0.0 {
            h -= p * (p.max(1e-300).ln() - 1.0);
        }
    }
    Ok(h)
}

/// `⟨C, μ⟩ - H(μ)/η`.
pub fn regularized_primal(model: &Model, mu: &MarginalVector, eta: f64) -> Result<f64> {
    Ok(primal_objective(model, mu)? - entropy(mu)? / eta)
}

pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-8;

/// Membership in the local polytope: simplex vertex blocks and edge blocks
/// whose row/column sums match the endpoint marginals.
pub fn in_local_polytope(model: &Model, mu: &MarginalVector, tol: f64) -> bool {
    check_membership(model, mu, None, tol)
}

/// Membership in the slack polytope: as [`in_local_polytope`] but with
/// edge targets offset by `ν`.
pub fn in_slack_polytope(model: &Model, mu: &MarginalVector, nu: &SlackVector, tol: f64) -> bool {
    check_membership(model, mu, Some(nu), tol)
}

fn check_membership(model: &Model, mu: &MarginalVector, nu: Option<&SlackVector>, tol: f64) -> bool {
    if mu.check_shape(model).is_err() {
        return false;
    }
    let d = model.d();
    for i in 0..model.n() {
        let block = mu.vertex(i);
        if block.iter().any(|&p| p < -tol || !p.is_finite()) {
            return false;
        }
        if (block.iter().sum::<f64>() - 1.0).abs() > tol {
            return false;
        }
    }
    for e in 0..model.m() {
        let table = mu.edge(e);
        if table.iter().any(|&p| p < -tol || !p.is_finite()) {
            return false;
        }
        for side in [Side::Low, Side::High] {
            let inc = Incidence { edge: e, side };
            let target = mu.vertex(model.endpoint(e, side));
            let offset = nu.map(|n| n.block(inc));
            for x in 0..d {
                let sum: f64 = (0..d)
                    .map(|y| match side {
                        Side::Low => table[x * d + y],
                        Side::High => table[y * d + x],
                    })
                    .sum();
                let want = target[x] + offset.map_or(0.0, |o| o[x]);
                if (sum - want).abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::random_costs_on;
    use rand::Rng;

    fn zero_two_node() -> Model {
        Model::new(2, &[(0, 1)], 2, vec![vec![0.0; 2]; 2], vec![vec![0.0; 4]]).unwrap()
    }

    fn random_lambda(model: &Model, scale: f64, seed: u64) -> DualVector {
        let mut rng = crate::model::seeded_rng(seed);
        let data = (0..model.dual_dim()).map(|_| rng.gen_range(-scale..scale)).collect();
        DualVector::from_vec(model, data).unwrap()
    }

    #[test]
    fn primal_objective_examples() {
        let z = zero_two_node();
        assert_eq!(primal_objective(&z, &MarginalVector::uniform(&z)).unwrap(), 0.0);

        let m = random_costs_on(3, &[(0, 1), (1, 2)], 3, 1.0, 4).unwrap();
        let want: f64 = (0..3).map(|i| m.vertex_cost(i).iter().sum::<f64>() / 3.0).sum::<f64>()
            + (0..2).map(|e| m.edge_cost(e).iter().sum::<f64>() / 9.0).sum::<f64>();
        let got = primal_objective(&m, &MarginalVector::uniform(&m)).unwrap();
        assert!((got - want).abs() < 1e-14);

        let two = Model::new(2, &[(0, 1)], 2, vec![vec![0.0, 0.1], vec![0.0, 0.0]], vec![vec![0.0, 1.0, 1.0, 0.0]]).unwrap();
        for labels in [[0, 0], [1, 0], [1, 1]] {
            let mu = MarginalVector::from_assignment(&two, &labels);
            let want = two.map_value(&crate::model::Assignment::new(labels.to_vec())).unwrap();
            assert_eq!(primal_objective(&two, &mu).unwrap(), want);
        }
        assert!(primal_objective(&m, &MarginalVector::uniform(&two)).is_err());
    }

    #[test]
    fn entropy_examples() {
        let z = zero_two_node();
        let uniform = MarginalVector::uniform(&z);
        let ln2 = 2f64.ln();
        assert!((entropy(&uniform).unwrap() - (2.0 * (ln2 + 1.0) + 4f64.ln() + 1.0)).abs() < 1e-12);
        let point = MarginalVector::from_assignment(&z, &[0, 0]);
        assert!((entropy(&point).unwrap() - 3.0).abs() < 1e-15);
        let block = MarginalVector::new(&z, vec![0.5, 0.5, 1.0, 0.0], vec![0.25; 4]).unwrap();
        // One uniform d=2 block contributes log 2 + 1.
        let h = entropy(&block).unwrap() - 1.0 - (4f64.ln() + 1.0);
        assert!((h - (ln2 + 1.0)).abs() < 1e-12);
        let bad = MarginalVector::new(&z, vec![-0.1, 1.1, 0.5, 0.5], vec![0.25; 4]).unwrap();
        assert!(entropy(&bad).is_err());
    }

    #[test]
    fn recover_primal_examples() {
        let z = zero_two_node();
        let mu = recover_primal(&z, &DualVector::zeros(&z), 3.0);
        assert!(mu.vertex_entries().iter().all(|&p| (p - 0.5).abs() < 1e-15));
        assert!(mu.edge_entries().iter().all(|&p| (p - 0.25).abs() < 1e-15));

        let m = Model::new(2, &[(0, 1)], 2, vec![vec![0.0, 3f64.ln()], vec![0.0; 2]], vec![vec![0.0; 4]]).unwrap();
        let mu = recover_primal(&m, &DualVector::zeros(&m), 1.0);
        assert!((mu.vertex(0)[0] - 0.75).abs() < 1e-15);
        assert!((mu.vertex(0)[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn recovered_blocks_normalized_even_at_large_eta() {
        let m = random_costs_on(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], 3, 1.0, 9).unwrap();
        for (seed, eta) in [(1, 1.0), (2, 100.0), (3, 1e5)] {
            let lambda = random_lambda(&m, 2.0, seed);
            let mu = recover_primal(&m, &lambda, eta);
            for i in 0..m.n() {
                assert!((mu.vertex(i).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            for e in 0..m.m() {
                assert!((mu.edge(e).iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            assert!(dual_objective(&m, &lambda, eta).is_finite());
        }
    }

    #[test]
    fn dual_objective_at_zero() {
        let z = zero_two_node();
        let l = dual_objective(&z, &DualVector::zeros(&z), 1.0);
        assert!((l - 4.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn initial_value_bound() {
        let m = random_costs_on(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], 3, 1.0, 2).unwrap();
        let (n, e, d) = (m.n() as f64, m.m() as f64, m.d() as f64);
        for eta in [0.1, 1.0, 10.0, 1000.0] {
            let l0 = dual_objective(&m, &DualVector::zeros(&m), eta);
            let bound = (n + e) * m.cost_inf_norm() + (n * d.ln() + 2.0 * e * d.ln()) / eta;
            assert!(l0 <= bound + 1e-12);
        }
    }

    #[test]
    fn slack_examples() {
        let z = zero_two_node();
        let nu = slack(&z, &DualVector::zeros(&z), 1.0);
        assert!(nu.as_slice().iter().all(|&v| v == 0.0));

        let m = random_costs_on(4, &[(0, 1), (1, 2), (1, 3)], 3, 1.0, 5).unwrap();
        let lambda = random_lambda(&m, 1.0, 6);
        let nu = slack(&m, &lambda, 2.0);
        for b in 0..nu.num_blocks() {
            assert!(nu.block_at(b).iter().sum::<f64>().abs() < 1e-12);
        }
        for b in 0..m.num_blocks() {
            let local = block_slack(&m, &lambda, 2.0, Incidence::from_block(b));
            for (a, b) in local.iter().zip(nu.block_at(b)) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let m = random_costs_on(3, &[(0, 1), (1, 2)], 3, 1.0, 1).unwrap();
        let uniform = MarginalVector::uniform(&m);
        let z = zero_two_node();
        assert!(in_local_polytope(&z, &MarginalVector::uniform(&z), 0.0));
        assert!(in_local_polytope(&m, &uniform, 1e-15));
        let mut bumped = uniform.clone();
        bumped.edge_mut(0)[0] += 1e-3;
        assert!(!in_local_polytope(&m, &bumped, 1e-6));

        let zero = SlackVector::zeros(&m);
        assert_eq!(in_slack_polytope(&m, &uniform, &zero, 1e-12), in_local_polytope(&m, &uniform, 1e-12));
        assert_eq!(in_slack_polytope(&m, &bumped, &zero, 1e-6), in_local_polytope(&m, &bumped, 1e-6));

        let lambda = random_lambda(&m, 1.0, 3);
        let mu = recover_primal(&m, &lambda, 3.0);
        let nu = slack(&m, &lambda, 3.0);
        assert!(in_slack_polytope(&m, &mu, &nu, 1e-10));
        assert!(!in_local_polytope(&m, &mu, 1e-10));

        let mut unbalanced = SlackVector::zeros(&m);
        unbalanced.block_mut(Incidence { edge: 0, side: Side::Low })[0] = 0.1;
        assert!(!in_slack_polytope(&m, &mu, &unbalanced, 1e-6));
        assert!(!in_slack_polytope(&m, &uniform, &unbalanced, 1e-6));
    }
}
