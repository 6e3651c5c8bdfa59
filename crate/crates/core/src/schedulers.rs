//! Solver loops: randomized standard message passing, the accelerated
//! edge/star variants, and the block-coordinate descent baselines.
//!
//! All loops start from `λ = 0` and draw every random choice from one
//! [`SeededRng`](crate::model::SeededRng) stream, so a seed fixes the whole
//! trajectory.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{seeded_rng, Incidence, Model, SeededRng};
use crate::objective::{block_slack, dual_objective, DualVector, LogMarginals};
use crate::updates::{emp_update, smp_update};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Emp,
    Smp,
    AccelEmp,
    AccelSmp,
    Bcd,
    AccelBcd,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Emp,
        Algorithm::Smp,
        Algorithm::AccelEmp,
        Algorithm::AccelSmp,
        Algorithm::Bcd,
        Algorithm::AccelBcd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Emp => "emp",
            Algorithm::Smp => "smp",
            Algorithm::AccelEmp => "accel-emp",
            Algorithm::AccelSmp => "accel-smp",
            Algorithm::Bcd => "bcd",
            Algorithm::AccelBcd => "accel-bcd",
        }
    }

    /// Standard/accelerated pairing used by the competitive ratio.
    pub fn accelerated(self) -> Option<Algorithm> {
        match self {
            Algorithm::Emp => Some(Algorithm::AccelEmp),
            Algorithm::Smp => Some(Algorithm::AccelSmp),
            Algorithm::Bcd => Some(Algorithm::AccelBcd),
            _ => None,
        }
    }

    pub fn is_accelerated(self) -> bool {
        matches!(self, Algorithm::AccelEmp | Algorithm::AccelSmp | Algorithm::AccelBcd)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm '{s}'")))
    }
}

/// Block update used by [`standard_mp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateKind {
    Emp,
    Smp,
    /// Gradient step of size `1/η` on a uniformly drawn edge block.
    GradStep,
}

/// Edge-block update plugged into the accelerated edge loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRule {
    Emp,
    GradStep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Record (and score) every `stride` iterations; the final iterate is
    /// always recorded.
    pub stride: usize,
    /// Denominator constant `c` in the accelerated star step
    /// `min_j|N_j| / (c p_i θ η N)`. The algorithm listing uses 2.
    pub smp_v_denominator: f64,
    /// Stop as soon as a recorded slack score falls to this value.
    pub stop_slack_score: Option<f64>,
    /// Measure wall-clock time per record. Off by default so traces are
    /// bitwise reproducible.
    pub timing: bool,
    /// Check the per-step improvement bounds of the standard loop.
    pub check_improvement: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            stride: 1,
            smp_v_denominator: 2.0,
            stop_slack_score: None,
            timing: false,
            check_improvement: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub dual_value: f64,
    /// `Σ_{e,i} ‖ν_{e,i}‖₁²` at `λ^(iter)`.
    pub slack_score: f64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    pub algorithm: Algorithm,
    pub eta: f64,
    pub records: Vec<TraceRecord>,
    /// Number of iterations actually run.
    pub iterations: usize,
    pub final_lambda: DualVector,
    /// Recorded iterate with the smallest slack score.
    pub best_lambda: DualVector,
    pub best_iter: usize,
    pub best_score: f64,
    /// Steps whose improvement fell short of the block bound (only counted
    /// with [`SolverOptions::check_improvement`]).
    pub improvement_violations: usize,
}

impl SolveTrace {
    /// The point the algorithm returns: the best iterate for the standard
    /// loops and the last iterate for the accelerated ones.
    pub fn output(&self) -> &DualVector {
        if self.algorithm.is_accelerated() {
            &self.final_lambda
        } else {
            &self.best_lambda
        }
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("trace always holds the initial record")
    }
}

/// What an observer sees at each recorded iteration.
pub struct Checkpoint<'a> {
    pub record: &'a TraceRecord,
    pub lambda: &'a DualVector,
}

/// Nesterov weight recursion `θ_k² = (1 - θ_k) θ_{k-1}²`.
pub fn theta_next(theta_prev: f64) -> f64 {
    let t2 = theta_prev * theta_prev;
    (-t2 + (t2 * t2 + 4.0 * t2).sqrt()) / 2.0
}

/// Running `θ_k` together with `δ_k = Π_{j≤k} (1 - θ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaState {
    pub theta_prev: f64,
    pub delta: f64,
}

impl Default for ThetaState {
    fn default() -> Self {
        ThetaState { theta_prev: 1.0, delta: 1.0 }
    }
}

impl ThetaState {
    /// Advances to the next `θ` and returns it.
    pub fn advance(&mut self) -> f64 {
        let theta = theta_next(self.theta_prev);
        self.theta_prev = theta;
        self.delta *= 1.0 - theta;
        theta
    }
}

/// `η = 4 (m + n) log d / ε`.
pub fn eta_for_epsilon(m: usize, n: usize, d: usize, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(4.0 * (m + n) as f64 * (d as f64).ln() / epsilon)
}

/// `η = 16 (m + n) (log(m + n) + log d) / Δ`, large enough for vertex
/// rounding to recover a unique MAP assignment.
pub fn eta_for_rounding(m: usize, n: usize, d: usize, gap: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::InvalidArgument(format!("gap must be positive, got {gap}")));
    }
    let mn = (m + n) as f64;
    Ok(16.0 * mn * (mn.ln() + (d as f64).ln()) / gap)
}

/// `G(η) = 24 m d (m + n) (√η ‖C‖_∞ + log d / √η)`.
pub fn g_constant(m: usize, n: usize, d: usize, eta: f64, cost_inf: f64) -> f64 {
    let s = eta.sqrt();
    24.0 * (m * d * (m + n)) as f64 * (s * cost_inf + (d as f64).ln() / s)
}

/// `K = ⌈√(4η) G(η) / ε'⌉`.
pub fn iteration_budget(m: usize, n: usize, d: usize, eta: f64, epsilon_prime: f64, cost_inf: f64) -> Result<u64> {
    if !(eta > 0.0) || !(epsilon_prime > 0.0) {
        return Err(Error::InvalidArgument("eta and epsilon' must be positive".into()));
    }
    let k = (4.0 * eta).sqrt() * g_constant(m, n, d, eta, cost_inf) / epsilon_prime;
    Ok(k.ceil() as u64)
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eta must be positive and finite, got {eta}")))
    }
}

/// Runs `algorithm` for up to `iters` iterations.
pub fn solve(
    model: &Model,
    algorithm: Algorithm,
    eta: f64,
    iters: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<SolveTrace> {
    solve_observed(model, algorithm, eta, iters, seed, opts, &mut |_| {})
}

/// [`solve`] with a callback at every recorded iteration.
pub fn solve_observed(
    model: &Model,
    algorithm: Algorithm,
    eta: f64,
    iters: usize,
    seed: u64,
    opts: &SolverOptions,
    observer: &mut dyn FnMut(&Checkpoint<'_>),
) -> Result<SolveTrace> {
    check_eta(eta)?;
    if opts.stride == 0 {
        return Err(Error::InvalidArgument("stride must be at least 1".into()));
    }
    let mut rec = Recorder::new(model, algorithm, eta, opts);
    let mut rng = seeded_rng(seed);
    match algorithm {
        Algorithm::Emp => run_standard(model, UpdateKind::Emp, eta, iters, &mut rng, &mut rec, observer),
        Algorithm::Smp => run_standard(model, UpdateKind::Smp, eta, iters, &mut rng, &mut rec, observer),
        Algorithm::Bcd => run_standard(model, UpdateKind::GradStep, eta, iters, &mut rng, &mut rec, observer),
        Algorithm::AccelEmp => run_accel_edge(model, EdgeRule::Emp, eta, iters, &mut rng, &mut rec, observer),
        Algorithm::AccelBcd => run_accel_edge(model, EdgeRule::GradStep, eta, iters, &mut rng, &mut rec, observer),
        Algorithm::AccelSmp => run_accel_star(model, eta, iters, &mut rng, &mut rec, observer),
    }
    Ok(rec.finish())
}

/// Randomized standard message passing with uniform edge-block sampling
/// (EMP, gradient step) or degree-proportional vertex sampling (SMP).
pub fn standard_mp(model: &Model, kind: UpdateKind, eta: f64, iters: usize, seed: u64) -> Result<SolveTrace> {
    let algorithm = match kind {
        UpdateKind::Emp => Algorithm::Emp,
        UpdateKind::Smp => Algorithm::Smp,
        UpdateKind::GradStep => Algorithm::Bcd,
    };
    solve(model, algorithm, eta, iters, seed, &SolverOptions::default())
}

pub fn accel_emp(model: &Model, eta: f64, iters: usize, seed: u64) -> Result<SolveTrace> {
    solve(model, Algorithm::AccelEmp, eta, iters, seed, &SolverOptions::default())
}

pub fn accel_smp(model: &Model, eta: f64, iters: usize, seed: u64) -> Result<SolveTrace> {
    solve(model, Algorithm::AccelSmp, eta, iters, seed, &SolverOptions::default())
}

pub fn accel_block_grad(model: &Model, eta: f64, iters: usize, seed: u64) -> Result<SolveTrace> {
    solve(model, Algorithm::AccelBcd, eta, iters, seed, &SolverOptions::default())
}

/// Accelerated edge loop with an explicit block rule. With
/// [`EdgeRule::Emp`] this is exactly [`accel_emp`].
pub fn accel_edge(
    model: &Model,
    rule: EdgeRule,
    eta: f64,
    iters: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<SolveTrace> {
    check_eta(eta)?;
    let algorithm = match rule {
        EdgeRule::Emp => Algorithm::AccelEmp,
        EdgeRule::GradStep => Algorithm::AccelBcd,
    };
    let mut rec = Recorder::new(model, algorithm, eta, opts);
    run_accel_edge(model, rule, eta, iters, &mut seeded_rng(seed), &mut rec, &mut |_| {});
    Ok(rec.finish())
}

struct Recorder<'m> {
    model: &'m Model,
    algorithm: Algorithm,
    eta: f64,
    opts: SolverOptions,
    start: Instant,
    records: Vec<TraceRecord>,
    best: Option<(DualVector, usize, f64)>,
    last: Option<DualVector>,
    iterations: usize,
    violations: usize,
}

impl<'m> Recorder<'m> {
    fn new(model: &'m Model, algorithm: Algorithm, eta: f64, opts: &SolverOptions) -> Self {
        Recorder {
            model,
            algorithm,
            eta,
            opts: opts.clone(),
            start: Instant::now(),
            records: Vec::new(),
            best: None,
            last: None,
            iterations: 0,
            violations: 0,
        }
    }

    fn due(&self, k: usize, iters: usize) -> bool {
        k % self.opts.stride == 0 || k == iters
    }

    /// Records `λ^(k)`. Returns true when the stopping score is reached.
    fn record(&mut self, k: usize, lambda: &DualVector, observer: &mut dyn FnMut(&Checkpoint<'_>)) -> bool {
        let score = LogMarginals::compute(self.model, lambda, self.eta).slack(self.model).score();
        let record = TraceRecord {
            iter: k,
            dual_value: dual_objective(self.model, lambda, self.eta),
            slack_score: score,
            elapsed_ms: if self.opts.timing {
                self.start.elapsed().as_secs_f64() * 1e3
            } else {
                0.0
            },
        };
        observer(&Checkpoint { record: &record, lambda });
        self.records.push(record);
        if self.best.as_ref().map_or(true, |(_, _, s)| score < *s) {
            self.best = Some((lambda.clone(), k, score));
        }
        self.iterations = k;
        self.last = Some(lambda.clone());
        self.opts.stop_slack_score.is_some_and(|t| score <= t)
    }

    fn finish(self) -> SolveTrace {
        let (best_lambda, best_iter, best_score) = self.best.expect("initial iterate is always recorded");
        SolveTrace {
            algorithm: self.algorithm,
            eta: self.eta,
            records: self.records,
            iterations: self.iterations,
            final_lambda: self.last.expect("initial iterate is always recorded"),
            best_lambda,
            best_iter,
            best_score,
            improvement_violations: self.violations,
        }
    }
}

/// Draws a vertex with probability `|N_i| / N` by drawing one of the `2m`
/// (edge, endpoint) blocks uniformly.
fn sample_vertex_by_degree(model: &Model, rng: &mut SeededRng) -> usize {
    let inc = Incidence::from_block(rng.gen_range(0..model.num_blocks()));
    model.endpoint(inc.edge, inc.side)
}

fn sample_edge_block(model: &Model, rng: &mut SeededRng) -> Incidence {
    Incidence::from_block(rng.gen_range(0..model.num_blocks()))
}

fn run_standard(
    model: &Model,
    kind: UpdateKind,
    eta: f64,
    iters: usize,
    rng: &mut SeededRng,
    rec: &mut Recorder<'_>,
    observer: &mut dyn FnMut(&Checkpoint<'_>),
) {
    let mut lambda = DualVector::zeros(model);
    if rec.record(0, &lambda, observer) {
        return;
    }
    for k in 0..iters {
        let before = rec.opts.check_improvement.then(|| dual_objective(model, &lambda, eta));
        let bound = match kind {
            UpdateKind::Emp | UpdateKind::GradStep => {
                let inc = sample_edge_block(model, rng);
                let block = match kind {
                    UpdateKind::Emp => emp_update(model, &lambda, eta, inc),
                    _ => crate::updates::block_grad_step(model, &lambda, eta, inc, 1.0 / eta),
                };
                let bound = before.map(|_| {
                    let l1: f64 = block_slack(model, &lambda, eta, inc).iter().map(|v| v.abs()).sum();
                    l1 * l1 / (4.0 * eta)
                });
                lambda.set_block(inc, &block);
                bound
            }
            UpdateKind::Smp => {
                let i = sample_vertex_by_degree(model, rng);
                let bound = before.map(|_| {
                    let sum: f64 = model
                        .incident(i)
                        .iter()
                        .map(|&inc| block_slack(model, &lambda, eta, inc).iter().map(|v| v.abs()).sum::<f64>().powi(2))
                        .sum();
                    sum / (8.0 * model.degree(i) as f64 * eta)
                });
                for (inc, block) in smp_update(model, &lambda, eta, i) {
                    lambda.set_block(inc, &block);
                }
                bound
            }
        };
        // The gradient step carries no exact-minimization bound.
        if let (Some(before), Some(bound), false) = (before, bound, kind == UpdateKind::GradStep) {
            if before - dual_objective(model, &lambda, eta) < bound - 1e-9 {
                rec.violations += 1;
            }
        }
        if rec.due(k + 1, iters) && rec.record(k + 1, &lambda, observer) {
            return;
        }
    }
}

fn extrapolate(lambda: &DualVector, v: &DualVector, theta: f64) -> DualVector {
    let mut y = lambda.clone();
    for (yi, vi) in y.as_mut_slice().iter_mut().zip(v.as_slice()) {
        *yi = theta * vi + (1.0 - theta) * *yi;
    }
    y
}

fn run_accel_edge(
    model: &Model,
    rule: EdgeRule,
    eta: f64,
    iters: usize,
    rng: &mut SeededRng,
    rec: &mut Recorder<'_>,
    observer: &mut dyn FnMut(&Checkpoint<'_>),
) {
    let mut lambda = DualVector::zeros(model);
    let mut v = DualVector::zeros(model);
    let mut theta_state = ThetaState::default();
    let q = model.num_blocks() as f64;
    if rec.record(0, &lambda, observer) {
        return;
    }
    for k in 0..iters {
        let theta = theta_state.advance();
        let y = extrapolate(&lambda, &v, theta);
        let inc = sample_edge_block(model, rng);
        let nu = block_slack(model, &y, eta, inc);
        let block = match rule {
            EdgeRule::Emp => emp_update(model, &y, eta, inc),
            EdgeRule::GradStep => y.block(inc).iter().zip(&nu).map(|(l, n)| l + n / eta).collect(),
        };
        lambda.set_block(inc, &block);
        let step = 1.0 / (q * eta * theta);
        for (vb, n) in v.block_mut(inc).iter_mut().zip(&nu) {
            *vb += step * n;
        }
        if rec.due(k + 1, iters) && rec.record(k + 1, &lambda, observer) {
            return;
        }
    }
}

fn run_accel_star(
    model: &Model,
    eta: f64,
    iters: usize,
    rng: &mut SeededRng,
    rec: &mut Recorder<'_>,
    observer: &mut dyn FnMut(&Checkpoint<'_>),
) {
    let stats = model.degree_stats();
    let total = stats.total as f64;
    let min_degree = stats.min_degree as f64;
    let denom = rec.opts.smp_v_denominator;
    let mut lambda = DualVector::zeros(model);
    let mut v = DualVector::zeros(model);
    let mut theta_state = ThetaState::default();
    if rec.record(0, &lambda, observer) {
        return;
    }
    for k in 0..iters {
        let theta = theta_state.advance();
        let y = extrapolate(&lambda, &v, theta);
        let i = sample_vertex_by_degree(model, rng);
        let p = stats.degrees[i] as f64 / total;
        let step = min_degree / (denom * p * theta * eta * total);
        for (inc, block) in smp_update(model, &y, eta, i) {
            let nu = block_slack(model, &y, eta, inc);
            lambda.set_block(inc, &block);
            for (vb, n) in v.block_mut(inc).iter_mut().zip(&nu) {
                *vb += step * n;
            }
        }
        if rec.due(k + 1, iters) && rec.record(k + 1, &lambda, observer) {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{erdos_renyi_potts, random_costs_on, Side};

    #[test]
    fn theta_golden_values() {
        let t0 = theta_next(1.0);
        assert!((t0 - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        let mut rng = seeded_rng(3);
        for _ in 0..1000 {
            let prev: f64 = rng.gen_range(1e-6..=1.0);
            let t = theta_next(prev);
            assert!(t > 0.0 && t < 1.0);
            assert!((t * t - (1.0 - t) * prev * prev).abs() <= 1e-14);
        }
    }

    #[test]
    fn delta_product_bounds() {
        // Both offsets hold numerically; (k + 3) is the tighter one.
        let mut state = ThetaState::default();
        let mut prev_delta = 1.0;
        for k in 0..=10_000usize {
            state.advance();
            assert!(state.delta <= prev_delta);
            assert!(state.delta <= 4.0 / ((k + 3) * (k + 3)) as f64);
            assert!(state.delta <= 4.0 / ((k + 2) * (k + 2)) as f64);
            prev_delta = state.delta;
        }
    }

    #[test]
    fn eta_formulas() {
        assert!((eta_for_epsilon(1, 2, 2, 1.0).unwrap() - 12.0 * 2f64.ln()).abs() < 1e-12);
        assert!((eta_for_epsilon(1, 2, 2, 1.0).unwrap() - 8.317766).abs() < 1e-6);
        assert!((eta_for_epsilon(1, 2, 2, 2.0).unwrap() * 2.0 - eta_for_epsilon(1, 2, 2, 1.0).unwrap()).abs() < 1e-12);
        assert!((eta_for_epsilon(253, 100, 3, 0.1).unwrap() - 15512.4055).abs() < 1e-3);
        assert!(eta_for_epsilon(1, 2, 2, 0.0).is_err());

        let r = eta_for_rounding(1, 2, 2, 1.0).unwrap();
        assert!((r - 48.0 * (3f64.ln() + 2f64.ln())).abs() < 1e-12);
        assert!((r - 86.00).abs() < 0.01);
        assert!((eta_for_rounding(1, 2, 2, 2.0).unwrap() * 2.0 - r).abs() < 1e-12);
        assert!(eta_for_rounding(1, 2, 2, -1.0).is_err());
    }

    #[test]
    fn budget_examples() {
        let g1 = g_constant(1, 2, 2, 1.0, 1.0);
        assert!((g1 - 144.0 * (1.0 + 2f64.ln())).abs() < 1e-9);
        assert_eq!(iteration_budget(1, 2, 2, 1.0, 1.0, 1.0).unwrap(), 488);
        let k1 = (4.0f64).sqrt() * g_constant(3, 4, 3, 5.0, 0.7) / 0.3;
        let k2 = (4.0f64).sqrt() * g_constant(3, 4, 3, 5.0, 0.7) / 0.15;
        assert!((k2 - 2.0 * k1).abs() < 1e-9);
        // Golden search over log η lands on η = log d / ‖C‖∞.
        let (d, c) = (3usize, 0.7);
        let (mut lo, mut hi) = (-5.0f64, 5.0f64);
        for _ in 0..200 {
            let a = lo + (hi - lo) / 3.0;
            let b = hi - (hi - lo) / 3.0;
            if g_constant(3, 4, d, a.exp(), c) < g_constant(3, 4, d, b.exp(), c) {
                hi = b;
            } else {
                lo = a;
            }
        }
        assert!(((lo.exp()) - (d as f64).ln() / c).abs() < 1e-6);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sinkhorn".parse::<Algorithm>().is_err());
    }

    #[test]
    fn zero_iterations_return_zero() {
        let m = erdos_renyi_potts(8, 0.4, 3, 1).unwrap();
        for a in Algorithm::ALL {
            let t = solve(&m, a, 10.0, 0, 5, &SolverOptions::default()).unwrap();
            assert!(t.final_lambda.as_slice().iter().all(|&v| v == 0.0));
            assert_eq!(t.records.len(), 1);
            assert_eq!(t.records[0].dual_value, dual_objective(&m, &DualVector::zeros(&m), 10.0));
            assert_eq!(t.best_score, t.records[0].slack_score);
        }
    }

    #[test]
    fn zero_costs_stay_at_zero() {
        let m = random_costs_on(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], 3, 0.0, 0).unwrap();
        for a in Algorithm::ALL {
            let t = solve(&m, a, 10.0, 50, 9, &SolverOptions::default()).unwrap();
            assert!(t.final_lambda.as_slice().iter().all(|&v| v == 0.0), "{a}");
            let l0 = t.records[0].dual_value;
            assert!(t.records.iter().all(|r| r.dual_value == l0));
        }
    }

    #[test]
    fn standard_mp_descends_and_keeps_best() {
        for seed in 0..10 {
            let m = erdos_renyi_potts(10, 0.3, 3, seed).unwrap();
            for kind in [UpdateKind::Emp, UpdateKind::Smp] {
                let opts = SolverOptions { check_improvement: true, ..Default::default() };
                let algo = if kind == UpdateKind::Emp { Algorithm::Emp } else { Algorithm::Smp };
                let t = solve(&m, algo, 20.0, 100, seed, &opts).unwrap();
                for w in t.records.windows(2) {
                    assert!(w[1].dual_value <= w[0].dual_value + 1e-10);
                }
                assert_eq!(t.improvement_violations, 0);
                let min = t.records.iter().map(|r| r.slack_score).fold(f64::INFINITY, f64::min);
                assert_eq!(t.best_score, min);
                assert!(t.records.iter().all(|r| r.slack_score >= 0.0));
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let m = erdos_renyi_potts(12, 0.3, 3, 4).unwrap();
        for a in Algorithm::ALL {
            let x = solve(&m, a, 50.0, 200, 77, &SolverOptions::default()).unwrap();
            let y = solve(&m, a, 50.0, 200, 77, &SolverOptions::default()).unwrap();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn stride_and_stop() {
        let m = erdos_renyi_potts(10, 0.3, 3, 2).unwrap();
        let opts = SolverOptions { stride: 7, ..Default::default() };
        let t = solve(&m, Algorithm::AccelEmp, 10.0, 30, 1, &opts).unwrap();
        let iters: Vec<usize> = t.records.iter().map(|r| r.iter).collect();
        assert_eq!(iters, vec![0, 7, 14, 21, 28, 30]);

        let opts = SolverOptions { stop_slack_score: Some(1e-3), ..Default::default() };
        let t = solve(&m, Algorithm::Smp, 5.0, 100_000, 1, &opts).unwrap();
        assert!(t.iterations < 100_000);
        assert!(t.last().slack_score <= 1e-3);
    }

    #[test]
    fn grad_rule_swapped_for_emp_reproduces_accel_emp() {
        let m = erdos_renyi_potts(9, 0.4, 3, 6).unwrap();
        let a = accel_emp(&m, 30.0, 150, 12).unwrap();
        let b = accel_edge(&m, EdgeRule::Emp, 30.0, 150, 12, &SolverOptions::default()).unwrap();
        assert_eq!(a, b);
        let c = accel_block_grad(&m, 30.0, 150, 12).unwrap();
        let d = accel_edge(&m, EdgeRule::GradStep, 30.0, 150, 12, &SolverOptions::default()).unwrap();
        assert_eq!(c, d);
        assert_ne!(a.final_lambda, c.final_lambda);
    }

    // Straight-line transcription of the accelerated loops for a single
    // iteration, written against raw vectors and the model's cost tables.
    fn transliterated_first_step(m: &Model, eta: f64, seed: u64, star: bool) -> Vec<f64> {
        let d = m.d();
        let lse = |xs: &[f64]| {
            let mx = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            mx + xs.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
        };
        let mut rng = seeded_rng(seed);
        let lambda = vec![0.0; m.dual_dim()];
        let v = vec![0.0; m.dual_dim()];
        let theta = (-1.0 + 5f64.sqrt()) / 2.0;
        let y: Vec<f64> = v.iter().zip(&lambda).map(|(v, l)| theta * v + (1.0 - theta) * l).collect();
        let mut next = lambda.clone();
        let b = rng.gen_range(0..m.num_blocks());
        let targets: Vec<Incidence> = if star {
            let inc = Incidence::from_block(b);
            m.incident(m.endpoint(inc.edge, inc.side)).to_vec()
        } else {
            vec![Incidence::from_block(b)]
        };
        let i = m.endpoint(targets[0].edge, targets[0].side);
        let mut a: Vec<f64> = (0..d).map(|x| -eta * m.vertex_cost(i)[x]).collect();
        for inc in m.incident(i) {
            for x in 0..d {
                a[x] += eta * y[inc.block() * d + x];
            }
        }
        let za = lse(&a);
        let log_mu: Vec<f64> = a.iter().map(|v| v - za).collect();
        let log_s: Vec<Vec<f64>> = targets
            .iter()
            .map(|t| {
                let lo = 2 * t.edge * d;
                let hi = (2 * t.edge + 1) * d;
                let c = m.edge_cost(t.edge);
                let mut logits = vec![0.0; d * d];
                for p in 0..d {
                    for q in 0..d {
                        logits[p * d + q] = -eta * (c[p * d + q] + y[lo + p] + y[hi + q]);
                    }
                }
                let z = lse(&logits);
                (0..d)
                    .map(|x| {
                        let row: Vec<f64> = (0..d)
                            .map(|o| match t.side {
                                Side::Low => logits[x * d + o],
                                Side::High => logits[o * d + x],
                            })
                            .collect();
                        lse(&row) - z
                    })
                    .collect()
            })
            .collect();
        for (t, s) in targets.iter().zip(&log_s) {
            for x in 0..d {
                let idx = t.block() * d + x;
                next[idx] = if star {
                    let prod = log_mu[x] + log_s.iter().map(|s| s[x]).sum::<f64>();
                    y[idx] + s[x] / eta - prod / (eta * (targets.len() as f64 + 1.0))
                } else {
                    y[idx] + (s[x] - log_mu[x]) / (2.0 * eta)
                };
            }
        }
        next
    }

    #[test]
    fn first_step_matches_transliteration() {
        for seed in 0..5 {
            let m = erdos_renyi_potts(7, 0.5, 3, seed).unwrap();
            let eta = 25.0;
            let got = accel_emp(&m, eta, 1, seed).unwrap().final_lambda;
            let want = transliterated_first_step(&m, eta, seed, false);
            for (a, b) in got.as_slice().iter().zip(&want) {
                assert!((a - b).abs() <= 1e-12);
            }
            let got = accel_smp(&m, eta, 1, seed).unwrap().final_lambda;
            let want = transliterated_first_step(&m, eta, seed, true);
            for (a, b) in got.as_slice().iter().zip(&want) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn regular_graph_samples_vertices_uniformly() {
        // 4-cycle: every vertex has degree 2.
        let m = random_costs_on(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], 2, 1.0, 0).unwrap();
        let mut rng = seeded_rng(1);
        let mut counts = [0usize; 4];
        let draws = 40_000;
        for _ in 0..draws {
            counts[sample_vertex_by_degree(&m, &mut rng)] += 1;
        }
        for c in counts {
            // sd ≈ 87
            assert!((c as f64 - draws as f64 / 4.0).abs() < 500.0, "{counts:?}");
        }
    }
}
