//! Exact references for small instances: exhaustive MAP, min-sum dynamic
//! programming on forests, the local-polytope LP, and the integral gap.

use crate::error::{Error, Result};
use crate::lp::solve_equality_lp;
use crate::model::{Assignment, Model, Side};
use crate::objective::{in_local_polytope, MarginalVector};

/// Largest label space `d^n` that [`brute_force_map`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;
/// Largest primal dimension that [`lp_solve_l2`] accepts.
pub const LP_LIMIT: usize = 5000;
/// Values closer than this are treated as ties.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce {
    pub assignment: Assignment,
    pub value: f64,
    /// Smallest value over all other assignments.
    pub second_best: Option<f64>,
    pub unique: bool,
}

fn label_space(model: &Model) -> Option<u64> {
    (model.d() as u64).checked_pow(model.n() as u32)
}

/// Exhaustive minimization in lexicographic order (vertex 0 most
/// significant); the first minimizer found wins ties.
pub fn brute_force_map(model: &Model) -> Result<BruteForce> {
    let total = label_space(model).filter(|&s| s <= BRUTE_FORCE_LIMIT).ok_or_else(|| Error::TooLarge {
        oracle: "brute force",
        detail: format!("d^n = {}^{} exceeds {BRUTE_FORCE_LIMIT}", model.d(), model.n()),
    })?;
    let (n, d) = (model.n(), model.d());
    let mut labels = vec![0usize; n];
    let mut best = (f64::INFINITY, labels.clone());
    let mut second = f64::INFINITY;
    for _ in 0..total {
        let value = evaluate(model, &labels);
        if value < best.0 {
            second = second.min(best.0);
            best = (value, labels.clone());
        } else {
            second = second.min(value);
        }
        for i in (0..n).rev() {
            labels[i] += 1;
            if labels[i] < d {
                break;
            }
            labels[i] = 0;
        }
    }
    let second_best = second.is_finite().then_some(second);
    Ok(BruteForce {
        assignment: Assignment::new(best.1),
        value: best.0,
        unique: second_best.map_or(true, |s| s > best.0 + TIE_TOL),
        second_best,
    })
}

fn evaluate(model: &Model, x: &[usize]) -> f64 {
    let d = model.d();
    let vertex: f64 = x.iter().enumerate().map(|(i, &l)| model.vertex_cost(i)[l]).sum();
    let edge: f64 = model
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| model.edge_cost(e)[x[i] * d + x[j]])
        .sum();
    vertex + edge
}

/// Min-sum dynamic programming on a forest, each component rooted at its
/// smallest vertex.
pub fn tree_map(model: &Model) -> Result<(Assignment, f64)> {
    if !model.is_forest() {
        return Err(Error::NotAForest);
    }
    let (n, d) = (model.n(), model.d());
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut roots = Vec::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        roots.push(root);
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            order.push(u);
            for inc in model.incident(u) {
                let w = model.endpoint(inc.edge, inc.side.other());
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some((u, inc.edge));
                    stack.push(w);
                }
            }
        }
    }

    // belief[u][x]: cost of the subtree under u with u labelled x.
    let mut belief: Vec<Vec<f64>> = (0..n).map(|i| model.vertex_cost(i).to_vec()).collect();
    // choice[u][x_parent]: best label of u given the parent's label.
    let mut choice = vec![vec![0usize; d]; n];
    for &u in order.iter().rev() {
        let Some((p, e)) = parent[u] else { continue };
        let u_is_low = model.endpoint(e, Side::Low) == u;
        let table = model.edge_cost(e);
        let mut msg = vec![0.0; d];
        for xp in 0..d {
            let mut best = (f64::INFINITY, 0);
            for xu in 0..d {
                let pair = if u_is_low { table[xu * d + xp] } else { table[xp * d + xu] };
                let v = belief[u][xu] + pair;
                if v < best.0 {
                    best = (v, xu);
                }
            }
            msg[xp] = best.0;
            choice[u][xp] = best.1;
        }
        for xp in 0..d {
            belief[p][xp] += msg[xp];
        }
    }
    let mut labels = vec![0usize; n];
    let mut total = 0.0;
    for &r in &roots {
        let (x, v) = belief[r]
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (x, v)| if v < acc.1 { (x, v) } else { acc });
        labels[r] = x;
        total += v;
    }
    for &u in &order {
        if let Some((p, _)) = parent[u] {
            labels[u] = choice[u][labels[p]];
        }
    }
    Ok((Assignment::new(labels), total))
}

/// Solves `min ⟨C, μ⟩` over the local polytope with the dense simplex.
pub fn lp_solve_l2(model: &Model) -> Result<(MarginalVector, f64)> {
    let (n, m, d) = (model.n(), model.m(), model.d());
    let vars = model.primal_dim();
    if vars > LP_LIMIT {
        return Err(Error::TooLarge {
            oracle: "local polytope LP",
            detail: format!("{vars} variables exceeds {LP_LIMIT}"),
        });
    }
    let edge_var = |e: usize, a: usize, b: usize| n * d + e * d * d + a * d + b;
    let rows = n + 2 * m * d;
    let mut a = vec![0.0; rows * vars];
    let mut b = vec![0.0; rows];
    for i in 0..n {
        for x in 0..d {
            a[i * vars + i * d + x] = 1.0;
        }
        b[i] = 1.0;
    }
    for e in 0..m {
        for side in [Side::Low, Side::High] {
            let i = model.endpoint(e, side);
            for x in 0..d {
                let r = n + (2 * e + side.index()) * d + x;
                for y in 0..d {
                    let col = match side {
                        Side::Low => edge_var(e, x, y),
                        Side::High => edge_var(e, y, x),
                    };
                    a[r * vars + col] = 1.0;
                }
                a[r * vars + i * d + x] = -1.0;
            }
        }
    }
    let mut c = Vec::with_capacity(vars);
    for i in 0..n {
        c.extend_from_slice(model.vertex_cost(i));
    }
    for e in 0..m {
        c.extend_from_slice(model.edge_cost(e));
    }
    let sol = solve_equality_lp(&a, &b, &c)?;
    let mu = MarginalVector::new(model, sol.x[..n * d].to_vec(), sol.x[n * d..].to_vec())?;
    if !in_local_polytope(model, &mu, 1e-8) {
        return Err(Error::Numerical("LP solution failed the local polytope check".into()));
    }
    Ok((mu, sol.objective))
}

/// Integral suboptimality gap: second-best assignment value minus the MAP
/// value. Stands in for the LP vertex gap on instances where the
/// relaxation is tight and integral vertices dominate (trees).
pub fn gap_estimate(model: &Model) -> Result<f64> {
    let bf = brute_force_map(model)?;
    match (bf.unique, bf.second_best) {
        (true, Some(second)) => Ok(second - bf.value),
        _ => Err(Error::NonUniqueOptimum),
    }
}
