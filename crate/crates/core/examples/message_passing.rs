//! Run every solver on one random instance and compare dual values and
//! slack scores after the same number of block updates.

use mapmp::{default_edge_prob, erdos_renyi_potts, solve, Algorithm, SolverOptions};

fn main() -> mapmp::Result<()> {
    let n = 30;
    let model = erdos_renyi_potts(n, default_edge_prob(n), 3, 17)?;
    let eta = 100.0;
    let iters = 5_000;
    println!("n = {n}, m = {}, eta = {eta}, {iters} iterations", model.m());

    let opts = SolverOptions { stride: 1_000, ..SolverOptions::default() };
    for algo in Algorithm::ALL {
        let trace = solve(&model, algo, eta, iters, 3, &opts)?;
        let last = trace.last();
        println!(
            "{:>10}  L = {:.6}  slack score = {:.4e}  best at {}",
            algo.name(),
            last.dual_value,
            last.slack_score,
            trace.best_iter
        );
    }
    Ok(())
}
