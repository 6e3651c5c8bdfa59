//! Project recovered marginals onto the local polytope, measure how far the
//! edge blocks moved, and round to an integral assignment.

use mapmp::objective::{in_local_polytope, primal_objective};
use mapmp::oracle::brute_force_map;
use mapmp::projection::{proj_local, round_to_transport, vertex_round};
use mapmp::schedulers::{eta_for_rounding, solve};
use mapmp::{random_tree_potts, recover_primal, slack, Algorithm, SolverOptions};

fn main() -> mapmp::Result<()> {
    let plan = round_to_transport(&[1.0, 0.0, 0.0, 0.0], &[0.5, 0.5], &[0.5, 0.5])?;
    println!("rounded plan: {plan:?}");

    let model = random_tree_potts(8, 3, 5)?;
    let exact = brute_force_map(&model)?;
    let gap = exact.second_best.unwrap() - exact.value;
    let eta = eta_for_rounding(model.m(), model.n(), model.d(), gap)?;
    println!("gap {gap:.4}, eta for rounding {eta:.1}");

    let opts = SolverOptions { stride: 10, stop_slack_score: Some(1e-6), ..SolverOptions::default() };
    let trace = solve(&model, Algorithm::AccelEmp, eta, 100_000, 0, &opts)?;
    let lambda = trace.output();
    let mu = recover_primal(&model, lambda, eta);
    let hat = proj_local(&model, &mu)?;
    println!("stopped after {} iterations", trace.iterations);
    println!("projection in local polytope: {}", in_local_polytope(&model, &hat, 1e-8));
    println!(
        "edge l1 movement {:.3e} <= 2 sum ||nu||_1 = {:.3e}",
        hat.edge_l1_distance(&mu),
        2.0 * slack(&model, lambda, eta).l1()
    );
    println!("projected primal {:.6}, MAP {:.6}", primal_objective(&model, &hat)?, exact.value);
    let rounded = vertex_round(&hat);
    println!("rounded {:?}, MAP {:?}", rounded.labels(), exact.assignment.labels());
    Ok(())
}
