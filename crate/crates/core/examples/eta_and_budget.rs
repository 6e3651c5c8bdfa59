//! Choosing η for a target accuracy or for exact rounding, and the
//! iteration budget the convergence analysis attaches to it.

use mapmp::oracle::gap_estimate;
use mapmp::schedulers::{eta_for_epsilon, eta_for_rounding, iteration_budget};
use mapmp::random_tree_potts;

fn main() -> mapmp::Result<()> {
    let model = random_tree_potts(8, 3, 1)?;
    let (m, n, d) = (model.m(), model.n(), model.d());
    for eps in [1.0, 0.5, 0.2, 0.1] {
        let eta = eta_for_epsilon(m, n, d, eps)?;
        let k = iteration_budget(m, n, d, eta, eps / 10.0, model.cost_inf_norm())?;
        println!("epsilon {eps:>4}: eta {eta:>9.2}, budget {k:.3e} iterations");
    }
    let gap = gap_estimate(&model)?;
    println!("gap {gap:.4} -> eta for rounding {:.1}", eta_for_rounding(m, n, d, gap)?);
    Ok(())
}
