//! Build a small model by hand, then evaluate the dual objective, its
//! gradient (minus the slack vector) and the recovered pseudo-marginals.

use mapmp::objective::{entropy, primal_objective, regularized_primal};
use mapmp::{dual_objective, recover_primal, slack, DualVector, Model};

fn main() -> mapmp::Result<()> {
    // Three vertices on a path, two labels, attractive couplings.
    let attract = vec![-1.0, 0.5, 0.5, -1.0];
    let model = Model::new(
        3,
        &[(0, 1), (1, 2)],
        2,
        vec![vec![0.0, 0.3], vec![0.0, 0.0], vec![0.2, 0.0]],
        vec![attract.clone(), attract],
    )?;
    let eta = 10.0;
    let lambda = DualVector::zeros(&model);

    println!("L(0) = {:.6}", dual_objective(&model, &lambda, eta));
    println!("lower bound on the LP value: {:.6}", -dual_objective(&model, &lambda, eta));

    let nu = slack(&model, &lambda, eta);
    println!("slack score sum ||nu||_1^2 = {:.6}", nu.score());

    let mu = recover_primal(&model, &lambda, eta);
    for i in 0..model.n() {
        println!("mu_{i} = {:?}", mu.vertex(i));
    }
    println!("<C, mu> = {:.6}", primal_objective(&model, &mu)?);
    println!("H(mu) = {:.6}", entropy(&mu)?);
    println!("regularized primal = {:.6}", regularized_primal(&model, &mu, eta)?);
    Ok(())
}
