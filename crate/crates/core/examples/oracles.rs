//! Exact reference solvers: brute force, tree dynamic programming and the
//! local polytope LP, on a tree (where all agree) and a frustrated cycle.

use mapmp::oracle::{brute_force_map, lp_solve_l2, tree_map};
use mapmp::{random_tree_potts, Error, Model};

fn main() -> mapmp::Result<()> {
    let tree = random_tree_potts(9, 3, 2)?;
    let bf = brute_force_map(&tree)?;
    let (dp, dp_value) = tree_map(&tree)?;
    let (_, lp) = lp_solve_l2(&tree)?;
    println!("tree: brute force {:.6}, DP {:.6}, LP {:.6}", bf.value, dp_value, lp);
    println!("assignments equal: {}", dp == bf.assignment);

    // Odd cycle of "disagree" couplings: the relaxation is loose.
    let disagree = vec![1.0, -1.0, -1.0, 1.0];
    let triangle = Model::new(
        3,
        &[(0, 1), (0, 2), (1, 2)],
        2,
        vec![vec![0.0; 2]; 3],
        vec![disagree.clone(), disagree.clone(), disagree],
    )?;
    let (_, lp) = lp_solve_l2(&triangle)?;
    println!("triangle: MAP {:.3}, LP {:.3}", brute_force_map(&triangle)?.value, lp);
    match tree_map(&triangle) {
        Err(Error::NotAForest) => println!("tree DP refuses the cycle"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
