#![allow(dead_code)]

use mapmp::model::{random_costs_on, seeded_rng, SeededRng};
use mapmp::{DualVector, Model};
use rand::Rng;

/// Random connected graph: a random recursive tree plus each remaining
/// pair with probability `extra`.
pub fn random_edges(rng: &mut SeededRng, n: usize, extra: f64) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|k| (rng.gen_range(0..k), k)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && rng.gen::<f64>() < extra {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges
}

pub fn random_model(seed: u64, max_n: usize, max_d: usize, extra: f64) -> Model {
    let mut rng = seeded_rng(seed);
    let n = rng.gen_range(2..=max_n);
    let d = rng.gen_range(2..=max_d);
    let edges = random_edges(&mut rng, n, extra);
    random_costs_on(n, &edges, d, 1.0, rng.gen()).unwrap()
}

pub fn random_lambda(model: &Model, rng: &mut SeededRng, scale: f64) -> DualVector {
    let v = (0..model.dual_dim()).map(|_| rng.gen_range(-scale..=scale)).collect();
    DualVector::from_vec(model, v).unwrap()
}
