mod common;

use proptest::prelude::*;

use common::{random_lambda, random_model};
use mapmp::io::{emit_model, emit_uai, load_model, parse_uai};
use mapmp::model::seeded_rng;
use mapmp::objective::{in_local_polytope, in_slack_polytope, regularized_primal};
use mapmp::oracle::lp_solve_l2;
use mapmp::projection::{proj_local, round_to_transport, vertex_round};
use mapmp::schedulers::{solve, theta_next};
use mapmp::{dual_objective, recover_primal, slack, Algorithm, DualVector, SolverOptions};

fn lambda_for(model: &mapmp::Model, seed: u64, scale: f64) -> DualVector {
    random_lambda(model, &mut seeded_rng(seed), scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn native_round_trip_is_exact(seed in any::<u64>(), scale in -12i32..12) {
        let model = random_model(seed, 9, 4, 0.3).scaled(2f64.powi(scale) * 1.37);
        prop_assert_eq!(load_model(&emit_model(&model)).unwrap(), model);
    }

    #[test]
    fn uai_round_trip_within_tolerance(seed in any::<u64>(), scale in 0.01f64..30.0) {
        let model = random_model(seed, 9, 4, 0.3).scaled(scale);
        let back = parse_uai(&emit_uai(&model)).unwrap();
        prop_assert_eq!(back.edges(), model.edges());
        for i in 0..model.n() {
            for (a, b) in back.vertex_cost(i).iter().zip(model.vertex_cost(i)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
        for e in 0..model.m() {
            for (a, b) in back.edge_cost(e).iter().zip(model.edge_cost(e)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>(), log_eta in -1.0f64..1.5) {
        let eta = 10f64.powf(log_eta);
        let model = random_model(seed, 5, 3, 0.4);
        let lambda = lambda_for(&model, seed ^ 1, 0.5);
        let nu = slack(&model, &lambda, eta);
        let h = 1e-5 / eta;
        for k in 0..model.dual_dim() {
            let mut p = lambda.clone();
            p.as_mut_slice()[k] += h;
            let mut m = lambda.clone();
            m.as_mut_slice()[k] -= h;
            let fd = (dual_objective(&model, &p, eta) - dual_objective(&model, &m, eta)) / (2.0 * h);
            prop_assert!((fd + nu.as_slice()[k]).abs() <= 1e-5 * (1.0 + nu.as_slice()[k].abs()));
        }
    }

    #[test]
    fn dual_is_convex(seed in any::<u64>(), t in 0.0f64..1.0, eta in 0.1f64..50.0) {
        let model = random_model(seed, 6, 3, 0.3);
        let a = lambda_for(&model, seed ^ 2, 2.0);
        let b = lambda_for(&model, seed ^ 3, 2.0);
        let mid: Vec<f64> = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| t * x + (1.0 - t) * y).collect();
        let mid = DualVector::from_vec(&model, mid).unwrap();
        let lhs = dual_objective(&model, &mid, eta);
        let rhs = t * dual_objective(&model, &a, eta) + (1.0 - t) * dual_objective(&model, &b, eta);
        prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn negated_dual_bounds_lp_from_below(seed in any::<u64>(), eta in 0.5f64..100.0) {
        let model = random_model(seed, 5, 3, 0.4);
        let (_, lp) = lp_solve_l2(&model).unwrap();
        let lambda = lambda_for(&model, seed ^ 4, 1.0);
        prop_assert!(-dual_objective(&model, &lambda, eta) <= lp + 1e-9);
    }

    #[test]
    fn recovered_primal_lies_in_own_slack_polytope(seed in any::<u64>(), eta in 0.1f64..100.0) {
        let model = random_model(seed, 7, 4, 0.3);
        let lambda = lambda_for(&model, seed ^ 5, 1.0);
        let mu = recover_primal(&model, &lambda, eta);
        prop_assert!(in_slack_polytope(&model, &mu, &slack(&model, &lambda, eta), 1e-10));
        let hat = proj_local(&model, &mu).unwrap();
        prop_assert!(in_local_polytope(&model, &hat, 1e-8));
        prop_assert_eq!(vertex_round(&hat), vertex_round(&mu));
    }

    #[test]
    fn regularized_weak_duality(seed in any::<u64>(), eta in 0.5f64..20.0) {
        // H carries a +1 per normalized block, hence the (n + m) / η offset.
        let model = random_model(seed, 5, 3, 0.4);
        let lambda = lambda_for(&model, seed ^ 6, 1.0);
        let (mu_star, _) = lp_solve_l2(&model).unwrap();
        let p = regularized_primal(&model, &mu_star, eta).unwrap();
        prop_assert!(-dual_objective(&model, &lambda, eta) <= p + (model.n() + model.m()) as f64 / eta + 1e-9);
    }

    #[test]
    fn transport_rounding_hits_marginals(seed in any::<u64>(), d in 2usize..7) {
        let mut rng = seeded_rng(seed);
        let mut draw = |k: usize| {
            let v: Vec<f64> = (0..k).map(|_| rand::Rng::gen::<f64>(&mut rng) + 1e-3).collect();
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect::<Vec<f64>>()
        };
        let (p, r, c) = (draw(d * d), draw(d), draw(d));
        let out = round_to_transport(&p, &r, &c).unwrap();
        for i in 0..d {
            prop_assert!((out[i * d..(i + 1) * d].iter().sum::<f64>() - r[i]).abs() < 1e-12);
            prop_assert!(((0..d).map(|k| out[k * d + i]).sum::<f64>() - c[i]).abs() < 1e-12);
        }
        prop_assert!(out.iter().all(|&x| x >= -1e-15));
    }

    #[test]
    fn standard_loops_never_increase_dual(seed in any::<u64>(), eta in 0.5f64..200.0, smp in any::<bool>()) {
        let model = random_model(seed, 8, 3, 0.3);
        let algo = if smp { Algorithm::Smp } else { Algorithm::Emp };
        let trace = solve(&model, algo, eta, 60, seed, &SolverOptions::default()).unwrap();
        for w in trace.records.windows(2) {
            prop_assert!(w[1].dual_value <= w[0].dual_value + 1e-10);
        }
    }

    #[test]
    fn theta_stays_in_unit_interval(prev in 1e-6f64..=1.0) {
        let t = theta_next(prev);
        prop_assert!(t > 0.0 && t < 1.0 && t < prev + 1e-15);
        prop_assert!((t * t - (1.0 - t) * prev * prev).abs() <= 1e-15);
    }
}
