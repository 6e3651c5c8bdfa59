//! Entropy-regularized MAP inference on pairwise discrete Markov random
//! fields.
//!
//! The crate covers the dual objective and primal recovery ([`objective`]),
//! closed-form block updates ([`updates`]), standard and accelerated
//! randomized message passing ([`schedulers`]), projection onto the local
//! polytope and rounding ([`projection`]), exact small-scale oracles
//! ([`oracle`]), file formats ([`io`]) and the benchmark protocol
//! ([`bench`]).
//!
//! ```
//! use mapmp::{erdos_renyi_potts, solve, Algorithm, SolverOptions};
//!
//! let model = erdos_renyi_potts(10, 0.4, 3, 7).unwrap();
//! let trace = solve(&model, Algorithm::AccelEmp, 10.0, 200, 1, &SolverOptions::default()).unwrap();
//! assert!(trace.last().dual_value <= trace.records[0].dual_value);
//! ```

pub mod bench;
pub mod error;
pub mod io;
pub mod lp;
pub mod model;
pub mod objective;
pub mod oracle;
pub mod projection;
pub mod schedulers;
pub mod updates;

pub use error::{Error, Result};
pub use model::{default_edge_prob, erdos_renyi_potts, random_tree_potts, Assignment, Incidence, Model, Side};
pub use objective::{dual_objective, recover_primal, slack, DualVector, MarginalVector, SlackVector};
pub use schedulers::{solve, Algorithm, SolveTrace, SolverOptions};
