//! Branch and bound for multiobjective problems that targets properly
//! Pareto optimal solutions: points whose trade-offs against every other
//! efficient point stay bounded.
//!
//! Boxes are bisected breadth-first, bounded with Lipschitz constants in
//! normalized objective space, and discarded when an upper bound dominates
//! their lower bound under the cone order with parameter `eps`. At `eps = 0`
//! the order is Pareto dominance and the solver approximates the whole
//! Pareto set; larger `eps` keeps only the knee regions.
//!
//! ```no_run
//! use std::collections::BTreeMap;
//! use ppbnb::{get_problem, solve, SolverConfig};
//!
//! let prob = get_problem("MOP", &BTreeMap::new()).unwrap();
//! let result = solve(&prob, &SolverConfig::default()).unwrap();
//! for s in &result.state.upper_archive {
//!     println!("{:?} -> {:?}", s.x, s.raw);
//! }
//! ```

pub mod bounding;
pub mod cone;
pub mod error;
pub mod geometry;
pub mod io;
pub mod moea;
pub mod oracle;
pub mod problems;
pub mod solver;

pub use bounding::{FeasibilityStatus, UpperBoundMode, UpperCandidate};
pub use cone::{eps_dominates, filter_non_eps_dominated, pareto_dominates, ConeEps};
pub use error::{Error, Result};
pub use geometry::SearchBox;
pub use moea::MiniMoeaConfig;
pub use oracle::{build_grid_oracle, GridOracle};
pub use problems::{get_problem, ProblemDefinition, ReferencePoints};
pub use solver::{solve, solve_with, RunResult, SolverConfig, TerminationReason};
