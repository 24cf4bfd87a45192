//! Five objectives and seven constraints: the storm drainage benchmark.
//! Prints the ranges of the returned trade-offs per objective.
//!
//!     cargo run --release --example water_resources

use std::collections::BTreeMap;

use ppbnb::{get_problem, solve_with, SolverConfig};

fn main() -> ppbnb::Result<()> {
    let prob = get_problem("water-resources", &BTreeMap::new())?;
    let cfg = SolverConfig {
        tol_eps: 0.1,
        tol_delta: 0.05 * prob.domain().diameter(),
        max_iterations: 30,
        ..SolverConfig::default()
    };
    let result = solve_with(&prob, &cfg, |v| {
        eprintln!("iter {:>2}: live {:>6}  d {:.4}  |U| {}", v.iteration, v.live.len(), v.d, v.upper_archive.len());
    })?;
    let front = &result.state.upper_archive;
    println!("{} solutions ({})", front.len(), result.reason);
    for j in 0..prob.n_objectives() {
        let vals = front.iter().map(|s| s.raw[j]);
        let lo = vals.clone().fold(f64::INFINITY, f64::min);
        let hi = vals.fold(f64::NEG_INFINITY, f64::max);
        println!("f{}: [{lo:.4e}, {hi:.4e}]", j + 1);
    }
    Ok(())
}
