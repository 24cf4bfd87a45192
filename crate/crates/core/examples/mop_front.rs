//! Whole Pareto front versus the eps-proper part on the two-objective MOP
//! benchmark.
//!
//!     cargo run --release --example mop_front

use std::collections::BTreeMap;

use ppbnb::{get_problem, solve, ConeEps, SolverConfig, UpperBoundMode};

fn main() -> ppbnb::Result<()> {
    let prob = get_problem("MOP", &BTreeMap::new())?;
    for eps in [0.0, 0.75] {
        let cfg = SolverConfig {
            proper_eps: ConeEps::new(eps)?,
            tol_eps: 0.01,
            tol_delta: 0.01,
            ub_mode: UpperBoundMode::Midpoint,
            ..SolverConfig::default()
        };
        let result = solve(&prob, &cfg)?;
        let front = &result.state.upper_archive;
        let (lo, hi) = front.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.raw[0]), hi.max(s.raw[0]))
        });
        println!(
            "eps {eps:<4}: {} after {} iterations, {} solutions, f1 in [{lo:.3}, {hi:.3}], margin {:.4}",
            result.reason,
            result.state.iteration,
            front.len(),
            result.state.efficiency_margin(),
        );
    }
    Ok(())
}
