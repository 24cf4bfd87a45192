//! Constrained design problem: welded beam cost against deflection.
//!
//! The Lipschitz constants here are large compared with the objective ranges,
//! so a full run to the default tolerances takes a very large number of
//! boxes. This example stops after a fixed number of iterations and reports
//! what it has.
//!
//!     cargo run --release --example welded_beam

use std::collections::BTreeMap;

use ppbnb::{get_problem, solve, SolverConfig};

fn main() -> ppbnb::Result<()> {
    let prob = get_problem("welded-beam", &BTreeMap::new())?;
    let cfg = SolverConfig {
        tol_eps: 0.3,
        tol_delta: 0.02,
        max_iterations: 16,
        ..SolverConfig::default()
    };
    let result = solve(&prob, &cfg)?;
    for t in &result.trace {
        println!(
            "iter {:>2}: live {:>7}  w {:.4}  d {:.4}  |U| {}",
            t.iteration, t.live_boxes, t.w, t.d, t.upper_archive
        );
    }
    for s in &result.state.upper_archive {
        let e = prob.evaluate(&s.x)?;
        println!(
            "h={:.4} l={:.4} t={:.4} b={:.4}  cost {:.3}  deflection {:.5}  feasible {}",
            s.x[0], s.x[1], s.x[2], s.x[3], s.raw[0], s.raw[1], e.feasible
        );
    }
    println!("{} with margin {:.3}", result.reason, result.state.efficiency_margin());
    Ok(())
}
