//! Brute-force reference fronts from a grid over the domain, and how the
//! proper front shrinks as eps grows.
//!
//!     cargo run --release --example grid_oracle

use std::collections::BTreeMap;

use ppbnb::{build_grid_oracle, get_problem};

fn main() -> ppbnb::Result<()> {
    let params = BTreeMap::from([("K".to_string(), 4.0)]);
    let prob = get_problem("DEB2DK", &params)?;
    let oracle = build_grid_oracle(&prob, 64)?;
    println!(
        "{} grid points, {} on the Pareto front",
        oracle.evaluated(),
        oracle.front_indices().len()
    );
    for eps in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9] {
        let proper = oracle.proper_indices(eps, None);
        println!("eps {eps:<4}: {:>4} points", proper.len());
    }
    Ok(())
}
