//! Three-objective knees on DEB3DK, written as value paths (one line per
//! solution, one column per normalized objective) for a parallel-coordinates
//! plot.
//!
//!     cargo run --release --example deb3dk_value_paths -- out/deb3dk

use std::collections::BTreeMap;
use std::path::PathBuf;

use ppbnb::io::emit_plot_data;
use ppbnb::{get_problem, solve, SolverConfig};

fn main() -> ppbnb::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/deb3dk".into()));
    let prob = get_problem("DEB3DK", &BTreeMap::new())?;
    let cfg = SolverConfig {
        tol_eps: 0.05,
        tol_delta: 0.05,
        max_iterations: 40,
        ..SolverConfig::default()
    };
    let result = solve(&prob, &cfg)?;
    std::fs::create_dir_all(&dir).map_err(|e| ppbnb::Error::io(&dir, e))?;
    for path in emit_plot_data(&dir, &result, None)? {
        println!("wrote {}", path.display());
    }
    println!(
        "{} solutions, {} live boxes, {}",
        result.state.upper_archive.len(),
        result.state.boxes.len(),
        result.reason
    );
    Ok(())
}
