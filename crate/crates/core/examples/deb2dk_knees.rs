//! Finds the knees of DEB2DK and groups the returned points into clusters.
//!
//!     cargo run --release --example deb2dk_knees -- 4

use std::collections::BTreeMap;

use ppbnb::oracle::knee_clusters;
use ppbnb::{get_problem, solve, SolverConfig};

fn main() -> ppbnb::Result<()> {
    let k: f64 = std::env::args().nth(1).map_or(4.0, |s| s.parse().expect("K must be a number"));
    let params = BTreeMap::from([("K".to_string(), k)]);
    let prob = get_problem("DEB2DK", &params)?;
    let cfg = SolverConfig {
        tol_eps: 0.01,
        tol_delta: 0.01,
        ..SolverConfig::default()
    };
    let result = solve(&prob, &cfg)?;
    let normalized: Vec<Vec<f64>> = result.state.upper_archive.iter().map(|s| s.normalized.clone()).collect();
    let clusters = knee_clusters(&normalized, 0.05);
    println!("{} solutions in {} clusters ({})", normalized.len(), clusters.len(), result.reason);
    for (i, c) in clusters.iter().enumerate() {
        // report the member closest to the ideal as the knee representative
        let best = c
            .iter()
            .copied()
            .min_by(|&a, &b| normalized[a].iter().sum::<f64>().total_cmp(&normalized[b].iter().sum::<f64>()))
            .expect("clusters are non-empty");
        let s = &result.state.upper_archive[best];
        println!("knee {i}: {} points, x = {:.3?}, f = {:.3?}", c.len(), s.x, s.raw);
    }
    Ok(())
}
