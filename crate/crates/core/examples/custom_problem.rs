//! Two ways to bring your own problem: a closure-based definition and a JSON
//! file with expression strings.
//!
//!     cargo run --release --example custom_problem

use ppbnb::problems::{load_problem_file, register_problem};
use ppbnb::{get_problem, solve, ProblemDefinition, SolverConfig};

fn main() -> ppbnb::Result<()> {
    // f1 = x1, f2 = 1 - sqrt(x1) + x2^2: convex front, no knee
    let closure = ProblemDefinition::builder("convex", vec![0.0, -1.0], vec![1.0, 1.0])
        .objectives(2, |x, f| {
            f[0] = x[0];
            f[1] = 1.0 - x[0].sqrt() + x[1] * x[1];
        })
        .build()?;
    register_problem(closure)?;
    let prob = get_problem("convex", &Default::default())?;
    println!("estimated Lipschitz constants for `convex`: {:.3?}", prob.lipschitz_f());
    report(&prob)?;

    let dir = std::env::temp_dir().join("ppbnb-example");
    std::fs::create_dir_all(&dir).map_err(|e| ppbnb::Error::io(&dir, e))?;
    let path = dir.join("bowl.json");
    let json = r#"{
        "name": "bowl",
        "lower": [-1, -1],
        "upper": [1, 1],
        "objectives": ["x1^2 + x2^2", "(x1 - 1)^2 + x2^2"],
        "constraints": ["x1 + x2 + 1.5"],
        "lipschitz": [3.0, 5.0]
    }"#;
    std::fs::write(&path, json).map_err(|e| ppbnb::Error::io(&path, e))?;
    report(&load_problem_file(&path)?)
}

fn report(prob: &ProblemDefinition) -> ppbnb::Result<()> {
    let cfg = SolverConfig {
        tol_eps: 0.02,
        tol_delta: 0.02,
        ..SolverConfig::default()
    };
    let result = solve(prob, &cfg)?;
    println!("{}: {} solutions, {}", prob.name(), result.state.upper_archive.len(), result.reason);
    Ok(())
}
