//! User problems written as arithmetic expressions in a JSON file.
//!
//! ```json
//! {
//!   "name": "bowl",
//!   "lower": [-1, -1],
//!   "upper": [1, 1],
//!   "objectives": ["x1^2 + x2^2", "(x1 - 1)^2 + x2^2"],
//!   "constraints": ["x1 + x2 + 1.5"],
//!   "lipschitz": [3.0, 5.0]
//! }
//! ```
//!
//! Variables are `x1 .. xn`. Constraints use the `g(x) >= 0` convention.
//! Omitted Lipschitz constants are estimated by sampling.

use std::path::Path;

use exmex::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LipschitzRegion, ProblemDefinition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub objectives: Vec<String>,
    #[serde(default)]
    pub constraints: Vec<String>,
    #[serde(default)]
    pub lipschitz: Option<Vec<f64>>,
    #[serde(default)]
    pub constraint_lipschitz: Option<Vec<f64>>,
    #[serde(default)]
    pub lipschitz_region: LipschitzRegion,
}

/// One parsed expression plus the map from its (alphabetical) variables to
/// decision-vector indices.
struct Compiled {
    expr: FlatEx<f64>,
    slots: Vec<usize>,
}

impl Compiled {
    fn parse(source: &str, n: usize) -> Result<Self> {
        let fail = |reason: String| Error::Expression {
            expr: source.to_string(),
            reason,
        };
        let expr = exmex::parse::<f64>(source).map_err(|e| fail(e.to_string()))?;
        let slots = expr
            .var_names()
            .iter()
            .map(|name| {
                name.strip_prefix('x')
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1 && k <= n)
                    .map(|k| k - 1)
                    .ok_or_else(|| fail(format!("unknown variable `{name}` (expected x1..x{n})")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { expr, slots })
    }

    fn eval(&self, x: &[f64], buf: &mut Vec<f64>) -> f64 {
        buf.clear();
        buf.extend(self.slots.iter().map(|&k| x[k]));
        self.expr.eval(buf).unwrap_or(f64::NAN)
    }
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<ProblemDefinition> {
        let n = self.lower.len();
        let objectives = self
            .objectives
            .iter()
            .map(|s| Compiled::parse(s, n))
            .collect::<Result<Vec<_>>>()?;
        let constraints = self
            .constraints
            .iter()
            .map(|s| Compiled::parse(s, n))
            .collect::<Result<Vec<_>>>()?;

        let m = objectives.len();
        let p = constraints.len();
        let mut builder = ProblemDefinition::builder(self.name, self.lower, self.upper)
            .objectives(m, move |x, f| {
                let mut buf = Vec::with_capacity(x.len());
                for (slot, e) in f.iter_mut().zip(&objectives) {
                    *slot = e.eval(x, &mut buf);
                }
            })
            .lipschitz_region(self.lipschitz_region);
        if p > 0 {
            builder = builder.constraints(p, move |x, g| {
                let mut buf = Vec::with_capacity(x.len());
                for (slot, e) in g.iter_mut().zip(&constraints) {
                    *slot = e.eval(x, &mut buf);
                }
            });
        }
        if let Some(l) = self.lipschitz {
            builder = builder.lipschitz(l);
        }
        if let Some(l) = self.constraint_lipschitz {
            builder = builder.constraint_lipschitz(l);
        }
        builder.build()
    }
}

/// Reads and compiles a problem file.
pub fn load_problem_file(path: impl AsRef<Path>) -> Result<ProblemDefinition> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: ProblemFile = serde_json::from_str(&text)?;
    file.into_problem()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(objectives: &[&str], constraints: &[&str]) -> ProblemFile {
        ProblemFile {
            name: "user".into(),
            lower: vec![-1.0, -1.0],
            upper: vec![1.0, 1.0],
            objectives: objectives.iter().map(|s| s.to_string()).collect(),
            constraints: constraints.iter().map(|s| s.to_string()).collect(),
            lipschitz: Some(vec![4.0, 4.0]),
            constraint_lipschitz: None,
            lipschitz_region: LipschitzRegion::Domain,
        }
    }

    #[test]
    fn variables_map_by_index_not_alphabet() {
        // x10 sorts before x2 alphabetically; make sure slots still line up
        let mut f = file(&["x2 - x1", "x1 * 2"], &["x2 + 0.5"]);
        f.lower = vec![0.0; 10];
        f.upper = vec![1.0; 10];
        f.objectives[1] = "x10 + 3 * x2".into();
        let p = f.into_problem().unwrap();
        let mut x = vec![0.0; 10];
        x[1] = 0.25;
        x[9] = 0.5;
        let e = p.evaluate(&x).unwrap();
        assert_eq!(e.objectives, vec![0.25, 1.25]);
        assert_eq!(e.constraints, vec![0.75]);
    }

    #[test]
    fn functions_and_constants_parse() {
        let p = file(&["exp(x1) + sqrt(x2 + 1)", "sin(x1)^2"], &[])
            .into_problem()
            .unwrap();
        let e = p.evaluate(&[0.0, 0.0]).unwrap();
        assert!((e.objectives[0] - 2.0).abs() < 1e-12);
        assert_eq!(e.objectives[1], 0.0);
    }

    #[test]
    fn unknown_variable_is_an_error() {
        let err = file(&["y + x1", "x1"], &[]).into_problem().unwrap_err();
        assert!(matches!(err, Error::Expression { .. }), "{err}");
        assert!(file(&["x3", "x1"], &[]).into_problem().is_err());
        assert!(file(&["x1 +* 2", "x1"], &[]).into_problem().is_err());
    }

    #[test]
    fn missing_lipschitz_is_estimated() {
        let mut f = file(&["3 * x1", "x2"], &[]);
        f.lipschitz = None;
        let p = f.into_problem().unwrap();
        assert!(p.lipschitz_f()[0] >= 3.0 && p.lipschitz_f()[0] <= 4.5 + 1e-9);
    }

    #[test]
    fn loads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        std::fs::write(&path, serde_json::to_string(&file(&["x1", "-x1"], &[])).unwrap()).unwrap();
        let p = load_problem_file(&path).unwrap();
        assert_eq!(p.name(), "user");
        assert!(load_problem_file(dir.path().join("missing.json")).is_err());
    }
}
