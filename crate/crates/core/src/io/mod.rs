//! Run configuration, result export, plot data and post-run verification.

mod export;
mod plot;
mod verify;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use export::{export_front, export_oracle, export_results, read_boxes_csv, read_solutions_csv, ExportedFiles, RunSummary, SolutionRow};
pub use plot::emit_plot_data;
pub use verify::{verify_run, CheckOutcome, VerifyReport};

use crate::cone::ConeEps;
use crate::error::{Error, Result};
use crate::problems::{get_problem, load_problem_file, BenchmarkInfo, ProblemDefinition};
use crate::solver::SolverConfig;

/// Which files [`export_results`] and [`emit_plot_data`] write.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExportOptions {
    pub solutions: bool,
    pub boxes: bool,
    pub summary: bool,
    pub plot: bool,
}

impl Default for ExportOptions {
    fn default() -> Self {
        Self {
            solutions: true,
            boxes: true,
            summary: true,
            plot: true,
        }
    }
}

/// Everything one `solve` invocation needs. Stored as JSON:
///
/// ```json
/// {
///   "problem": "DEB2DK",
///   "params": { "K": 4, "n": 3 },
///   "solver": { "proper_eps": 0.75, "tol_eps": 0.0015, "tol_delta": 0.00015, "ub_mode": "moea" },
///   "out_dir": "out/deb2dk",
///   "oracle": true
/// }
/// ```
///
/// Omitted solver fields take their defaults; omitted tolerances take the
/// benchmark's own. `problem_file` points at an expression problem (see
/// [`crate::problems::ProblemFile`]) and replaces the benchmark lookup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem_file: Option<PathBuf>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub export: ExportOptions,
    /// Compare against a grid oracle in the plot data (n <= 3 only).
    #[serde(default)]
    pub oracle: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_resolution: Option<usize>,
    #[serde(default)]
    pub verbose: bool,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    pub fn load_problem(&self) -> Result<ProblemDefinition> {
        match &self.problem_file {
            Some(path) => load_problem_file(path),
            None => get_problem(&self.problem, &self.params),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Values given on the command line. Each one that is set replaces the
/// corresponding file value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub problem: Option<String>,
    pub params: Vec<(String, f64)>,
    pub problem_file: Option<PathBuf>,
    pub proper_eps: Option<f64>,
    pub tol: Option<f64>,
    pub delta: Option<f64>,
    pub ub_mode: Option<String>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub max_iters: Option<usize>,
    pub out: Option<PathBuf>,
    pub oracle: Option<bool>,
    pub oracle_resolution: Option<usize>,
    pub verbose: Option<bool>,
}

/// Parses `KEY=VALUE` with a numeric value.
pub fn parse_param(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected KEY=VALUE, got `{s}`")))?;
    let value = v
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("parameter `{k}` needs a number, got `{v}`")))?;
    Ok((k.trim().to_string(), value))
}

/// Builds a validated [`RunConfig`] from an optional JSON file plus
/// command-line overrides. The referenced problem is instantiated once to
/// check that it exists and accepts its parameters.
pub fn parse_config(path: Option<&Path>, overrides: &ConfigOverrides) -> Result<RunConfig> {
    let mut root = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            serde_json::from_str::<Value>(&text)?
        }
        None => Value::Object(Map::new()),
    };
    let obj = root
        .as_object_mut()
        .ok_or_else(|| Error::Parse("configuration must be a JSON object".into()))?;
    apply_overrides(obj, overrides);

    let problem = obj.get("problem").and_then(Value::as_str).map(str::to_string);
    let has_file = obj.get("problem_file").map_or(false, |v| !v.is_null());
    let canonical = match (&problem, has_file) {
        (Some(name), false) => {
            let info = BenchmarkInfo::lookup(name);
            if let Some(info) = info {
                obj.insert("problem".into(), Value::from(info.name));
            }
            info
        }
        (None, false) => return Err(Error::InvalidConfig("no problem given".into())),
        (_, true) => {
            if problem.is_none() {
                obj.insert("problem".into(), Value::from("user"));
            }
            None
        }
    };

    let solver = obj
        .entry("solver")
        .or_insert_with(|| Value::Object(Map::new()))
        .as_object_mut()
        .ok_or_else(|| Error::Parse("`solver` must be a JSON object".into()))?;
    if let Some(info) = canonical {
        let (tol, delta) = info.default_tolerances;
        solver.entry("tol_eps").or_insert(Value::from(tol));
        solver.entry("tol_delta").or_insert(Value::from(delta));
    }
    check_number(solver, "proper_eps", |v| ConeEps::new(v).map(|_| ()))?;
    for key in ["tol_eps", "tol_delta"] {
        check_number(solver, key, |v| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{key} must be positive, got {v}")))
            }
        })?;
    }

    let cfg: RunConfig = serde_json::from_value(root)?;
    cfg.solver.validate()?;
    cfg.load_problem()?;
    Ok(cfg)
}

fn check_number(obj: &Map<String, Value>, key: &str, check: impl Fn(f64) -> Result<()>) -> Result<()> {
    match obj.get(key) {
        None => Ok(()),
        Some(v) => match v.as_f64() {
            Some(x) => check(x),
            None => Err(Error::Parse(format!("`{key}` must be a number"))),
        },
    }
}

fn apply_overrides(obj: &mut Map<String, Value>, o: &ConfigOverrides) {
    if let Some(p) = &o.problem {
        obj.insert("problem".into(), Value::from(p.clone()));
    }
    if let Some(p) = &o.problem_file {
        obj.insert("problem_file".into(), Value::from(p.to_string_lossy().into_owned()));
    }
    if !o.params.is_empty() {
        let params = obj
            .entry("params")
            .or_insert_with(|| Value::Object(Map::new()));
        if let Some(map) = params.as_object_mut() {
            for (k, v) in &o.params {
                map.insert(k.clone(), Value::from(*v));
            }
        }
    }
    let mut solver_set = |key: &str, v: Value| {
        let s = obj.entry("solver").or_insert_with(|| Value::Object(Map::new()));
        if let Some(map) = s.as_object_mut() {
            map.insert(key.into(), v);
        }
    };
    if let Some(v) = o.proper_eps {
        solver_set("proper_eps", Value::from(v));
    }
    if let Some(v) = o.tol {
        solver_set("tol_eps", Value::from(v));
    }
    if let Some(v) = o.delta {
        solver_set("tol_delta", Value::from(v));
    }
    if let Some(v) = &o.ub_mode {
        solver_set("ub_mode", Value::from(v.to_ascii_lowercase()));
    }
    if let Some(v) = o.threads {
        solver_set("threads", Value::from(v));
    }
    if let Some(v) = o.seed {
        solver_set("seed", Value::from(v));
    }
    if let Some(v) = o.max_iters {
        solver_set("max_iterations", Value::from(v));
    }
    if let Some(v) = &o.out {
        obj.insert("out_dir".into(), Value::from(v.to_string_lossy().into_owned()));
    }
    if let Some(v) = o.oracle {
        obj.insert("oracle".into(), Value::from(v));
    }
    if let Some(v) = o.oracle_resolution {
        obj.insert("oracle_resolution".into(), Value::from(v));
    }
    if let Some(v) = o.verbose {
        obj.insert("verbose".into(), Value::from(v));
    }
}
