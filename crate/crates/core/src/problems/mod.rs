//! Problem definitions, the built-in benchmarks, objective normalization and
//! Lipschitz constant estimation.

mod benchmarks;
mod expr;
mod lipschitz;
mod reference;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use benchmarks::{benchmark_names, get_problem, list_problems, register_problem, BenchmarkInfo};
pub use expr::{load_problem_file, ProblemFile};
pub use lipschitz::{
    estimate_constraint_lipschitz, estimate_lipschitz, estimate_lipschitz_with, LipschitzRegion,
    DEFAULT_LIPSCHITZ_FLOOR, DEFAULT_LIPSCHITZ_SAFETY, DEFAULT_LIPSCHITZ_SAMPLES,
};
pub use reference::{normalize, update_reference_points, ReferencePoints};

use crate::error::{check_dims, Error, Result};
use crate::geometry::SearchBox;

type ObjectiveFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;
type EnclosureFn = dyn Fn(&[f64], &[f64], &mut [f64]) + Send + Sync;

/// Objective values, constraint values (`g_j >= 0` is feasible) and the
/// resulting feasibility flag at one decision point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    pub constraints: Vec<f64>,
    pub feasible: bool,
}

/// A box-constrained multiobjective problem with inequality constraints
/// `g_j(x) >= 0` and per-objective Lipschitz constants.
///
/// Evaluators are stateless closures and may be called from many threads.
#[derive(Clone)]
pub struct ProblemDefinition {
    name: String,
    domain: SearchBox,
    n_objectives: usize,
    n_constraints: usize,
    objectives: Arc<ObjectiveFn>,
    constraints: Option<Arc<ObjectiveFn>>,
    constraint_enclosure: Option<Arc<EnclosureFn>>,
    lipschitz_f: Vec<f64>,
    lipschitz_g: Option<Vec<f64>>,
    params: BTreeMap<String, f64>,
}

impl fmt::Debug for ProblemDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDefinition")
            .field("name", &self.name)
            .field("n", &self.dim())
            .field("m", &self.n_objectives)
            .field("p", &self.n_constraints)
            .field("lipschitz_f", &self.lipschitz_f)
            .field("lipschitz_g", &self.lipschitz_g)
            .finish()
    }
}

impl ProblemDefinition {
    pub fn builder(name: impl Into<String>, lower: Vec<f64>, upper: Vec<f64>) -> ProblemBuilder {
        ProblemBuilder {
            name: name.into(),
            lower,
            upper,
            n_objectives: 0,
            n_constraints: 0,
            objectives: None,
            constraints: None,
            constraint_enclosure: None,
            lipschitz_f: None,
            lipschitz_g: None,
            estimate_constraint_constants: false,
            lipschitz_region: LipschitzRegion::Domain,
            lipschitz_floor: DEFAULT_LIPSCHITZ_FLOOR,
            params: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &SearchBox {
        &self.domain
    }

    /// Number of decision variables.
    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn n_objectives(&self) -> usize {
        self.n_objectives
    }

    pub fn n_constraints(&self) -> usize {
        self.n_constraints
    }

    pub fn lipschitz_f(&self) -> &[f64] {
        &self.lipschitz_f
    }

    pub fn lipschitz_g(&self) -> Option<&[f64]> {
        self.lipschitz_g.as_deref()
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Replaces the objective Lipschitz constants.
    pub fn with_lipschitz(mut self, lipschitz_f: Vec<f64>) -> Result<Self> {
        check_dims(self.n_objectives, lipschitz_f.len())?;
        validate_constants(&self.name, &lipschitz_f)?;
        self.lipschitz_f = lipschitz_f;
        Ok(self)
    }

    /// Replaces (or removes) the constraint Lipschitz constants.
    pub fn with_constraint_lipschitz(mut self, lipschitz_g: Option<Vec<f64>>) -> Result<Self> {
        if let Some(lg) = &lipschitz_g {
            check_dims(self.n_constraints, lg.len())?;
            validate_constants(&self.name, lg)?;
        }
        self.lipschitz_g = lipschitz_g;
        Ok(self)
    }

    /// Evaluates objectives and constraints at `x`, which must lie in the domain.
    pub fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        check_dims(self.dim(), x.len())?;
        for (dim, (&v, (&lo, &hi))) in x
            .iter()
            .zip(self.domain.lower().iter().zip(self.domain.upper()))
            .enumerate()
        {
            if !(v >= lo && v <= hi) {
                return Err(Error::OutsideDomain {
                    dim,
                    value: v,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        let objectives = self.objectives_unchecked(x);
        if let Some((index, &value)) = objectives.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteObjective {
                index,
                value,
                x: x.to_vec(),
            });
        }
        let constraints = self.constraints_unchecked(x);
        let feasible = constraints.iter().all(|&g| g >= 0.0);
        Ok(Evaluation {
            objectives,
            constraints,
            feasible,
        })
    }

    pub(crate) fn objectives_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; self.n_objectives];
        (self.objectives)(x, &mut f);
        f
    }

    pub(crate) fn constraints_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.n_constraints];
        if let Some(c) = &self.constraints {
            c(x, &mut g);
        }
        g
    }

    /// Guaranteed upper bounds of every `g_j` over `b`, if the problem
    /// supplies an enclosure.
    pub fn constraint_upper_bounds(&self, b: &SearchBox) -> Option<Vec<f64>> {
        let enclose = self.constraint_enclosure.as_ref()?;
        let mut out = vec![f64::INFINITY; self.n_constraints];
        enclose(b.lower(), b.upper(), &mut out);
        Some(out)
    }

    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.domain.contains(x) && self.constraints_unchecked(x).iter().all(|&g| g >= 0.0)
    }
}

fn validate_constants(name: &str, constants: &[f64]) -> Result<()> {
    if let Some(bad) = constants.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(Error::InvalidParameter {
            problem: name.to_string(),
            reason: format!("Lipschitz constants must be positive and finite, got {bad}"),
        });
    }
    Ok(())
}

/// Assembles a [`ProblemDefinition`]; missing objective Lipschitz constants
/// are estimated by sampling at build time.
pub struct ProblemBuilder {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    n_objectives: usize,
    n_constraints: usize,
    objectives: Option<Arc<ObjectiveFn>>,
    constraints: Option<Arc<ObjectiveFn>>,
    constraint_enclosure: Option<Arc<EnclosureFn>>,
    lipschitz_f: Option<Vec<f64>>,
    lipschitz_g: Option<Vec<f64>>,
    estimate_constraint_constants: bool,
    lipschitz_region: LipschitzRegion,
    lipschitz_floor: f64,
    params: BTreeMap<String, f64>,
}

impl ProblemBuilder {
    pub fn objectives<F>(mut self, m: usize, f: F) -> Self
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        self.n_objectives = m;
        self.objectives = Some(Arc::new(f));
        self
    }

    pub fn constraints<G>(mut self, p: usize, g: G) -> Self
    where
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        self.n_constraints = p;
        self.constraints = Some(Arc::new(g));
        self
    }

    /// A function `(lower, upper, out)` writing an upper bound of each
    /// constraint over the box `[lower, upper]` into `out`. It must never
    /// underestimate; the feasibility test relies on it.
    pub fn constraint_enclosure<E>(mut self, e: E) -> Self
    where
        E: Fn(&[f64], &[f64], &mut [f64]) + Send + Sync + 'static,
    {
        self.constraint_enclosure = Some(Arc::new(e));
        self
    }

    pub fn lipschitz(mut self, constants: Vec<f64>) -> Self {
        self.lipschitz_f = Some(constants);
        self
    }

    pub fn constraint_lipschitz(mut self, constants: Vec<f64>) -> Self {
        self.lipschitz_g = Some(constants);
        self
    }

    /// Estimate constraint Lipschitz constants (over the whole domain) when
    /// none are given, enabling the Lipschitz feasibility test.
    pub fn estimate_constraint_lipschitz(mut self, yes: bool) -> Self {
        self.estimate_constraint_constants = yes;
        self
    }

    /// Region whose point pairs are sampled when estimating objective constants.
    pub fn lipschitz_region(mut self, region: LipschitzRegion) -> Self {
        self.lipschitz_region = region;
        self
    }

    pub fn lipschitz_floor(mut self, floor: f64) -> Self {
        self.lipschitz_floor = floor;
        self
    }

    pub fn param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn build(self) -> Result<ProblemDefinition> {
        let domain = SearchBox::new(self.lower, self.upper, 0)?;
        if self.n_objectives < 2 {
            return Err(Error::TooFewObjectives(self.n_objectives));
        }
        let objectives = self.objectives.ok_or_else(|| Error::InvalidParameter {
            problem: self.name.clone(),
            reason: "no objective evaluator".into(),
        })?;
        let mut problem = ProblemDefinition {
            name: self.name,
            domain,
            n_objectives: self.n_objectives,
            n_constraints: self.n_constraints,
            objectives,
            constraints: self.constraints,
            constraint_enclosure: self.constraint_enclosure,
            lipschitz_f: vec![1.0; self.n_objectives],
            lipschitz_g: None,
            params: self.params,
        };
        let floor = self.lipschitz_floor;
        let lf = match self.lipschitz_f {
            Some(lf) => lf,
            None => estimate_lipschitz_with(
                &problem,
                DEFAULT_LIPSCHITZ_SAMPLES,
                DEFAULT_LIPSCHITZ_SAFETY,
                lipschitz::DEFAULT_SEED,
                self.lipschitz_region,
            )?
            .into_iter()
            .map(|l| l.max(floor))
            .collect(),
        };
        problem = problem.with_lipschitz(lf)?;
        let lg = match self.lipschitz_g {
            Some(lg) => Some(lg),
            None if self.estimate_constraint_constants && problem.n_constraints > 0 => Some(
                estimate_constraint_lipschitz(
                    &problem,
                    DEFAULT_LIPSCHITZ_SAMPLES,
                    DEFAULT_LIPSCHITZ_SAFETY,
                    lipschitz::DEFAULT_SEED,
                )?
                .into_iter()
                .map(|l| l.max(floor))
                .collect(),
            ),
            None => None,
        };
        problem.with_constraint_lipschitz(lg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> ProblemDefinition {
        ProblemDefinition::builder("line", vec![0.0], vec![1.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = 1.0 - x[0];
            })
            .constraints(1, |x, g| g[0] = x[0] - 0.25)
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap()
    }

    #[test]
    fn evaluate_reports_feasibility() {
        let p = line();
        let e = p.evaluate(&[0.5]).unwrap();
        assert_eq!(e.objectives, vec![0.5, 0.5]);
        assert!(e.feasible);
        assert!(!p.evaluate(&[0.1]).unwrap().feasible);
        // boundary g = 0 is feasible
        assert!(p.evaluate(&[0.25]).unwrap().feasible);
    }

    #[test]
    fn evaluate_rejects_points_outside_domain() {
        assert!(matches!(
            line().evaluate(&[1.5]),
            Err(Error::OutsideDomain { dim: 0, .. })
        ));
        assert!(line().evaluate(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn evaluate_rejects_non_finite_objectives() {
        let p = ProblemDefinition::builder("pole", vec![0.0], vec![1.0])
            .objectives(2, |x, f| {
                f[0] = 1.0 / x[0];
                f[1] = x[0];
            })
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap();
        assert!(matches!(
            p.evaluate(&[0.0]),
            Err(Error::NonFiniteObjective { index: 0, .. })
        ));
    }

    #[test]
    fn builder_requires_two_objectives() {
        let r = ProblemDefinition::builder("one", vec![0.0], vec![1.0])
            .objectives(1, |x, f| f[0] = x[0])
            .build();
        assert!(matches!(r, Err(Error::TooFewObjectives(1))));
    }

    #[test]
    fn rejects_nonpositive_lipschitz_constants() {
        assert!(line().with_lipschitz(vec![1.0, 0.0]).is_err());
        assert!(line().with_lipschitz(vec![1.0]).is_err());
    }

    #[test]
    fn constant_objective_is_clamped_to_floor() {
        let p = ProblemDefinition::builder("flat", vec![0.0], vec![1.0])
            .objectives(2, |x, f| {
                f[0] = 3.0;
                f[1] = x[0];
            })
            .build()
            .unwrap();
        assert_eq!(p.lipschitz_f()[0], DEFAULT_LIPSCHITZ_FLOOR);
        assert!(p.lipschitz_f()[1] >= 1.0);
    }
}
