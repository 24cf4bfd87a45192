use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProblemDefinition;
use crate::error::{Error, Result};

pub const DEFAULT_LIPSCHITZ_SAMPLES: usize = 100_000;
pub const DEFAULT_LIPSCHITZ_SAFETY: f64 = 1.5;
pub const DEFAULT_LIPSCHITZ_FLOOR: f64 = 1e-12;
pub(crate) const DEFAULT_SEED: u64 = 0x5EED_0F_11B5;

/// Which point pairs count when estimating slopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LipschitzRegion {
    /// Pairs anywhere in the domain box.
    #[default]
    Domain,
    /// Only pairs whose endpoints both satisfy the constraints.
    Feasible,
}

/// Estimates one Lipschitz constant per objective as `safety` times the
/// largest finite-difference slope over `samples` random pairs in the domain.
pub fn estimate_lipschitz(
    prob: &ProblemDefinition,
    samples: usize,
    safety: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    estimate_lipschitz_with(prob, samples, safety, seed, LipschitzRegion::Domain)
}

pub fn estimate_lipschitz_with(
    prob: &ProblemDefinition,
    samples: usize,
    safety: f64,
    seed: u64,
    region: LipschitzRegion,
) -> Result<Vec<f64>> {
    let feasible_only = region == LipschitzRegion::Feasible && prob.n_constraints() > 0;
    max_slopes(prob, samples, safety, seed, feasible_only, |x| {
        let f = prob.objectives_unchecked(x);
        if let Some((index, &value)) = f.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteObjective {
                index,
                value,
                x: x.to_vec(),
            });
        }
        Ok(f)
    })
}

/// Same estimator applied to the constraint functions, always over the whole
/// domain so the feasibility test stays conservative.
pub fn estimate_constraint_lipschitz(
    prob: &ProblemDefinition,
    samples: usize,
    safety: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    max_slopes(prob, samples, safety, seed ^ 0xC0_57, false, |x| {
        Ok(prob.constraints_unchecked(x))
    })
}

fn max_slopes<E>(
    prob: &ProblemDefinition,
    samples: usize,
    safety: f64,
    seed: u64,
    feasible_only: bool,
    eval: E,
) -> Result<Vec<f64>>
where
    E: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if !(safety > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "Lipschitz safety factor must be positive, got {safety}"
        )));
    }
    let domain = prob.domain();
    let n = domain.dim();
    let diam = domain.diameter();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slopes: Option<Vec<f64>> = None;
    let uniform = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        domain
            .lower()
            .iter()
            .zip(domain.upper())
            .map(|(&lo, &hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
            .collect()
    };

    let mut accepted = 0;
    let max_attempts = samples.saturating_mul(50).max(1);
    for attempt in 0..max_attempts {
        if accepted >= samples {
            break;
        }
        let x = uniform(&mut rng);
        // alternate global pairs with local pairs at log-uniform scales,
        // the latter resolve the steepest local gradients
        let y = if attempt % 2 == 0 {
            uniform(&mut rng)
        } else {
            let mut dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let step = diam * 10f64.powf(-rng.gen_range(0.0..5.0));
            for v in &mut dir {
                *v *= step / norm;
            }
            let mut y: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + b).collect();
            domain.clamp(&mut y);
            y
        };
        let dist = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist == 0.0 {
            continue;
        }
        if feasible_only && !(prob.is_feasible(&x) && prob.is_feasible(&y)) {
            continue;
        }
        let fx = eval(&x)?;
        let fy = eval(&y)?;
        let s = slopes.get_or_insert_with(|| vec![0.0; fx.len()]);
        for (slot, (a, b)) in s.iter_mut().zip(fx.iter().zip(&fy)) {
            let slope = (a - b).abs() / dist;
            if slope.is_finite() && slope > *slot {
                *slot = slope;
            }
        }
        accepted += 1;
    }
    let slopes = slopes.ok_or_else(|| {
        Error::InvalidConfig(format!(
            "no usable sample pairs for Lipschitz estimation of `{}`",
            prob.name()
        ))
    })?;
    Ok(slopes.into_iter().map(|s| s * safety).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(lower: Vec<f64>, upper: Vec<f64>, f: fn(&[f64], &mut [f64])) -> ProblemDefinition {
        ProblemDefinition::builder("t", lower, upper)
            .objectives(2, f)
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap()
    }

    #[test]
    fn linear_slope_is_recovered_within_safety() {
        let p = problem(vec![0.0], vec![1.0], |x, f| {
            f[0] = 2.0 * x[0];
            f[1] = -x[0];
        });
        let l = estimate_lipschitz(&p, 2000, 1.1, 3).unwrap();
        assert!(l[0] >= 2.0 && l[0] <= 2.2 + 1e-12, "{l:?}");
        assert!(l[1] >= 1.0 && l[1] <= 1.1 + 1e-12, "{l:?}");
    }

    #[test]
    fn constant_objective_gives_zero() {
        let p = problem(vec![0.0, 0.0], vec![1.0, 1.0], |x, f| {
            f[0] = 4.0;
            f[1] = x[0];
        });
        assert_eq!(estimate_lipschitz(&p, 500, 1.5, 1).unwrap()[0], 0.0);
    }

    #[test]
    fn gradient_norm_is_approached_from_below() {
        let p = problem(vec![0.0, 0.0], vec![1.0, 1.0], |x, f| {
            f[0] = x[0] + x[1];
            f[1] = x[0];
        });
        let coarse = estimate_lipschitz(&p, 100, 1.0, 9).unwrap()[0];
        let fine = estimate_lipschitz(&p, 50_000, 1.0, 9).unwrap()[0];
        let sqrt2 = 2f64.sqrt();
        assert!(coarse <= sqrt2 + 1e-12 && fine <= sqrt2 + 1e-12);
        assert!(fine >= coarse);
        assert!(sqrt2 - fine < 1e-3, "{fine}");
    }

    #[test]
    fn estimation_is_deterministic_given_seed() {
        let p = problem(vec![-1.0, -1.0], vec![1.0, 1.0], |x, f| {
            f[0] = (x[0] * 3.0).sin() + x[1] * x[1];
            f[1] = x[0] * x[1];
        });
        assert_eq!(
            estimate_lipschitz(&p, 1000, 1.5, 42).unwrap(),
            estimate_lipschitz(&p, 1000, 1.5, 42).unwrap()
        );
    }
}
