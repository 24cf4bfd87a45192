//! A small decomposition-based evolutionary optimizer (MOEA/D with
//! differential-evolution variation) that searches one box for feasible
//! points with good normalized images.
//!
//! Subproblems are Tchebycheff scalarizations over evenly spread simplex
//! weights. Offspring replace neighbours under constrained domination: lower
//! total violation wins, ties are settled by the scalarized value.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounding::UpperCandidate;
use crate::error::{Error, Result};
use crate::geometry::{BoxId, SearchBox};
use crate::problems::{ProblemDefinition, ReferencePoints};

/// Smallest weight component, keeps every Tchebycheff term alive.
pub const WEIGHT_FLOOR: f64 = 1e-6;

/// Maximum number of neighbours one offspring may replace.
const MAX_REPLACEMENTS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MiniMoeaConfig {
    pub population: usize,
    pub generations: usize,
    pub neighborhood: usize,
    pub de_scale: f64,
    pub crossover_rate: f64,
    pub seed: u64,
}

impl Default for MiniMoeaConfig {
    fn default() -> Self {
        Self {
            population: 10,
            generations: 20,
            neighborhood: 5,
            de_scale: 0.5,
            crossover_rate: 0.9,
            seed: 0,
        }
    }
}

impl MiniMoeaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population == 0 || self.generations == 0 || self.neighborhood == 0 {
            return bad("population, generations and neighborhood must be positive".into());
        }
        if self.neighborhood > self.population {
            return bad(format!(
                "neighborhood ({}) exceeds population ({})",
                self.neighborhood, self.population
            ));
        }
        if !(self.de_scale > 0.0 && self.de_scale <= 2.0) {
            return bad(format!("de_scale must lie in (0, 2], got {}", self.de_scale));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!(
                "crossover_rate must lie in [0, 1], got {}",
                self.crossover_rate
            ));
        }
        Ok(())
    }

    /// Copy of this config with the seed mixed with a box id, so each box
    /// gets its own reproducible stream regardless of scheduling.
    pub fn for_box(&self, global_seed: u64, box_id: BoxId) -> Self {
        Self {
            seed: splitmix64(splitmix64(global_seed ^ self.seed) ^ box_id),
            ..self.clone()
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub x: Vec<f64>,
    /// Normalized objectives.
    pub objectives: Vec<f64>,
    pub raw: Vec<f64>,
    pub violation: f64,
}

impl Individual {
    pub fn evaluate(prob: &ProblemDefinition, x: Vec<f64>, reference: &ReferencePoints) -> Result<Self> {
        let e = prob.evaluate(&x)?;
        let violation = constraint_violation(&e.constraints);
        Ok(Self {
            objectives: reference.normalize_unchecked(&e.objectives),
            raw: e.objectives,
            x,
            violation,
        })
    }

    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }
}

/// Total violation `sum_j max(0, -g_j)`; zero exactly when every `g_j >= 0`.
pub fn constraint_violation(g: &[f64]) -> f64 {
    g.iter().map(|&v| if v < 0.0 { -v } else { 0.0 }).sum()
}

/// `max_i weight_i * (y_i - ideal_i)`.
pub fn tchebycheff_scalarize(y: &[f64], weight: &[f64], ideal: &[f64]) -> f64 {
    y.iter()
        .zip(weight)
        .zip(ideal)
        .map(|((v, w), z)| w * (v - z))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `count` weight vectors spread over the unit simplex: the smallest
/// simplex-lattice that has at least `count` points, thinned evenly, then
/// floored at [`WEIGHT_FLOOR`] and renormalized.
pub fn simplex_weights(m: usize, count: usize) -> Vec<Vec<f64>> {
    if count == 0 || m == 0 {
        return Vec::new();
    }
    if count == 1 {
        return vec![vec![1.0 / m as f64; m]];
    }
    let mut divisions = 1;
    let lattice = loop {
        let pts = lattice_points(m, divisions);
        if pts.len() >= count {
            break pts;
        }
        divisions += 1;
    };
    let total = lattice.len();
    (0..count)
        .map(|i| {
            let mut w = lattice[i * total / count].clone();
            for v in &mut w {
                *v = v.max(WEIGHT_FLOOR);
            }
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= s);
            w
        })
        .collect()
}

fn lattice_points(m: usize, divisions: usize) -> Vec<Vec<f64>> {
    fn rec(m: usize, left: usize, divisions: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == m - 1 {
            prefix.push(left);
            out.push(prefix.iter().map(|&c| c as f64 / divisions as f64).collect());
            prefix.pop();
            return;
        }
        for c in (0..=left).rev() {
            prefix.push(c);
            rec(m, left - c, divisions, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, divisions, divisions, &mut Vec::with_capacity(m), &mut out);
    out
}

/// DE/rand/1 with binomial crossover against the target, clipped to `b`.
pub fn de_offspring<R: Rng + ?Sized>(
    target: &Individual,
    donors: (&Individual, &Individual, &Individual),
    cfg: &MiniMoeaConfig,
    b: &SearchBox,
    rng: &mut R,
) -> Vec<f64> {
    let (r1, r2, r3) = donors;
    let n = target.x.len();
    let forced = if n > 0 { rng.gen_range(0..n) } else { 0 };
    let mut trial: Vec<f64> = (0..n)
        .map(|k| {
            if k == forced || rng.gen::<f64>() < cfg.crossover_rate {
                r1.x[k] + cfg.de_scale * (r2.x[k] - r3.x[k])
            } else {
                target.x[k]
            }
        })
        .collect();
    b.clamp(&mut trial);
    trial
}

fn neighbourhoods(weights: &[Vec<f64>], size: usize) -> Vec<Vec<usize>> {
    weights
        .iter()
        .map(|wi| {
            let mut order: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .map(|(j, wj)| {
                    let d: f64 = wi.iter().zip(wj).map(|(a, b)| (a - b) * (a - b)).sum();
                    (d, j)
                })
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            order.into_iter().take(size).map(|(_, j)| j).collect()
        })
        .collect()
}

fn pick_donors<R: Rng + ?Sized>(target: usize, pool: &[usize], population: usize, rng: &mut R) -> [usize; 3] {
    let others: Vec<usize> = pool.iter().copied().filter(|&j| j != target).collect();
    let source: Vec<usize> = if others.len() >= 3 {
        others
    } else {
        (0..population).filter(|&j| j != target).collect()
    };
    if source.len() >= 3 {
        let picked: Vec<usize> = source.choose_multiple(rng, 3).copied().collect();
        [picked[0], picked[1], picked[2]]
    } else if source.is_empty() {
        [target; 3]
    } else {
        // tiny populations: sample with replacement
        [0, 1, 2].map(|_| source[rng.gen_range(0..source.len())])
    }
}

fn better(child: &Individual, incumbent: &Individual, weight: &[f64], ideal: &[f64]) -> bool {
    if child.violation != incumbent.violation {
        return child.violation < incumbent.violation;
    }
    tchebycheff_scalarize(&child.objectives, weight, ideal)
        < tchebycheff_scalarize(&incumbent.objectives, weight, ideal)
}

/// Runs the optimizer inside `b` and returns the distinct feasible members
/// of the final population (at most `population` of them, possibly none).
pub fn run_mini_moea(
    prob: &ProblemDefinition,
    b: &SearchBox,
    reference: &ReferencePoints,
    cfg: &MiniMoeaConfig,
) -> Result<Vec<UpperCandidate>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let size = cfg.population;
    let weights = simplex_weights(prob.n_objectives(), size);
    let hoods = neighbourhoods(&weights, cfg.neighborhood);

    let mut population = Vec::with_capacity(size);
    population.push(Individual::evaluate(prob, b.midpoint(), reference)?);
    while population.len() < size {
        let x: Vec<f64> = b
            .lower()
            .iter()
            .zip(b.upper())
            .map(|(&lo, &hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
            .collect();
        population.push(Individual::evaluate(prob, x, reference)?);
    }

    let mut ideal = vec![f64::INFINITY; prob.n_objectives()];
    for ind in &population {
        for (z, v) in ideal.iter_mut().zip(&ind.objectives) {
            *z = z.min(*v);
        }
    }

    for _ in 0..cfg.generations {
        for i in 0..size {
            let [a, c, d] = pick_donors(i, &hoods[i], size, &mut rng);
            let trial = de_offspring(
                &population[i],
                (&population[a], &population[c], &population[d]),
                cfg,
                b,
                &mut rng,
            );
            let child = Individual::evaluate(prob, trial, reference)?;
            for (z, v) in ideal.iter_mut().zip(&child.objectives) {
                *z = z.min(*v);
            }
            let mut order = hoods[i].clone();
            order.shuffle(&mut rng);
            let mut replaced = 0;
            for j in order {
                if replaced >= MAX_REPLACEMENTS {
                    break;
                }
                if better(&child, &population[j], &weights[j], &ideal) {
                    population[j] = child.clone();
                    replaced += 1;
                }
            }
        }
    }

    let mut out: Vec<UpperCandidate> = Vec::new();
    for ind in population.into_iter().filter(Individual::is_feasible) {
        if out.iter().any(|c| c.x == ind.x) {
            continue;
        }
        out.push(UpperCandidate {
            x: ind.x,
            raw: ind.raw,
            normalized: ind.objectives,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn ind(x: &[f64]) -> Individual {
        Individual {
            x: x.to_vec(),
            objectives: vec![0.0, 0.0],
            raw: vec![0.0, 0.0],
            violation: 0.0,
        }
    }

    #[test]
    fn violation_examples() {
        assert_eq!(constraint_violation(&[1.0, -2.0]), 2.0);
        assert_eq!(constraint_violation(&[0.0, 0.0]), 0.0);
        assert_eq!(constraint_violation(&[-1.0, -1.0]), 2.0);
    }

    #[test]
    fn tchebycheff_examples() {
        let w = &simplex_weights(2, 2)[0];
        assert!((tchebycheff_scalarize(&[3.0, 5.0], w, &[0.0, 0.0]) - 3.0).abs() < 1e-4);
        assert_eq!(tchebycheff_scalarize(&[1.0, 2.0], &[0.3, 0.7], &[1.0, 2.0]), 0.0);
        assert_eq!(tchebycheff_scalarize(&[2.0, 2.0], &[0.5, 0.5], &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn weights_are_floored_simplex_points() {
        for m in 2..=5 {
            let ws = simplex_weights(m, 10);
            assert_eq!(ws.len(), 10);
            for w in &ws {
                assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(w.iter().all(|&v| v >= WEIGHT_FLOOR * 0.99));
            }
        }
        let ws = simplex_weights(2, 10);
        assert!((ws[0][0] - 1.0).abs() < 1e-5 && (ws[9][1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn de_offspring_examples() {
        let cfg = MiniMoeaConfig {
            crossover_rate: 1.0,
            de_scale: 0.5,
            ..Default::default()
        };
        let b = SearchBox::new(vec![-10.0], vec![10.0], 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = ind(&[5.0]);
        assert_eq!(de_offspring(&t, (&ind(&[0.0]), &ind(&[2.0]), &ind(&[0.0])), &cfg, &b, &mut rng), vec![1.0]);
        assert_eq!(de_offspring(&t, (&ind(&[3.0]), &ind(&[7.0]), &ind(&[7.0])), &cfg, &b, &mut rng), vec![3.0]);
        let narrow = SearchBox::new(vec![0.0], vec![1.0], 0).unwrap();
        assert_eq!(
            de_offspring(&ind(&[0.5]), (&ind(&[0.9]), &ind(&[1.0]), &ind(&[0.0])), &cfg, &narrow, &mut rng),
            vec![1.0]
        );
    }

    #[test]
    fn config_validation() {
        assert!(MiniMoeaConfig::default().validate().is_ok());
        let bad = MiniMoeaConfig {
            neighborhood: 11,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = MiniMoeaConfig {
            de_scale: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    fn mop() -> ProblemDefinition {
        crate::problems::get_problem("MOP", &BTreeMap::new()).unwrap()
    }

    #[test]
    fn mop_box_yields_feasible_points_inside() {
        let p = mop();
        let b = SearchBox::new(vec![-1.0, 0.0], vec![0.5, 2.0], 4).unwrap();
        let r = ReferencePoints::new(vec![0.0, 0.0], vec![6.0, 6.0]).unwrap();
        let cfg = MiniMoeaConfig::default().for_box(7, b.id());
        let out = run_mini_moea(&p, &b, &r, &cfg).unwrap();
        assert!(!out.is_empty() && out.len() <= 10);
        for c in &out {
            assert!(b.contains(&c.x));
            let e = p.evaluate(&c.x).unwrap();
            assert_eq!(e.objectives, c.raw);
            assert_eq!(r.normalize(&e.objectives).unwrap(), c.normalized);
        }
        assert_eq!(out, run_mini_moea(&p, &b, &r, &cfg).unwrap());
    }

    #[test]
    fn infeasible_box_yields_nothing() {
        let p = ProblemDefinition::builder("never", vec![0.0], vec![1.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = -x[0];
            })
            .constraints(1, |_, g| g[0] = -1.0)
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap();
        let out = run_mini_moea(&p, p.domain(), &ReferencePoints::identity(2), &MiniMoeaConfig::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn feasible_members_are_never_lost() {
        // feasible only for x >= 0.5; the midpoint starts feasible and the
        // population must keep at least one feasible member
        let p = ProblemDefinition::builder("half", vec![0.0, 0.0], vec![1.0, 1.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = 1.0 - x[0] + x[1];
            })
            .constraints(1, |x, g| g[0] = x[0] - 0.5)
            .lipschitz(vec![1.0, 2.0])
            .build()
            .unwrap();
        for seed in 0..20 {
            let cfg = MiniMoeaConfig::default().for_box(seed, 0);
            let out = run_mini_moea(&p, p.domain(), &ReferencePoints::identity(2), &cfg).unwrap();
            assert!(!out.is_empty());
            assert!(out.iter().all(|c| c.x[0] >= 0.5));
        }
    }

    #[test]
    fn box_seeds_differ() {
        let c = MiniMoeaConfig::default();
        assert_ne!(c.for_box(1, 2).seed, c.for_box(1, 3).seed);
        assert_eq!(c.for_box(1, 2).seed, c.for_box(1, 2).seed);
    }
}
