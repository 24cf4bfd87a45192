//! Brute-force ground truth for small problems: evaluate a dense uniform
//! grid, keep the feasible points and extract the nondominated and
//! eps-proper subsets with plain loops.
//!
//! Nothing here reuses the solver's dominance code, so the two can be
//! checked against each other.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problems::{ProblemDefinition, ReferencePoints};

pub const MAX_ORACLE_DIM: usize = 3;

/// Default points per axis: 512 for two variables, 64 for three.
pub fn default_resolution(n: usize) -> usize {
    match n {
        0 | 1 => 4096,
        2 => 512,
        _ => 64,
    }
}

#[derive(Debug, Clone)]
pub struct GridOracle {
    resolution: usize,
    /// Per-axis grid spacing.
    spacing: Vec<f64>,
    evaluated: usize,
    xs: Vec<Vec<f64>>,
    images: Vec<Vec<f64>>,
    /// Indices into `xs`/`images` of the nondominated points, ascending.
    front: Vec<usize>,
}

/// Evaluates `prob` on a `resolution^n` grid (both domain faces included).
pub fn build_grid_oracle(prob: &ProblemDefinition, resolution: usize) -> Result<GridOracle> {
    let n = prob.dim();
    if n > MAX_ORACLE_DIM {
        return Err(Error::OracleTooLarge(n));
    }
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!("oracle resolution must be at least 2, got {resolution}")));
    }
    let lo = prob.domain().lower().to_vec();
    let hi = prob.domain().upper().to_vec();
    let spacing: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (b - a) / (resolution - 1) as f64).collect();
    let total = resolution.pow(n as u32);
    let coord = |axis: usize, i: usize| {
        if i == resolution - 1 {
            hi[axis]
        } else {
            lo[axis] + spacing[axis] * i as f64
        }
    };

    let evaluated: Vec<Option<(Vec<f64>, Vec<f64>)>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rest = flat;
            let x: Vec<f64> = (0..n)
                .map(|axis| {
                    let i = rest % resolution;
                    rest /= resolution;
                    coord(axis, i)
                })
                .collect();
            let e = prob.evaluate(&x)?;
            Ok(e.feasible.then_some((x, e.objectives)))
        })
        .collect::<Result<_>>()?;
    let (xs, images): (Vec<_>, Vec<_>) = evaluated.into_iter().flatten().unzip();
    let front = pareto_front(&images);
    Ok(GridOracle {
        resolution,
        spacing,
        evaluated: total,
        xs,
        images,
        front,
    })
}

fn weakly_better(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Lexicographic sweep: a dominator always sorts first, and every dominated
/// point is beaten by some point already on the running front.
fn pareto_front(images: &[Vec<f64>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..images.len()).collect();
    order.sort_by(|&a, &b| {
        images[a]
            .iter()
            .zip(&images[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        if !front.iter().rev().any(|&f| weakly_better(&images[f], &images[i])) {
            front.push(i);
        }
    }
    front.sort_unstable();
    front
}

fn cone_image(y: &[f64], eps: f64) -> Vec<f64> {
    (0..y.len())
        .map(|i| {
            let mut others = 0.0;
            for (j, v) in y.iter().enumerate() {
                if j != i {
                    others += v;
                }
            }
            y[i] + eps * others
        })
        .collect()
}

impl GridOracle {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    /// Grid points evaluated, feasible or not.
    pub fn evaluated(&self) -> usize {
        self.evaluated
    }

    /// Feasible grid points.
    pub fn points(&self) -> &[Vec<f64>] {
        &self.xs
    }

    /// Raw images of the feasible grid points.
    pub fn images(&self) -> &[Vec<f64>] {
        &self.images
    }

    pub fn front_indices(&self) -> &[usize] {
        &self.front
    }

    /// Nondominated feasible grid points with their raw images.
    pub fn pareto_front(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        self.front
            .iter()
            .map(|&i| (self.xs[i].clone(), self.images[i].clone()))
            .collect()
    }

    /// Indices of the feasible grid points whose images (normalized with
    /// `reference` when given) no other feasible image eps-dominates.
    pub fn proper_indices(&self, eps: f64, reference: Option<&ReferencePoints>) -> Vec<usize> {
        let scaled: Vec<Vec<f64>> = self
            .front
            .iter()
            .map(|&i| self.scaled_image(i, reference))
            .collect();
        let mapped: Vec<Vec<f64>> = scaled.iter().map(|y| cone_image(y, eps)).collect();
        let mut keep = Vec::new();
        for (a, &i) in self.front.iter().enumerate() {
            let beaten = (0..scaled.len()).any(|b| {
                b != a && scaled[b] != scaled[a] && mapped[b].iter().zip(&mapped[a]).all(|(u, v)| u <= v)
            });
            if !beaten {
                keep.push(i);
            }
        }
        keep
    }

    /// The eps-proper grid points as `(x, image)` pairs, images normalized
    /// with `reference` when given.
    pub fn oracle_proper_front(&self, eps: f64, reference: Option<&ReferencePoints>) -> Vec<(Vec<f64>, Vec<f64>)> {
        self.proper_indices(eps, reference)
            .into_iter()
            .map(|i| (self.xs[i].clone(), self.scaled_image(i, reference)))
            .collect()
    }

    fn scaled_image(&self, i: usize, reference: Option<&ReferencePoints>) -> Vec<f64> {
        match reference {
            Some(r) => self.images[i]
                .iter()
                .zip(r.ideal().iter().zip(r.nadir()))
                .map(|(v, (z, n))| (v - z) / (n - z))
                .collect(),
            None => self.images[i].clone(),
        }
    }
}

/// Groups points by single linkage: two points share a cluster when a chain
/// of steps no longer than `link` joins them. Clusters come out in order of
/// their first member.
pub fn knee_clusters(points: &[Vec<f64>], link: f64) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; points.len()];
    let mut clusters = Vec::new();
    for seed in 0..points.len() {
        if label[seed] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        label[seed] = id;
        let mut members = vec![seed];
        let mut head = 0;
        while head < members.len() {
            let p = members[head];
            head += 1;
            for q in 0..points.len() {
                if label[q] == usize::MAX {
                    let d: f64 = points[p].iter().zip(&points[q]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                    if d <= link {
                        label[q] = id;
                        members.push(q);
                    }
                }
            }
        }
        members.sort_unstable();
        clusters.push(members);
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(m_pair: fn(f64, &mut [f64])) -> ProblemDefinition {
        ProblemDefinition::builder("t", vec![0.0], vec![1.0])
            .objectives(2, move |x, f| m_pair(x[0], f))
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap()
    }

    #[test]
    fn identity_objective() {
        let o = build_grid_oracle(&line(|x, f| {
            f[0] = x;
            f[1] = x;
        }), 3)
        .unwrap();
        let firsts: Vec<f64> = o.images().iter().map(|y| y[0]).collect();
        assert_eq!(firsts, vec![0.0, 0.5, 1.0]);
        assert_eq!(o.pareto_front(), vec![(vec![0.0], vec![0.0, 0.0])]);
    }

    #[test]
    fn linear_tradeoff_is_all_nondominated() {
        let o = build_grid_oracle(&line(|x, f| {
            f[0] = x;
            f[1] = 1.0 - x;
        }), 11)
        .unwrap();
        assert_eq!(o.front_indices().len(), 11);
        assert_eq!(o.proper_indices(0.0, None), o.front_indices());
    }

    #[test]
    fn infeasible_everywhere() {
        let p = ProblemDefinition::builder("t", vec![0.0, 0.0], vec![1.0, 1.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = x[1];
            })
            .constraints(1, |_, g| g[0] = -1.0)
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap();
        let o = build_grid_oracle(&p, 5).unwrap();
        assert!(o.pareto_front().is_empty());
        assert!(o.oracle_proper_front(0.5, None).is_empty());
        assert_eq!(o.evaluated(), 25);
    }

    #[test]
    fn guards() {
        let p = ProblemDefinition::builder("t", vec![0.0; 4], vec![1.0; 4])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = x[1];
            })
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap();
        assert!(matches!(build_grid_oracle(&p, 4), Err(Error::OracleTooLarge(4))));
        assert!(build_grid_oracle(&line(|x, f| f.fill(x)), 1).is_err());
    }

    #[test]
    fn singleton_feasible_set() {
        let p = ProblemDefinition::builder("t", vec![0.0], vec![1.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = -x[0];
            })
            .constraints(1, |x, g| g[0] = -(x[0] - 0.5).abs())
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap();
        let o = build_grid_oracle(&p, 3).unwrap();
        assert_eq!(o.oracle_proper_front(0.75, None), vec![(vec![0.5], vec![0.5, -0.5])]);
    }

    #[test]
    fn clusters_split_on_gaps() {
        let pts = vec![vec![0.0, 0.0], vec![0.05, 0.0], vec![1.0, 1.0], vec![0.1, 0.0]];
        assert_eq!(knee_clusters(&pts, 0.06), vec![vec![0, 1, 3], vec![2]]);
    }
}
