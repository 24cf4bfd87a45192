//! Per-box bounds: Lipschitz lower bounds, midpoint upper bounds and the
//! Lipschitz feasibility test. Lower and upper bounds live in normalized
//! objective space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoxId, SearchBox};
use crate::problems::{ProblemDefinition, ReferencePoints};

/// Result of the feasibility test on a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeasibilityStatus {
    ProvablyInfeasible,
    Unknown,
    HasFeasiblePoint,
}

/// A feasible point found inside a box, with its raw and normalized image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperCandidate {
    pub x: Vec<f64>,
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
}

impl UpperCandidate {
    /// Evaluates `x` and keeps it only if feasible.
    pub fn at(prob: &ProblemDefinition, x: Vec<f64>, reference: &ReferencePoints) -> Result<Option<Self>> {
        let e = prob.evaluate(&x)?;
        if !e.feasible {
            return Ok(None);
        }
        let normalized = reference.normalize(&e.objectives)?;
        Ok(Some(Self {
            x,
            raw: e.objectives,
            normalized,
        }))
    }

    pub fn renormalize(&mut self, reference: &ReferencePoints) {
        self.normalized = reference.normalize_unchecked(&self.raw);
    }
}

/// A live box with its bounds for the current iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub box_id: BoxId,
    pub lower: Vec<f64>,
    pub upper_candidates: Vec<UpperCandidate>,
    pub feasible_status: FeasibilityStatus,
    /// Exempt from the discarding test this iteration.
    pub protected: bool,
}

impl BoundRecord {
    pub fn new(box_id: BoxId, lower: Vec<f64>) -> Self {
        Self {
            box_id,
            lower,
            upper_candidates: Vec::new(),
            feasible_status: FeasibilityStatus::Unknown,
            protected: false,
        }
    }

    pub fn set_candidates(&mut self, candidates: Vec<UpperCandidate>) {
        if !candidates.is_empty() {
            self.feasible_status = FeasibilityStatus::HasFeasiblePoint;
        }
        self.upper_candidates = candidates;
    }
}

/// Normalized Lipschitz lower bound: `F(m(B)) - (L / 2) * diam(B)`, with
/// both the image and the constants in normalized units.
pub fn lipschitz_lower_bound(
    prob: &ProblemDefinition,
    b: &SearchBox,
    reference: &ReferencePoints,
) -> Result<Vec<f64>> {
    let scaled = reference.scale_lipschitz(prob.lipschitz_f());
    lower_bound_with(prob, b, reference, &scaled)
}

/// Same as [`lipschitz_lower_bound`] with precomputed normalized constants.
pub fn lower_bound_with(
    prob: &ProblemDefinition,
    b: &SearchBox,
    reference: &ReferencePoints,
    scaled_lipschitz: &[f64],
) -> Result<Vec<f64>> {
    let mid = b.midpoint();
    let image = prob.evaluate(&mid)?;
    let half_diam = b.diameter() / 2.0;
    Ok(reference
        .normalize(&image.objectives)?
        .into_iter()
        .zip(scaled_lipschitz)
        .map(|(f, l)| f - l * half_diam)
        .collect())
}

/// The lower bound of `b` together with the midpoint's image when the
/// midpoint is feasible. One evaluation serves both.
pub fn bound_box(
    prob: &ProblemDefinition,
    b: &SearchBox,
    reference: &ReferencePoints,
    scaled_lipschitz: &[f64],
) -> Result<(Vec<f64>, Option<UpperCandidate>)> {
    let mid = b.midpoint();
    let image = prob.evaluate(&mid)?;
    let normalized = reference.normalize(&image.objectives)?;
    let half_diam = b.diameter() / 2.0;
    let lower = normalized
        .iter()
        .zip(scaled_lipschitz)
        .map(|(f, l)| f - l * half_diam)
        .collect();
    let upper = image.feasible.then(|| UpperCandidate {
        x: mid,
        raw: image.objectives,
        normalized,
    });
    Ok((lower, upper))
}

/// Proves a box infeasible when some constraint's largest possible value
/// over it is negative. The bound per constraint is the tighter of the
/// Lipschitz estimate `g_j(m(B)) + (L_gj / 2) * diam(B)` and the problem's
/// own enclosure, whichever are available. With neither nothing can be
/// proven.
pub fn feasibility_test(prob: &ProblemDefinition, b: &SearchBox) -> FeasibilityStatus {
    if prob.n_constraints() == 0 {
        return FeasibilityStatus::Unknown;
    }
    let mut upper = prob.constraint_upper_bounds(b);
    if let Some(lg) = prob.lipschitz_g() {
        let g = prob.constraints_unchecked(&b.midpoint());
        let half_diam = b.diameter() / 2.0;
        let lipschitz: Vec<f64> = g
            .iter()
            .zip(lg)
            .map(|(gj, l)| if gj.is_finite() { gj + l * half_diam } else { f64::INFINITY })
            .collect();
        upper = Some(match upper {
            Some(u) => u.iter().zip(&lipschitz).map(|(a, b)| a.min(*b)).collect(),
            None => lipschitz,
        });
    }
    match upper {
        Some(u) if u.iter().any(|&v| v < 0.0) => FeasibilityStatus::ProvablyInfeasible,
        _ => FeasibilityStatus::Unknown,
    }
}

/// The image of the box midpoint, if the midpoint is feasible.
pub fn midpoint_upper_bound(
    prob: &ProblemDefinition,
    b: &SearchBox,
    reference: &ReferencePoints,
) -> Result<Option<UpperCandidate>> {
    UpperCandidate::at(prob, b.midpoint(), reference)
}

/// Where upper bounds come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum UpperBoundMode {
    /// Image of the box midpoint (the setting of the efficiency guarantee).
    Midpoint,
    /// A small decomposition-based evolutionary run inside the box.
    #[default]
    Moea,
}

impl std::str::FromStr for UpperBoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "midpoint" => Ok(Self::Midpoint),
            "moea" => Ok(Self::Moea),
            other => Err(Error::InvalidConfig(format!(
                "unknown upper-bound mode `{other}` (expected midpoint or moea)"
            ))),
        }
    }
}

impl std::fmt::Display for UpperBoundMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Midpoint => "midpoint",
            Self::Moea => "moea",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(lo: &[f64], hi: &[f64]) -> SearchBox {
        SearchBox::new(lo.to_vec(), hi.to_vec(), 3).unwrap()
    }

    fn line_problem() -> ProblemDefinition {
        // F = (x, -x) on [0, 2]
        ProblemDefinition::builder("line", vec![0.0], vec![2.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = -x[0];
            })
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        let p = line_problem();
        let id = ReferencePoints::identity(2);
        let l = lipschitz_lower_bound(&p, &bx(&[0.0], &[2.0]), &id).unwrap();
        assert_eq!(l, vec![0.0, -2.0]);
        let l = lipschitz_lower_bound(&p, &bx(&[0.5], &[0.5]), &id).unwrap();
        assert_eq!(l, vec![0.5, -0.5]);
    }

    #[test]
    fn lower_bound_uses_normalized_constants() {
        let p = line_problem();
        let r = ReferencePoints::new(vec![0.0, -2.0], vec![2.0, 0.0]).unwrap();
        // F(1) = (1, -1) -> (0.5, 0.5); L/range = 0.5; diam/2 = 1
        let l = lipschitz_lower_bound(&p, &bx(&[0.0], &[2.0]), &r).unwrap();
        assert_eq!(l, vec![0.0, 0.0]);
    }

    fn constrained(g: fn(&[f64], &mut [f64]), lg: f64) -> ProblemDefinition {
        ProblemDefinition::builder("c", vec![0.0], vec![20.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = -x[0];
            })
            .constraints(1, g)
            .lipschitz(vec![1.0, 1.0])
            .constraint_lipschitz(vec![lg])
            .build()
            .unwrap()
    }

    #[test]
    fn feasibility_examples() {
        let p = constrained(|x, g| g[0] = x[0] - 10.0, 1.0);
        assert_eq!(
            feasibility_test(&p, &bx(&[0.0], &[1.0])),
            FeasibilityStatus::ProvablyInfeasible
        );
        let p = constrained(|x, g| g[0] = x[0], 1.0);
        assert_eq!(feasibility_test(&p, &bx(&[1.0], &[2.0])), FeasibilityStatus::Unknown);
        assert_eq!(
            feasibility_test(&line_problem(), &bx(&[0.0], &[2.0])),
            FeasibilityStatus::Unknown
        );
    }

    #[test]
    fn feasibility_without_constraint_constants_is_unknown() {
        let p = constrained(|x, g| g[0] = x[0] - 10.0, 1.0)
            .with_constraint_lipschitz(None)
            .unwrap();
        assert_eq!(feasibility_test(&p, &bx(&[0.0], &[1.0])), FeasibilityStatus::Unknown);
    }

    #[test]
    fn enclosure_tightens_the_test() {
        // Lipschitz alone cannot prove [0, 1] infeasible for g = x - 1.2 with L = 10
        let p = constrained(|x, g| g[0] = x[0] - 1.2, 10.0);
        let b = bx(&[0.0], &[1.0]);
        assert_eq!(feasibility_test(&p, &b), FeasibilityStatus::Unknown);
        let p = ProblemDefinition::builder("c", vec![0.0], vec![20.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = -x[0];
            })
            .constraints(1, |x, g| g[0] = x[0] - 1.2)
            .constraint_enclosure(|_, hi, out| out[0] = hi[0] - 1.2)
            .lipschitz(vec![1.0, 1.0])
            .constraint_lipschitz(vec![10.0])
            .build()
            .unwrap();
        assert_eq!(feasibility_test(&p, &b), FeasibilityStatus::ProvablyInfeasible);
        assert_eq!(feasibility_test(&p, &bx(&[1.0], &[2.0])), FeasibilityStatus::Unknown);
    }

    #[test]
    fn midpoint_upper_bound_examples() {
        let id = ReferencePoints::identity(2);
        let u = midpoint_upper_bound(&line_problem(), &bx(&[0.0], &[2.0]), &id)
            .unwrap()
            .unwrap();
        assert_eq!((u.normalized, u.x), (vec![1.0, -1.0], vec![1.0]));

        let p = constrained(|x, g| g[0] = x[0] - 10.0, 1.0);
        assert!(midpoint_upper_bound(&p, &bx(&[0.0], &[2.0]), &id).unwrap().is_none());
        // g(m) = 0 is feasible
        let u = midpoint_upper_bound(&p, &bx(&[9.0], &[11.0]), &id).unwrap();
        assert_eq!(u.unwrap().x, vec![10.0]);
    }

    #[test]
    fn bound_box_matches_parts() {
        let p = constrained(|x, g| g[0] = x[0] - 10.0, 1.0);
        let id = ReferencePoints::identity(2);
        for (lo, hi) in [(0.0, 2.0), (9.0, 11.0), (12.0, 20.0)] {
            let b = bx(&[lo], &[hi]);
            let (l, u) = bound_box(&p, &b, &id, &[1.0, 1.0]).unwrap();
            assert_eq!(l, lipschitz_lower_bound(&p, &b, &id).unwrap());
            assert_eq!(u, midpoint_upper_bound(&p, &b, &id).unwrap());
        }
    }

    #[test]
    fn ub_mode_parses() {
        assert_eq!("midpoint".parse::<UpperBoundMode>().unwrap(), UpperBoundMode::Midpoint);
        assert_eq!("MOEA".parse::<UpperBoundMode>().unwrap(), UpperBoundMode::Moea);
        assert!("vertex".parse::<UpperBoundMode>().is_err());
    }

    proptest! {
        #[test]
        fn lower_bound_never_exceeds_image(
            a in -3.0f64..3.0, b in -3.0f64..3.0, wa in 0.0f64..3.0, wb in 0.0f64..3.0,
            ta in 0.0f64..1.0, tb in 0.0f64..1.0,
        ) {
            // L = (2, 2) is a valid constant for F = (sin(x1) + x2, x1 - cos(x2))
            // (gradient norms are at most sqrt(2))
            let p = ProblemDefinition::builder("s", vec![-3.0, -3.0], vec![6.0, 6.0])
                .objectives(2, |x, f| {
                    f[0] = x[0].sin() + x[1];
                    f[1] = x[0] - x[1].cos();
                })
                .lipschitz(vec![2.0, 2.0])
                .build()
                .unwrap();
            let bb = bx(&[a, b], &[a + wa, b + wb]);
            let x = [a + ta * wa, b + tb * wb];
            let id = ReferencePoints::identity(2);
            let l = lipschitz_lower_bound(&p, &bb, &id).unwrap();
            let f = p.evaluate(&x).unwrap().objectives;
            prop_assert!(l[0] <= f[0] && l[1] <= f[1]);
        }
    }
}
