//! The polyhedral cone order used by the discarding test.
//!
//! For a parameter `eps` in `[0, 1)` the linear map `T_eps` has ones on the
//! diagonal and `eps` everywhere else. A vector `a` eps-dominates `b` when
//! `a != b` and `T_eps(a) <= T_eps(b)` componentwise, i.e. `b - a` lies in the
//! cone `{y : T_eps(y) >= 0}` minus the origin. At `eps = 0` this is Pareto
//! dominance; larger `eps` gives a blunter cone and a stronger order.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};

/// The cone parameter, validated to lie in `[0, 1)`.
///
/// `eps = 1` is rejected: the all-ones map is singular and the order
/// collapses to a comparison of objective sums.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ConeEps(f64);

impl ConeEps {
    pub const PARETO: ConeEps = ConeEps(0.0);

    pub fn new(eps: f64) -> Result<Self> {
        if (0.0..1.0).contains(&eps) {
            Ok(Self(eps))
        } else {
            Err(Error::InvalidEps(eps))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ConeEps {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ConeEps> for f64 {
    fn from(e: ConeEps) -> f64 {
        e.0
    }
}

/// Applies `T_eps`: component `i` is `y_i + eps * sum_{j != i} y_j`.
pub fn apply_t_eps(y: &[f64], eps: ConeEps) -> Result<Vec<f64>> {
    if y.len() < 2 {
        return Err(Error::TooFewObjectives(y.len()));
    }
    Ok(t_eps_unchecked(y, eps))
}

pub(crate) fn t_eps_unchecked(y: &[f64], eps: ConeEps) -> Vec<f64> {
    let e = eps.0;
    (0..y.len())
        .map(|i| {
            // fixed summation order keeps the map monotone under rounding
            let others: f64 = y
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v)
                .sum();
            y[i] + e * others
        })
        .collect()
}

/// `a` Pareto-dominates `b`: `a <= b` componentwise and `a != b`.
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    check_dims(a.len(), b.len())?;
    Ok(weakly_le(a, b) && a != b)
}

/// `a` eps-dominates `b` under the cone order.
pub fn eps_dominates(a: &[f64], b: &[f64], eps: ConeEps) -> Result<bool> {
    check_dims(a.len(), b.len())?;
    if a.len() < 2 {
        return Err(Error::TooFewObjectives(a.len()));
    }
    if a == b {
        return Ok(false);
    }
    Ok(weakly_le(&t_eps_unchecked(a, eps), &t_eps_unchecked(b, eps)))
}

#[inline]
pub(crate) fn weakly_le(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Precomputed `T_eps` image of a vector, so repeated comparisons against the
/// same point only pay for the map once.
#[derive(Debug, Clone)]
pub struct MappedPoint<'a> {
    pub raw: &'a [f64],
    pub mapped: Vec<f64>,
    mapped_sum: f64,
}

impl<'a> MappedPoint<'a> {
    pub fn new(raw: &'a [f64], eps: ConeEps) -> Self {
        let mapped = t_eps_unchecked(raw, eps);
        let mapped_sum = mapped.iter().sum();
        Self {
            raw,
            mapped,
            mapped_sum,
        }
    }

    /// `self` eps-dominates `other`, with an optional absolute slack
    /// (`tol = 0` is the exact relation).
    #[inline]
    pub fn dominates(&self, other: &MappedPoint<'_>, tol: f64) -> bool {
        self.raw != other.raw
            && self
                .mapped
                .iter()
                .zip(&other.mapped)
                .all(|(a, b)| *a <= *b + tol)
    }
}

/// Returns the indices (ascending) of the points not eps-dominated by any
/// other point of the set. Duplicates are all kept.
///
/// With `tol = 0` points are visited in ascending order of their mapped
/// coordinate sum: a dominator never has a larger sum than the point it
/// dominates, and by transitivity it suffices to compare against the
/// survivors found so far plus every point of equal sum. A positive `tol`
/// breaks transitivity, so that case uses the plain pairwise sweep.
pub fn non_eps_dominated_indices<V: AsRef<[f64]>>(points: &[V], eps: ConeEps, tol: f64) -> Vec<usize> {
    let mapped: Vec<MappedPoint<'_>> = points
        .iter()
        .map(|p| MappedPoint::new(p.as_ref(), eps))
        .collect();
    if tol > 0.0 {
        return (0..mapped.len())
            .filter(|&i| !mapped.iter().any(|q| q.dominates(&mapped[i], tol)))
            .collect();
    }

    let mut order: Vec<usize> = (0..mapped.len()).collect();
    order.sort_by(|&a, &b| {
        mapped[a]
            .mapped_sum
            .total_cmp(&mapped[b].mapped_sum)
            .then(a.cmp(&b))
    });

    let mut survivors: Vec<usize> = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let sum = mapped[order[start]].mapped_sum;
        let mut end = start + 1;
        while end < order.len() && mapped[order[end]].mapped_sum == sum {
            end += 1;
        }
        let group = &order[start..end];
        let mut kept = Vec::new();
        for &i in group {
            let p = &mapped[i];
            let beaten = survivors.iter().any(|&s| mapped[s].dominates(p, 0.0))
                || group.iter().any(|&j| j != i && mapped[j].dominates(p, 0.0));
            if !beaten {
                kept.push(i);
            }
        }
        survivors.extend(kept);
        start = end;
    }
    survivors.sort_unstable();
    survivors
}

/// Keeps the elements whose vectors are not eps-dominated by another element.
/// Payloads travel with their vectors; input order is preserved.
pub fn filter_non_eps_dominated<V: AsRef<[f64]> + Clone, P: Clone>(
    set: &[(V, P)],
    eps: ConeEps,
) -> Vec<(V, P)> {
    let vectors: Vec<&[f64]> = set.iter().map(|(v, _)| v.as_ref()).collect();
    non_eps_dominated_indices(&vectors, eps, 0.0)
        .into_iter()
        .map(|i| set[i].clone())
        .collect()
}
