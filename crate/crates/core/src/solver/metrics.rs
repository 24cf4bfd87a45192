//! Set distances and the approximate-efficiency check.

use crate::error::{Error, Result};
use crate::problems::{ProblemDefinition, ReferencePoints};

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `max_{a in A} min_{b in B} |a - b|`.
pub fn directed_hausdorff<A: AsRef<[f64]>, B: AsRef<[f64]>>(a: &[A], b: &[B]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(a.iter()
        .map(|p| {
            b.iter()
                .map(|q| euclid(p.as_ref(), q.as_ref()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance.
pub fn hausdorff<A: AsRef<[f64]>, B: AsRef<[f64]>>(a: &[A], b: &[B]) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// True unless some witness image beats `f(x) - eps_val` in every objective:
/// `F(w) <= F(x) - eps_val * e` componentwise with at least one strict
/// inequality.
///
/// Images are compared after normalization when `reference` is given.
/// Infeasible witnesses are skipped.
pub fn check_eps_efficient(
    x: &[f64],
    eps_val: f64,
    prob: &ProblemDefinition,
    witnesses: &[Vec<f64>],
    reference: Option<&ReferencePoints>,
) -> Result<bool> {
    let image = |p: &[f64]| -> Result<Option<Vec<f64>>> {
        let e = prob.evaluate(p)?;
        if !e.feasible {
            return Ok(None);
        }
        Ok(Some(match reference {
            Some(r) => r.normalize(&e.objectives)?,
            None => e.objectives,
        }))
    };
    let fx = match image(x)? {
        Some(v) => v,
        None => prob.evaluate(x).map(|e| match reference {
            Some(r) => r.normalize_unchecked(&e.objectives),
            None => e.objectives,
        })?,
    };
    let mut images = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        if let Some(v) = image(w)? {
            images.push(v);
        }
    }
    Ok(check_eps_efficient_images(&fx, eps_val, &images))
}

/// [`check_eps_efficient`] on precomputed images.
pub fn check_eps_efficient_images(fx: &[f64], eps_val: f64, witness_images: &[Vec<f64>]) -> bool {
    let shifted: Vec<f64> = fx.iter().map(|v| v - eps_val).collect();
    !witness_images.iter().any(|w| {
        w.iter().zip(&shifted).all(|(a, b)| a <= b) && w.iter().zip(&shifted).any(|(a, b)| a < b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_examples() {
        assert_eq!(directed_hausdorff(&[[0.0, 0.0]], &[[3.0, 4.0]]).unwrap(), 5.0);
        let b = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.5]];
        assert_eq!(directed_hausdorff(&b[..2], &b).unwrap(), 0.0);
        let d = directed_hausdorff(&[[0.0, 0.0], [1.0, 1.0]], &[[0.0, 0.0]]).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        let empty: [[f64; 2]; 0] = [];
        assert!(matches!(directed_hausdorff(&empty, &b), Err(Error::EmptySet)));
        assert!(matches!(directed_hausdorff(&b, &empty), Err(Error::EmptySet)));
    }

    #[test]
    fn symmetric_examples() {
        let a = [[0.3, 0.1], [0.5, 0.9]];
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&[[0.0, 0.0]], &[[3.0, 4.0]]).unwrap(), 5.0);
        assert_eq!(hausdorff(&[[0.0, 0.0], [10.0, 0.0]], &[[0.0, 0.0]]).unwrap(), 10.0);
        assert_eq!(hausdorff(&[[0.0, 0.0]], &[[0.0, 0.0], [10.0, 0.0]]).unwrap(), 10.0);
    }

    fn identity_line() -> ProblemDefinition {
        // f = (x, x): m = 2 is the smallest supported objective count
        ProblemDefinition::builder("line", vec![0.0], vec![1.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = x[0];
            })
            .lipschitz(vec![1.0, 1.0])
            .build()
            .unwrap()
    }

    #[test]
    fn eps_efficiency_examples() {
        let p = identity_line();
        assert!(!check_eps_efficient(&[1.0], 0.5, &p, &[vec![0.0]], None).unwrap());
        assert!(check_eps_efficient(&[1.0], 0.5, &p, &[vec![1.0]], None).unwrap());
        assert!(check_eps_efficient(&[1.0], 2.0, &p, &[vec![0.0], vec![0.5]], None).unwrap());
        // at eps_val = 0 it is plain Pareto efficiency
        assert!(check_eps_efficient(&[0.0], 0.0, &p, &[vec![0.0], vec![0.5]], None).unwrap());
        assert!(!check_eps_efficient(&[0.5], 0.0, &p, &[vec![0.25]], None).unwrap());
    }
}
