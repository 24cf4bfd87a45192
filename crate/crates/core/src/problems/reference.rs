use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};

/// Ideal and nadir estimates used to rescale every objective to roughly
/// `[0, 1]` before any dominance test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePoints {
    ideal: Vec<f64>,
    nadir: Vec<f64>,
}

impl ReferencePoints {
    pub fn new(ideal: Vec<f64>, nadir: Vec<f64>) -> Result<Self> {
        check_dims(ideal.len(), nadir.len())?;
        for (index, (&lo, &hi)) in ideal.iter().zip(&nadir).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::DegenerateRange {
                    index,
                    ideal: lo,
                    nadir: hi,
                });
            }
        }
        Ok(Self { ideal, nadir })
    }

    /// Ideal at the origin, nadir at all ones: normalization is the identity.
    pub fn identity(m: usize) -> Self {
        Self {
            ideal: vec![0.0; m],
            nadir: vec![1.0; m],
        }
    }

    pub fn ideal(&self) -> &[f64] {
        &self.ideal
    }

    pub fn nadir(&self) -> &[f64] {
        &self.nadir
    }

    pub fn dim(&self) -> usize {
        self.ideal.len()
    }

    /// `nadir_i - ideal_i` per objective.
    pub fn ranges(&self) -> Vec<f64> {
        self.ideal.iter().zip(&self.nadir).map(|(z, n)| n - z).collect()
    }

    pub fn normalize(&self, y: &[f64]) -> Result<Vec<f64>> {
        normalize(y, self)
    }

    pub(crate) fn normalize_unchecked(&self, y: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(self.ideal.iter().zip(&self.nadir))
            .map(|(v, (z, n))| (v - z) / (n - z))
            .collect()
    }

    pub fn denormalize(&self, y: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(self.ideal.iter().zip(&self.nadir))
            .map(|(v, (z, n))| z + v * (n - z))
            .collect()
    }

    /// Lipschitz constants of the normalized objectives.
    pub fn scale_lipschitz(&self, lipschitz: &[f64]) -> Vec<f64> {
        lipschitz
            .iter()
            .zip(self.ranges())
            .map(|(l, r)| l / r)
            .collect()
    }

    pub fn update<'a, L, U>(&mut self, lower_bounds: L, upper_bounds: U)
    where
        L: IntoIterator<Item = &'a [f64]>,
        U: IntoIterator<Item = &'a [f64]>,
    {
        for l in lower_bounds {
            for (z, v) in self.ideal.iter_mut().zip(l) {
                if *v < *z {
                    *z = *v;
                }
            }
        }
        for u in upper_bounds {
            for (n, v) in self.nadir.iter_mut().zip(u) {
                if *v > *n {
                    *n = *v;
                }
            }
        }
    }
}

/// `(y_i - ideal_i) / (nadir_i - ideal_i)` per component.
pub fn normalize(y: &[f64], reference: &ReferencePoints) -> Result<Vec<f64>> {
    check_dims(reference.dim(), y.len())?;
    for (index, (&z, &n)) in reference.ideal.iter().zip(&reference.nadir).enumerate() {
        if !(z < n) {
            return Err(Error::DegenerateRange {
                index,
                ideal: z,
                nadir: n,
            });
        }
    }
    Ok(reference.normalize_unchecked(y))
}

/// Lowers the ideal to the componentwise minimum of `lower_bounds` and raises
/// the nadir to the componentwise maximum of `upper_bounds`. Never moves
/// either point inward.
pub fn update_reference_points(
    reference: &ReferencePoints,
    lower_bounds: &[Vec<f64>],
    upper_bounds: &[Vec<f64>],
) -> ReferencePoints {
    let mut next = reference.clone();
    next.update(
        lower_bounds.iter().map(Vec::as_slice),
        upper_bounds.iter().map(Vec::as_slice),
    );
    next
}
