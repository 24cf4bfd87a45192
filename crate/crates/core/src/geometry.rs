//! Axis-aligned boxes in decision space.
//!
//! Boxes are immutable values. Bisection always cuts the widest edge at its
//! midpoint (lowest index on ties), so every box at a given depth of a
//! breadth-first refinement of one domain has the same shape.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a box, assigned from a monotone counter at creation.
pub type BoxId = u64;

/// Hands out box identifiers in creation order.
#[derive(Debug, Clone, Default)]
pub struct IdCounter {
    next: BoxId,
}

impl IdCounter {
    pub fn starting_at(next: BoxId) -> Self {
        Self { next }
    }

    pub fn next_id(&mut self) -> BoxId {
        let id = self.next;
        self.next += 1;
        id
    }

    pub fn peek(&self) -> BoxId {
        self.next
    }
}

/// An axis-aligned hyperrectangle with its bisection lineage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
    id: BoxId,
    parent_id: Option<BoxId>,
    depth: u32,
}

impl SearchBox {
    /// Creates a root box (no parent, depth 0).
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, id: BoxId) -> Result<Self> {
        crate::error::check_dims(lower.len(), upper.len())?;
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidBox {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self {
            lower,
            upper,
            id,
            parent_id: None,
            depth: 0,
        })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn id(&self) -> BoxId {
        self.id
    }

    pub fn parent_id(&self) -> Option<BoxId> {
        self.parent_id
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (lo + hi) / 2.0)
            .collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .collect()
    }

    /// Euclidean norm of the width vector.
    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    pub fn volume(&self) -> f64 {
        self.widths().iter().product()
    }

    /// Index of the widest edge, lowest index on ties.
    pub fn widest_dimension(&self) -> usize {
        let mut best = 0;
        let mut best_width = f64::NEG_INFINITY;
        for (k, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            let w = hi - lo;
            if w > best_width {
                best = k;
                best_width = w;
            }
        }
        best
    }

    /// Splits the widest edge at its midpoint. Children get consecutive ids
    /// from `ids`, the lower half first.
    pub fn bisect(&self, ids: &mut IdCounter) -> Result<(SearchBox, SearchBox)> {
        if self.diameter() <= 0.0 {
            return Err(Error::DegenerateBox(self.id));
        }
        let k = self.widest_dimension();
        let cut = (self.lower[k] + self.upper[k]) / 2.0;

        let mut left_upper = self.upper.clone();
        left_upper[k] = cut;
        let mut right_lower = self.lower.clone();
        right_lower[k] = cut;

        let left = SearchBox {
            lower: self.lower.clone(),
            upper: left_upper,
            id: ids.next_id(),
            parent_id: Some(self.id),
            depth: self.depth + 1,
        };
        let right = SearchBox {
            lower: right_lower,
            upper: self.upper.clone(),
            id: ids.next_id(),
            parent_id: Some(self.id),
            depth: self.depth + 1,
        };
        Ok((left, right))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.contains_inflated(x, 0.0)
    }

    /// Membership test against the box grown by `margin` on every side.
    pub fn contains_inflated(&self, x: &[f64], margin: f64) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo - margin && v <= hi + margin)
    }

    /// Projects `x` onto the box, coordinate by coordinate.
    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(lo, hi);
        }
    }
}

/// Free-function form of [`SearchBox::midpoint`].
pub fn midpoint(b: &SearchBox) -> Vec<f64> {
    b.midpoint()
}

/// Free-function form of [`SearchBox::diameter`].
pub fn diameter(b: &SearchBox) -> f64 {
    b.diameter()
}

/// Free-function form of [`SearchBox::bisect`].
pub fn bisect(b: &SearchBox, ids: &mut IdCounter) -> Result<(SearchBox, SearchBox)> {
    b.bisect(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(lower: &[f64], upper: &[f64]) -> SearchBox {
        SearchBox::new(lower.to_vec(), upper.to_vec(), 0).unwrap()
    }

    #[test]
    fn midpoint_examples() {
        assert_eq!(bx(&[0.0, 0.0], &[2.0, 4.0]).midpoint(), vec![1.0, 2.0]);
        assert_eq!(bx(&[1.0], &[1.0]).midpoint(), vec![1.0]);
        assert_eq!(bx(&[-3.0, -3.0], &[3.0, 3.0]).midpoint(), vec![0.0, 0.0]);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(bx(&[0.0, 0.0], &[3.0, 4.0]).diameter(), 5.0);
        assert_eq!(bx(&[1.0], &[1.0]).diameter(), 0.0);
        for n in 1..6 {
            let b = bx(&vec![0.0; n], &vec![1.0; n]);
            assert!((b.diameter() - (n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn bisect_examples() {
        let mut ids = IdCounter::starting_at(1);
        let (a, b) = bx(&[0.0, 0.0], &[2.0, 1.0]).bisect(&mut ids).unwrap();
        assert_eq!((a.lower(), a.upper()), (&[0.0, 0.0][..], &[1.0, 1.0][..]));
        assert_eq!((b.lower(), b.upper()), (&[1.0, 0.0][..], &[2.0, 1.0][..]));
        assert_eq!((a.id(), b.id()), (1, 2));
        assert_eq!(a.parent_id(), Some(0));
        assert_eq!(a.depth(), 1);

        let (a, b) = bx(&[0.0], &[4.0]).bisect(&mut ids).unwrap();
        assert_eq!((a.upper()[0], b.lower()[0]), (2.0, 2.0));

        // tie goes to dimension 0
        let (a, _) = bx(&[0.0, 0.0], &[1.0, 1.0]).bisect(&mut ids).unwrap();
        assert_eq!(a.upper(), &[0.5, 1.0]);
    }

    #[test]
    fn bisect_zero_diameter_fails() {
        let mut ids = IdCounter::default();
        assert!(matches!(
            bx(&[1.0, 2.0], &[1.0, 2.0]).bisect(&mut ids),
            Err(Error::DegenerateBox(0))
        ));
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(SearchBox::new(vec![1.0], vec![0.0], 0).is_err());
    }

    #[test]
    fn n_rounds_halve_cube_widths() {
        let n = 4;
        let mut ids = IdCounter::starting_at(1);
        let mut b = bx(&vec![0.0; n], &vec![1.0; n]);
        for _ in 0..n {
            b = b.bisect(&mut ids).unwrap().0;
        }
        assert!(b.widths().iter().all(|&w| w == 0.5));
        assert_eq!(b.depth(), n as u32);
    }

    proptest! {
        #[test]
        fn bisection_conserves_volume_and_shrinks(
            dims in prop::collection::vec((-10.0f64..10.0, 0.01f64..5.0), 1..5)
        ) {
            let lower: Vec<f64> = dims.iter().map(|d| d.0).collect();
            let upper: Vec<f64> = dims.iter().map(|d| d.0 + d.1).collect();
            let parent = SearchBox::new(lower, upper, 7).unwrap();
            let mut ids = IdCounter::starting_at(8);
            let (a, b) = parent.bisect(&mut ids).unwrap();
            let vol = parent.volume();
            prop_assert!(((a.volume() + b.volume()) - vol).abs() <= 1e-12 * vol.max(1.0));
            prop_assert!(a.diameter() < parent.diameter());
            prop_assert!(b.diameter() < parent.diameter());
            let k = parent.widest_dimension();
            prop_assert_eq!(a.upper()[k], b.lower()[k]);
            prop_assert_eq!(a.lower()[k], parent.lower()[k]);
            prop_assert_eq!(b.upper()[k], parent.upper()[k]);
            prop_assert_eq!(a.depth(), parent.depth() + 1);
        }
    }
}
