use crate::bounding::BoundRecord;
use crate::cone::{ConeEps, MappedPoint};

/// One flag per record: `true` when some archive vector eps-dominates the
/// record's lower bound and the record is not protected.
pub fn discarding_pass<V: AsRef<[f64]>>(records: &[BoundRecord], upper_archive: &[V], eps: ConeEps) -> Vec<bool> {
    let archive = map_archive(upper_archive, eps);
    records.iter().map(|r| discards(r, &archive, eps)).collect()
}

pub(crate) fn map_archive<V: AsRef<[f64]>>(upper_archive: &[V], eps: ConeEps) -> Vec<MappedPoint<'_>> {
    upper_archive
        .iter()
        .map(|u| MappedPoint::new(u.as_ref(), eps))
        .collect()
}

pub(crate) fn discards(record: &BoundRecord, archive: &[MappedPoint<'_>], eps: ConeEps) -> bool {
    if record.protected {
        return false;
    }
    let l = MappedPoint::new(&record.lower, eps);
    archive.iter().any(|u| u.dominates(&l, 0.0))
}

/// Protects, per objective, the record with the smallest lower-bound
/// component and the record holding the largest upper-candidate component.
/// Ties go to the lowest box id. Existing flags are kept.
pub fn mark_protected(mut records: Vec<BoundRecord>) -> Vec<BoundRecord> {
    let m = records.first().map_or(0, |r| r.lower.len());
    let mut chosen = Vec::new();
    for i in 0..m {
        let mut best: Option<(f64, u64, usize)> = None;
        for (k, r) in records.iter().enumerate() {
            let v = r.lower[i];
            if best.map_or(true, |(bv, bid, _)| v < bv || (v == bv && r.box_id < bid)) {
                best = Some((v, r.box_id, k));
            }
        }
        chosen.extend(best.map(|b| b.2));

        let mut worst: Option<(f64, u64, usize)> = None;
        for (k, r) in records.iter().enumerate() {
            for c in &r.upper_candidates {
                let v = c.normalized[i];
                if worst.map_or(true, |(wv, wid, _)| v > wv || (v == wv && r.box_id < wid)) {
                    worst = Some((v, r.box_id, k));
                }
            }
        }
        chosen.extend(worst.map(|w| w.2));
    }
    for k in chosen {
        records[k].protected = true;
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounding::UpperCandidate;

    fn rec(id: u64, lower: &[f64]) -> BoundRecord {
        BoundRecord::new(id, lower.to_vec())
    }

    #[test]
    fn discarding_examples() {
        let eps = ConeEps::new(0.75).unwrap();
        let u = [vec![0.5, 0.5]];
        assert_eq!(discarding_pass(&[rec(1, &[2.0, 2.0]), rec(2, &[0.0, 0.0])], &u, eps), vec![true, false]);
        let mut p = rec(3, &[2.0, 2.0]);
        p.protected = true;
        assert_eq!(discarding_pass(&[p], &u, eps), vec![false]);
        // equal vectors never discard
        assert_eq!(discarding_pass(&[rec(4, &[0.5, 0.5])], &u, eps), vec![false]);
        let none: [Vec<f64>; 0] = [];
        assert_eq!(discarding_pass(&[rec(5, &[9.0, 9.0])], &none, eps), vec![false]);
    }

    #[test]
    fn cone_discards_beyond_pareto() {
        // (0, 1) does not Pareto-dominate (1, 0.9) but does under eps = 0.75:
        // T(0,1) = (0.75, 1), T(1, 0.9) = (1.675, 1.65)
        let u = [vec![0.0, 1.0]];
        let r = [rec(1, &[1.0, 0.9])];
        assert_eq!(discarding_pass(&r, &u, ConeEps::PARETO), vec![false]);
        assert_eq!(discarding_pass(&r, &u, ConeEps::new(0.75).unwrap()), vec![true]);
    }

    #[test]
    fn protection_examples() {
        let out = mark_protected(vec![rec(1, &[0.0, 5.0]), rec(2, &[5.0, 0.0])]);
        assert!(out.iter().all(|r| r.protected));
        let out = mark_protected(vec![rec(7, &[1.0, 1.0])]);
        assert!(out[0].protected);
        let out = mark_protected(vec![rec(9, &[0.0, 0.0]), rec(4, &[0.0, 0.0]), rec(5, &[1.0, 1.0])]);
        assert_eq!(out.iter().map(|r| r.protected).collect::<Vec<_>>(), vec![false, true, false]);
    }

    #[test]
    fn protection_covers_upper_extremes() {
        let cand = |v: [f64; 2]| UpperCandidate {
            x: vec![0.0],
            raw: v.to_vec(),
            normalized: v.to_vec(),
        };
        let mut a = rec(1, &[0.0, 0.0]);
        let mut b = rec(2, &[0.5, 0.5]);
        let mut c = rec(3, &[0.6, 0.6]);
        a.set_candidates(vec![cand([0.1, 0.1])]);
        b.set_candidates(vec![cand([0.9, 0.2])]);
        c.set_candidates(vec![cand([0.2, 0.9])]);
        let out = mark_protected(vec![a, b, c]);
        assert!(out.iter().all(|r| r.protected));
    }
}
