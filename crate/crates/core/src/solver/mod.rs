//! The breadth-first branch-and-bound driver.
//!
//! Every iteration bisects all live boxes, drops the provably infeasible
//! ones, bounds the rest, runs the upper-bound provider on the boxes whose
//! lower bounds survive the cone filter, and discards every unprotected box
//! whose lower bound is eps-dominated by the new upper archive. Lower bounds,
//! upper bounds, the gap and `tol_eps` are all in normalized objective units.
//!
//! Per-box work runs on a dedicated rayon pool. Parallel maps collect in box
//! order and per-box random streams are keyed by box id, so results do not
//! depend on the thread count.

mod discard;
mod metrics;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use discard::{discarding_pass, mark_protected};
pub use metrics::{check_eps_efficient, check_eps_efficient_images, directed_hausdorff, hausdorff};

use crate::bounding::{
    bound_box, feasibility_test, midpoint_upper_bound, BoundRecord, FeasibilityStatus, UpperBoundMode,
    UpperCandidate,
};
use crate::cone::{non_eps_dominated_indices, ConeEps};
use crate::error::{check_dims, Error, Result};
use crate::geometry::{IdCounter, SearchBox};
use crate::moea::{run_mini_moea, MiniMoeaConfig};
use crate::problems::{update_reference_points, ProblemDefinition, ReferencePoints};

/// Gap value before the first iteration.
pub const INITIAL_GAP: f64 = 1e6;
pub const DEFAULT_MAX_LIVE_BOXES: usize = 1 << 20;
pub const DEFAULT_REFERENCE_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub proper_eps: ConeEps,
    /// Gap tolerance, normalized objective units.
    pub tol_eps: f64,
    /// Box-diameter tolerance, decision-space units.
    pub tol_delta: f64,
    pub max_iterations: usize,
    pub ub_mode: UpperBoundMode,
    pub moea: MiniMoeaConfig,
    pub threads: usize,
    pub seed: u64,
    pub max_live_boxes: usize,
    /// Starting ideal/nadir. Estimated by sampling when absent.
    pub reference: Option<ReferencePoints>,
    pub reference_samples: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            proper_eps: ConeEps::new(0.75).expect("valid"),
            tol_eps: 0.01,
            tol_delta: 0.01,
            max_iterations: 100,
            ub_mode: UpperBoundMode::Moea,
            moea: MiniMoeaConfig::default(),
            threads: default_threads(),
            seed: 0,
            max_live_boxes: DEFAULT_MAX_LIVE_BOXES,
            reference: None,
            reference_samples: DEFAULT_REFERENCE_SAMPLES,
        }
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_eps > 0.0 && self.tol_eps.is_finite()) {
            return Err(Error::InvalidConfig(format!("tol_eps must be positive, got {}", self.tol_eps)));
        }
        if !(self.tol_delta > 0.0 && self.tol_delta.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol_delta must be positive, got {}",
                self.tol_delta
            )));
        }
        if self.threads == 0 {
            return Err(Error::InvalidConfig("threads must be at least 1".into()));
        }
        if self.max_live_boxes == 0 {
            return Err(Error::InvalidConfig("max_live_boxes must be at least 1".into()));
        }
        if self.reference.is_none() && self.reference_samples == 0 {
            return Err(Error::InvalidConfig(
                "reference_samples must be positive when no reference is given".into(),
            ));
        }
        if let Some(r) = &self.reference {
            ReferencePoints::new(r.ideal().to_vec(), r.nadir().to_vec())?;
        }
        self.moea.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminationReason {
    Converged,
    MaxIterations,
    Degenerate,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIterations => "max-iterations",
            Self::Degenerate => "degenerate",
        }
    }
}

impl std::fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A lower-archive entry: a normalized lower bound and its box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerEntry {
    pub box_id: u64,
    pub bound: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverState {
    pub iteration: usize,
    /// Live boxes after the last discarding pass.
    pub boxes: Vec<SearchBox>,
    /// Bounds of the live boxes, aligned with `boxes`.
    pub records: Vec<BoundRecord>,
    pub lower_archive: Vec<LowerEntry>,
    /// Upper archive with preimages, normalized with `reference`.
    pub upper_archive: Vec<UpperCandidate>,
    /// Every feasible image found so far, reduced to its non-eps-dominated
    /// part. Used only by the discarding test.
    pub discard_archive: Vec<UpperCandidate>,
    pub reference: ReferencePoints,
    /// Largest live-box diameter of the last bisection.
    pub w: f64,
    /// Directed Hausdorff gap from the upper to the lower archive.
    pub d: f64,
    /// Norm of the normalized Lipschitz vector used in the last iteration.
    pub lipschitz_norm: f64,
}

impl SolverState {
    /// `w * |L|`: every returned solution is efficient up to this margin in
    /// normalized units.
    pub fn efficiency_margin(&self) -> f64 {
        self.w * self.lipschitz_norm
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub boxes_bisected: usize,
    pub infeasible_removed: usize,
    pub lower_archive: usize,
    pub upper_archive: usize,
    pub discard_archive: usize,
    pub discarded: usize,
    pub live_boxes: usize,
    pub w: f64,
    pub d: f64,
    pub lipschitz_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub state: SolverState,
    pub trace: Vec<IterationTrace>,
    /// Wall time per iteration in seconds, kept apart from `trace` so that
    /// everything else is reproducible bit for bit.
    pub timings: Vec<f64>,
    pub reason: TerminationReason,
}

/// Everything the driver knows at the end of one iteration.
#[derive(Debug)]
pub struct IterationView<'a> {
    pub iteration: usize,
    /// All boxes produced by this iteration's bisection.
    pub bisected: &'a [SearchBox],
    pub infeasible: &'a [SearchBox],
    /// Bounds of the boxes that passed the feasibility test.
    pub records: &'a [BoundRecord],
    pub discarded: &'a [SearchBox],
    pub live: &'a [SearchBox],
    pub lower_archive: &'a [LowerEntry],
    pub upper_archive: &'a [UpperCandidate],
    pub discard_archive: &'a [UpperCandidate],
    /// Reference the bounds of this iteration were normalized with.
    pub reference: &'a ReferencePoints,
    pub w: f64,
    pub d: f64,
    pub lipschitz_norm: f64,
}

pub fn solve(prob: &ProblemDefinition, cfg: &SolverConfig) -> Result<RunResult> {
    solve_with(prob, cfg, |_| {})
}

/// [`solve`] with a callback invoked once per iteration.
pub fn solve_with<F>(prob: &ProblemDefinition, cfg: &SolverConfig, mut observe: F) -> Result<RunResult>
where
    F: FnMut(&IterationView<'_>),
{
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start thread pool: {e}")))?;
    let eps = cfg.proper_eps;
    let m = prob.n_objectives();

    let mut reference = match &cfg.reference {
        Some(r) => {
            check_dims(m, r.dim())?;
            r.clone()
        }
        None => initial_reference(prob, cfg, &pool)?,
    };

    let root = SearchBox::new(prob.domain().lower().to_vec(), prob.domain().upper().to_vec(), 0)?;
    let mut ids = IdCounter::starting_at(1);
    let mut state = SolverState {
        iteration: 0,
        w: root.diameter(),
        boxes: vec![root],
        records: Vec::new(),
        lower_archive: Vec::new(),
        upper_archive: Vec::new(),
        discard_archive: Vec::new(),
        reference: reference.clone(),
        d: INITIAL_GAP,
        lipschitz_norm: norm(&reference.scale_lipschitz(prob.lipschitz_f())),
    };
    let mut trace = Vec::new();
    let mut timings = Vec::new();
    let keep_going = |s: &SolverState| s.d > cfg.tol_eps || s.w > cfg.tol_delta;

    let reason = loop {
        if !keep_going(&state) {
            break TerminationReason::Converged;
        }
        if state.iteration >= cfg.max_iterations {
            break TerminationReason::MaxIterations;
        }
        let started = Instant::now();
        let k = state.iteration + 1;

        let mut bisected = Vec::with_capacity(state.boxes.len() * 2);
        for b in &state.boxes {
            let (lo, hi) = b.bisect(&mut ids)?;
            bisected.push(lo);
            bisected.push(hi);
        }
        if bisected.len() > cfg.max_live_boxes {
            return Err(Error::BoxLimit {
                count: bisected.len(),
                cap: cfg.max_live_boxes,
            });
        }
        let w = bisected.iter().map(SearchBox::diameter).fold(0.0, f64::max);

        let status: Vec<FeasibilityStatus> =
            pool.install(|| bisected.par_iter().map(|b| feasibility_test(prob, b)).collect());
        let (mut candidates, mut infeasible) = (Vec::new(), Vec::new());
        for (b, s) in bisected.iter().zip(&status) {
            if *s == FeasibilityStatus::ProvablyInfeasible {
                infeasible.push(b.clone());
            } else {
                candidates.push(b.clone());
            }
        }

        let scaled = reference.scale_lipschitz(prob.lipschitz_f());
        let lipschitz_norm = norm(&scaled);

        if candidates.is_empty() {
            observe(&IterationView {
                iteration: k,
                bisected: &bisected,
                infeasible: &infeasible,
                records: &[],
                discarded: &[],
                live: &[],
                lower_archive: &[],
                upper_archive: &[],
                discard_archive: &state.discard_archive,
                reference: &reference,
                w,
                d: state.d,
                lipschitz_norm,
            });
            trace.push(IterationTrace {
                iteration: k,
                boxes_bisected: bisected.len(),
                infeasible_removed: infeasible.len(),
                lower_archive: 0,
                upper_archive: 0,
                discard_archive: state.discard_archive.len(),
                discarded: 0,
                live_boxes: 0,
                w,
                d: state.d,
                lipschitz_norm,
            });
            timings.push(started.elapsed().as_secs_f64());
            state.iteration = k;
            state.w = w;
            state.boxes.clear();
            state.records.clear();
            state.lower_archive.clear();
            state.lipschitz_norm = lipschitz_norm;
            break TerminationReason::Degenerate;
        }

        let (lowers, midpoints): (Vec<Vec<f64>>, Vec<Option<UpperCandidate>>) = pool
            .install(|| {
                candidates
                    .par_iter()
                    .map(|b| bound_box(prob, b, &reference, &scaled))
                    .collect::<Result<Vec<_>>>()
            })?
            .into_iter()
            .unzip();
        let lower_idx = non_eps_dominated_indices(&lowers, eps, 0.0);
        let lower_archive: Vec<LowerEntry> = lower_idx
            .iter()
            .map(|&i| LowerEntry {
                box_id: candidates[i].id(),
                bound: lowers[i].clone(),
            })
            .collect();

        let found: Vec<Vec<UpperCandidate>> = pool.install(|| {
            lower_idx
                .par_iter()
                .map(|&i| upper_candidates(prob, &candidates[i], &reference, cfg))
                .collect::<Result<_>>()
        })?;

        let mut records: Vec<BoundRecord> = candidates
            .iter()
            .zip(lowers)
            .map(|(b, l)| BoundRecord::new(b.id(), l))
            .collect();
        let mut pooled: Vec<(usize, UpperCandidate)> = Vec::new();
        for (&i, cands) in lower_idx.iter().zip(found) {
            if !cands.is_empty() {
                records[i].feasible_status = FeasibilityStatus::HasFeasiblePoint;
            }
            pooled.extend(cands.into_iter().map(|c| (i, c)));
        }
        let upper_idx = {
            let images: Vec<&[f64]> = pooled.iter().map(|(_, c)| c.normalized.as_slice()).collect();
            non_eps_dominated_indices(&images, eps, 0.0)
        };
        let mut upper_archive = Vec::with_capacity(upper_idx.len());
        for &j in &upper_idx {
            let (i, c) = &pooled[j];
            records[*i].upper_candidates.push(c.clone());
            upper_archive.push(c.clone());
        }

        let records = mark_protected(records);

        let mut known: Vec<UpperCandidate> = std::mem::take(&mut state.discard_archive);
        for c in &mut known {
            c.renormalize(&reference);
        }
        known.extend(pooled.iter().map(|(_, c)| c.clone()));
        known.extend(midpoints.into_iter().flatten());
        let discard_archive: Vec<UpperCandidate> = {
            let images: Vec<&[f64]> = known.iter().map(|c| c.normalized.as_slice()).collect();
            let keep = non_eps_dominated_indices(&images, eps, 0.0);
            keep.into_iter().map(|i| known[i].clone()).collect()
        };
        let flags: Vec<bool> = {
            let images: Vec<&[f64]> = discard_archive.iter().map(|c| c.normalized.as_slice()).collect();
            let mapped = discard::map_archive(&images, eps);
            pool.install(|| records.par_iter().map(|r| discard::discards(r, &mapped, eps)).collect())
        };
        let (mut live, mut discarded, mut live_records) = (Vec::new(), Vec::new(), Vec::new());
        for ((b, r), gone) in candidates.into_iter().zip(records.iter()).zip(&flags) {
            if *gone {
                discarded.push(b);
            } else {
                live.push(b);
                live_records.push(r.clone());
            }
        }

        let d = if upper_archive.is_empty() {
            state.d
        } else {
            let u: Vec<&[f64]> = upper_archive.iter().map(|c| c.normalized.as_slice()).collect();
            let l: Vec<&[f64]> = lower_archive.iter().map(|e| e.bound.as_slice()).collect();
            directed_hausdorff(&u, &l)?
        };

        observe(&IterationView {
            iteration: k,
            bisected: &bisected,
            infeasible: &infeasible,
            records: &records,
            discarded: &discarded,
            live: &live,
            lower_archive: &lower_archive,
            upper_archive: &upper_archive,
            discard_archive: &discard_archive,
            reference: &reference,
            w,
            d,
            lipschitz_norm,
        });
        trace.push(IterationTrace {
            iteration: k,
            boxes_bisected: bisected.len(),
            infeasible_removed: infeasible.len(),
            lower_archive: lower_archive.len(),
            upper_archive: upper_archive.len(),
            discard_archive: discard_archive.len(),
            discarded: discarded.len(),
            live_boxes: live.len(),
            w,
            d,
            lipschitz_norm,
        });

        let archive_empty = upper_archive.is_empty();
        state = SolverState {
            iteration: k,
            boxes: live,
            records: live_records,
            lower_archive,
            upper_archive: if archive_empty {
                std::mem::take(&mut state.upper_archive)
            } else {
                upper_archive
            },
            discard_archive,
            reference: reference.clone(),
            w,
            d,
            lipschitz_norm,
        };
        // the reference only moves if another iteration follows, so the
        // returned archives are always in the units they were filtered in
        if keep_going(&state) && k < cfg.max_iterations {
            let nadir_from: Vec<Vec<f64>> = if archive_empty {
                Vec::new()
            } else {
                state.upper_archive.iter().map(|c| c.raw.clone()).collect()
            };
            let ideal_from: Vec<Vec<f64>> = state.discard_archive.iter().map(|c| c.raw.clone()).collect();
            reference = update_reference_points(&reference, &ideal_from, &nadir_from);
        }
        timings.push(started.elapsed().as_secs_f64());
    };

    state.reference = reference;
    for c in state.upper_archive.iter_mut().chain(state.discard_archive.iter_mut()) {
        c.renormalize(&state.reference);
    }
    Ok(RunResult {
        state,
        trace,
        timings,
        reason,
    })
}

fn upper_candidates(
    prob: &ProblemDefinition,
    b: &SearchBox,
    reference: &ReferencePoints,
    cfg: &SolverConfig,
) -> Result<Vec<UpperCandidate>> {
    match cfg.ub_mode {
        UpperBoundMode::Midpoint => Ok(midpoint_upper_bound(prob, b, reference)?.into_iter().collect()),
        UpperBoundMode::Moea => run_mini_moea(prob, b, reference, &cfg.moea.for_box(cfg.seed, b.id())),
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Ideal and nadir estimated from a uniform sample of the domain plus one
/// decomposition sweep over the whole domain. The ideal is the componentwise
/// minimum over feasible images and the nadir the componentwise maximum over
/// the nondominated ones. Falls back to all sampled images when none is
/// feasible.
pub fn initial_reference(
    prob: &ProblemDefinition,
    cfg: &SolverConfig,
    pool: &rayon::ThreadPool,
) -> Result<ReferencePoints> {
    let domain = prob.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5EED_0F_1DEA1);
    let mut points = vec![domain.midpoint()];
    for _ in 0..cfg.reference_samples {
        points.push(
            domain
                .lower()
                .iter()
                .zip(domain.upper())
                .map(|(&lo, &hi)| if hi > lo { rng.gen_range(lo..=hi) } else { lo })
                .collect(),
        );
    }
    let evals = pool.install(|| {
        points
            .par_iter()
            .map(|x| prob.evaluate(x))
            .collect::<Result<Vec<_>>>()
    })?;
    let feasible: Vec<&[f64]> = evals
        .iter()
        .filter(|e| e.feasible)
        .map(|e| e.objectives.as_slice())
        .collect();
    let feasible_count = feasible.len();
    let images: Vec<&[f64]> = if feasible.is_empty() {
        evals.iter().map(|e| e.objectives.as_slice()).collect()
    } else {
        feasible
    };
    let first = trim_nadir(&images, reference_from_images(&images));
    if feasible_count == 0 {
        return Ok(first);
    }
    // uniform samples sit far from the front on most problems, so a short
    // decomposition run over the whole domain pulls the nadir toward it
    let sweep = MiniMoeaConfig {
        population: REFERENCE_SWEEP.0,
        generations: REFERENCE_SWEEP.1,
        neighborhood: 8,
        seed: cfg.seed ^ 0x0F_F1DE,
        ..MiniMoeaConfig::default()
    };
    let extra = run_mini_moea(prob, domain, &first, &sweep)?;
    let mut all = images;
    all.extend(extra.iter().map(|c| c.raw.as_slice()));
    Ok(trim_nadir(&all, reference_from_images(&all)))
}

/// Population and generation count of the reference sweep.
const REFERENCE_SWEEP: (usize, usize) = (48, 60);

/// Cone parameter used to drop weakly efficient samples before taking the
/// initial nadir.
const NADIR_TRIM_EPS: f64 = 0.1;

/// Sparse samples near a weakly efficient edge survive Pareto filtering with
/// huge values in the other objectives and would inflate the nadir for the
/// whole run. The nadir is retaken over the samples that stay
/// non-dominated under a narrow cone in the first-pass normalization.
fn trim_nadir(images: &[&[f64]], first: ReferencePoints) -> ReferencePoints {
    let scaled: Vec<Vec<f64>> = images.iter().map(|y| first.normalize_unchecked(y)).collect();
    let keep = non_eps_dominated_indices(&scaled, ConeEps::new(NADIR_TRIM_EPS).expect("valid"), 0.0);
    let mut nadir = first.ideal().to_vec();
    for &i in &keep {
        for (n, v) in nadir.iter_mut().zip(images[i]) {
            *n = n.max(*v);
        }
    }
    for (n, (z, full)) in nadir.iter_mut().zip(first.ideal().iter().zip(first.nadir())) {
        if !(*n > *z) {
            *n = *full;
        }
    }
    ReferencePoints::new(first.ideal().to_vec(), nadir).unwrap_or(first)
}

/// Ideal from all images, nadir from their nondominated subset. A component
/// with zero spread gets a unit-scale range instead.
pub fn reference_from_images(images: &[&[f64]]) -> ReferencePoints {
    let m = images[0].len();
    let front = non_eps_dominated_indices(images, ConeEps::PARETO, 0.0);
    let mut ideal = vec![f64::INFINITY; m];
    let mut nadir = vec![f64::NEG_INFINITY; m];
    for y in images {
        for (z, v) in ideal.iter_mut().zip(y.iter()) {
            *z = z.min(*v);
        }
    }
    for &i in &front {
        for (n, v) in nadir.iter_mut().zip(images[i]) {
            *n = n.max(*v);
        }
    }
    for (z, n) in ideal.iter().zip(nadir.iter_mut()) {
        if !(*n > *z) {
            *n = z + z.abs().max(1.0);
        }
    }
    ReferencePoints::new(ideal, nadir).expect("ideal below nadir by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::get_problem;
    use std::collections::BTreeMap;

    fn mop() -> ProblemDefinition {
        get_problem("MOP", &BTreeMap::new()).unwrap()
    }

    fn cfg(eps: f64, tol: f64, mode: UpperBoundMode) -> SolverConfig {
        SolverConfig {
            proper_eps: ConeEps::new(eps).unwrap(),
            tol_eps: tol,
            tol_delta: tol,
            ub_mode: mode,
            threads: 2,
            ..Default::default()
        }
    }

    #[test]
    fn zero_iterations_returns_domain() {
        let c = SolverConfig {
            max_iterations: 0,
            ..cfg(0.0, 0.05, UpperBoundMode::Midpoint)
        };
        let r = solve(&mop(), &c).unwrap();
        assert_eq!(r.reason, TerminationReason::MaxIterations);
        assert_eq!(r.state.boxes.len(), 1);
        assert_eq!(r.state.boxes[0].lower(), mop().domain().lower());
        assert!(r.trace.is_empty());
    }

    #[test]
    fn config_validation() {
        let mut c = SolverConfig::default();
        assert!(c.validate().is_ok());
        c.tol_eps = 0.0;
        assert!(c.validate().is_err());
        let c = SolverConfig {
            tol_delta: -1.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn archives_are_consistent_each_iteration() {
        let eps = ConeEps::new(0.75).unwrap();
        let p = mop();
        let mut last_w = f64::INFINITY;
        let r = solve_with(&p, &cfg(0.75, 0.1, UpperBoundMode::Moea), |v| {
            assert!(v.w < last_w);
            last_w = v.w;
            for (i, a) in v.upper_archive.iter().enumerate() {
                assert!(p.evaluate(&a.x).unwrap().feasible);
                for (j, b) in v.upper_archive.iter().enumerate() {
                    if i != j {
                        assert!(!crate::cone::eps_dominates(&a.normalized, &b.normalized, eps).unwrap());
                    }
                }
            }
            for a in v.lower_archive {
                for b in v.lower_archive {
                    assert!(!crate::cone::eps_dominates(&a.bound, &b.bound, eps).unwrap());
                }
            }
            assert_eq!(v.live.len() + v.discarded.len() + v.infeasible.len(), v.bisected.len());
        })
        .unwrap();
        assert_eq!(r.reason, TerminationReason::Converged);
        assert!(!r.state.upper_archive.is_empty());
    }

    #[test]
    fn box_cap_is_enforced() {
        let c = SolverConfig {
            max_live_boxes: 8,
            ..cfg(0.0, 1e-6, UpperBoundMode::Midpoint)
        };
        assert!(matches!(solve(&mop(), &c), Err(Error::BoxLimit { cap: 8, .. })));
    }

    #[test]
    fn infeasible_everywhere_is_degenerate() {
        let p = ProblemDefinition::builder("nowhere", vec![0.0], vec![1.0])
            .objectives(2, |x, f| {
                f[0] = x[0];
                f[1] = 1.0 - x[0];
            })
            .constraints(1, |x, g| g[0] = -1.0 - x[0])
            .lipschitz(vec![1.0, 1.0])
            .constraint_lipschitz(vec![1.0])
            .build()
            .unwrap();
        let r = solve(&p, &cfg(0.0, 0.01, UpperBoundMode::Midpoint)).unwrap();
        assert_eq!(r.reason, TerminationReason::Degenerate);
        assert!(r.state.boxes.is_empty());
        assert!(r.state.upper_archive.is_empty());
    }

    #[test]
    fn result_ignores_thread_count() {
        let p = mop();
        let a = solve(&p, &SolverConfig { threads: 1, ..cfg(0.75, 0.1, UpperBoundMode::Moea) }).unwrap();
        let b = solve(&p, &SolverConfig { threads: 4, ..cfg(0.75, 0.1, UpperBoundMode::Moea) }).unwrap();
        assert_eq!(a.state, b.state);
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn reference_from_images_handles_flat_objective() {
        let imgs: Vec<&[f64]> = vec![&[1.0, 2.0], &[1.0, 3.0]];
        let r = reference_from_images(&imgs);
        assert_eq!(r.ideal(), &[1.0, 2.0]);
        assert_eq!(r.nadir(), &[2.0, 2.0 + 2.0]);
    }
}
