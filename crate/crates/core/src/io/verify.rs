use std::fmt;
use std::path::Path;

use serde::Serialize;

use super::export::{read_boxes_csv, read_solutions_csv, RunSummary};
use crate::bounding::UpperBoundMode;
use crate::cone::eps_dominates;
use crate::error::Result;
use crate::oracle::{build_grid_oracle, default_resolution, MAX_ORACLE_DIM};
use crate::solver::{check_eps_efficient_images, hausdorff};

/// Upper limit on the solver/oracle Hausdorff distance, normalized units.
pub const HAUSDORFF_LIMIT: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Self { name, status, detail }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: CheckStatus::Skipped,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        write!(f, "{tag} {:<20} {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

/// Re-checks a finished run directory (as written by
/// [`super::export_results`]) from its files alone.
///
/// Always: feasibility and re-evaluation of every solution, and mutual
/// non-eps-dominance of the archive. With at most three variables a grid
/// oracle is built and the run is also checked for containment of the
/// oracle's eps-proper points in the live boxes, Hausdorff distance to that
/// front, and (midpoint mode) eps-efficiency with margin `w * ||L||`.
pub fn verify_run(dir: &Path, oracle_resolution: Option<usize>) -> Result<VerifyReport> {
    let summary = RunSummary::read(&dir.join("summary.json"))?;
    let rows = read_solutions_csv(&dir.join("solutions.csv"))?;
    let prob = summary.config.load_problem()?;
    let eps = summary.config.solver.proper_eps;
    let reference = &summary.reference;
    let mut report = VerifyReport::default();

    let mut infeasible = 0;
    let mut mismatched = 0;
    for r in &rows {
        let e = prob.evaluate(&r.x)?;
        if !prob.domain().contains(&r.x) || e.constraints.iter().any(|g| !(*g >= 0.0)) {
            infeasible += 1;
        }
        let norm = reference.normalize(&e.objectives)?;
        let close = norm.iter().zip(&r.f_norm).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        if e.objectives != r.f || !close {
            mismatched += 1;
        }
    }
    report.checks.push(CheckOutcome::new(
        "feasibility",
        infeasible == 0,
        format!("{infeasible} of {} solutions violate a constraint or bound", rows.len()),
    ));
    report.checks.push(CheckOutcome::new(
        "re-evaluation",
        mismatched == 0,
        format!("{mismatched} of {} rows disagree with F(x)", rows.len()),
    ));

    let mut dominated = 0;
    for (i, a) in rows.iter().enumerate() {
        if rows
            .iter()
            .enumerate()
            .any(|(j, b)| i != j && eps_dominates(&b.f_norm, &a.f_norm, eps).unwrap_or(false))
        {
            dominated += 1;
        }
    }
    report.checks.push(CheckOutcome::new(
        "non-dominance",
        dominated == 0,
        format!("{dominated} solutions are eps-dominated within the archive (eps = {})", eps.value()),
    ));

    if prob.dim() > MAX_ORACLE_DIM {
        for name in ["containment", "hausdorff", "eps-efficiency"] {
            report
                .checks
                .push(CheckOutcome::skipped(name, format!("no grid oracle for n = {}", prob.dim())));
        }
        return Ok(report);
    }

    let resolution = oracle_resolution.unwrap_or_else(|| default_resolution(prob.dim()));
    let oracle = build_grid_oracle(&prob, resolution)?;
    let proper = oracle.oracle_proper_front(eps.value(), Some(reference));

    let boxes = read_boxes_csv(&dir.join("boxes.csv"))?;
    let spacing = oracle.spacing();
    let missing = proper
        .iter()
        .filter(|(x, _)| {
            !boxes.iter().any(|(lo, hi)| {
                x.iter()
                    .zip(lo.iter().zip(hi))
                    .zip(spacing)
                    .all(|((v, (a, b)), s)| *v >= a - s && *v <= b + s)
            })
        })
        .count();
    report.checks.push(CheckOutcome::new(
        "containment",
        missing == 0,
        format!(
            "{missing} of {} oracle eps-proper points outside the {} live boxes",
            proper.len(),
            boxes.len()
        ),
    ));

    let solver: Vec<&[f64]> = rows.iter().map(|r| r.f_norm.as_slice()).collect();
    let front: Vec<&[f64]> = proper.iter().map(|(_, f)| f.as_slice()).collect();
    if solver.is_empty() || front.is_empty() {
        report
            .checks
            .push(CheckOutcome::skipped("hausdorff", "solver archive or oracle front is empty"));
    } else {
        let h = hausdorff(&solver, &front)?;
        report.checks.push(CheckOutcome::new(
            "hausdorff",
            h <= HAUSDORFF_LIMIT,
            format!("{h:.4} to the oracle eps-proper front (limit {HAUSDORFF_LIMIT})"),
        ));
    }

    if summary.config.solver.ub_mode == UpperBoundMode::Midpoint {
        let witnesses: Vec<Vec<f64>> = oracle
            .images()
            .iter()
            .map(|f| reference.normalize_unchecked(f))
            .collect();
        let margin = summary.efficiency_margin;
        let failed = rows
            .iter()
            .filter(|r| !check_eps_efficient_images(&r.f_norm, margin, &witnesses))
            .count();
        report.checks.push(CheckOutcome::new(
            "eps-efficiency",
            failed == 0,
            format!("{failed} of {} solutions fail with margin {margin:.4}", rows.len()),
        ));
    } else {
        report
            .checks
            .push(CheckOutcome::skipped("eps-efficiency", "guarantee holds in midpoint mode only"));
    }
    Ok(report)
}
