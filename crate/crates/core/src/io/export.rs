use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::error::{Error, Result};
use crate::oracle::GridOracle;
use crate::problems::{ProblemDefinition, ReferencePoints};
use crate::solver::{IterationTrace, RunResult, TerminationReason};

/// Paths written by [`export_results`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExportedFiles {
    pub solutions: Option<PathBuf>,
    pub boxes: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub timings: PathBuf,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub params: BTreeMap<String, f64>,
    pub lipschitz: Vec<f64>,
    pub config: RunConfig,
    pub reason: TerminationReason,
    pub iterations: usize,
    pub final_w: f64,
    pub final_d: f64,
    pub lipschitz_norm: f64,
    /// `w * ||L||` in normalized units: the eps-efficiency margin of every
    /// midpoint solution.
    pub efficiency_margin: f64,
    pub reference: ReferencePoints,
    pub solutions: usize,
    pub live_boxes: usize,
    pub trace: Vec<IterationTrace>,
}

impl RunSummary {
    pub fn new(cfg: &RunConfig, prob: &ProblemDefinition, result: &RunResult) -> Self {
        let s = &result.state;
        Self {
            problem: prob.name().to_string(),
            n: prob.dim(),
            m: prob.n_objectives(),
            p: prob.n_constraints(),
            params: prob.params().clone(),
            lipschitz: prob.lipschitz_f().to_vec(),
            config: cfg.clone(),
            reason: result.reason,
            iterations: s.iteration,
            final_w: s.w,
            final_d: s.d,
            lipschitz_norm: s.lipschitz_norm,
            efficiency_margin: s.efficiency_margin(),
            reference: s.reference.clone(),
            solutions: s.upper_archive.len(),
            live_boxes: s.boxes.len(),
            trace: result.trace.clone(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// One row of `solutions.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRow {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub f_norm: Vec<f64>,
}

fn header<'a>(prefix: &'a str, count: usize, suffix: &'a str) -> impl Iterator<Item = String> + 'a {
    (1..=count).map(move |i| format!("{prefix}{i}{suffix}"))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse(format!("{}: {other:?}", path.display())),
    }
}

fn fmt(v: &f64) -> String {
    // shortest round-trip form; stable across platforms
    format!("{v:?}")
}

fn write_rows<I>(path: &Path, head: Vec<String>, rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv_writer(path)?;
    w.write_record(&head).map_err(|e| csv_error(path, e))?;
    for r in rows {
        w.write_record(&r).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes the final archive and run metadata into `dir`:
///
/// - `solutions.csv`: `x1..xn,f1..fm,f1_norm..fm_norm`, one row per archive point
/// - `boxes.csv`: live boxes with their bounds
/// - `summary.json`: configuration echo, termination, trace and final gaps
/// - `timings.csv`: wall-clock seconds per iteration
///
/// Everything except `timings.csv` depends only on the configuration, not on
/// the thread count or the machine.
pub fn export_results(
    dir: &Path,
    cfg: &RunConfig,
    prob: &ProblemDefinition,
    result: &RunResult,
) -> Result<ExportedFiles> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (n, m) = (prob.dim(), prob.n_objectives());
    let state = &result.state;
    let mut out = ExportedFiles {
        timings: dir.join("timings.csv"),
        ..Default::default()
    };

    if cfg.export.solutions {
        let path = dir.join("solutions.csv");
        let head = solution_header(n, m);
        let rows = state.upper_archive.iter().map(|c| {
            c.x.iter()
                .chain(&c.raw)
                .chain(&c.normalized)
                .map(fmt)
                .collect()
        });
        write_rows(&path, head, rows)?;
        out.solutions = Some(path);
    }

    if cfg.export.boxes {
        let path = dir.join("boxes.csv");
        let head = ["id", "parent", "depth"]
            .into_iter()
            .map(String::from)
            .chain(header("lo", n, ""))
            .chain(header("hi", n, ""))
            .chain(header("lb", m, ""))
            .chain(["protected".to_string()])
            .collect();
        let rows = state.boxes.iter().zip(&state.records).map(|(b, r)| {
            let mut row = vec![
                b.id().to_string(),
                b.parent_id().map_or(String::new(), |p| p.to_string()),
                b.depth().to_string(),
            ];
            row.extend(b.lower().iter().chain(b.upper()).chain(&r.lower).map(fmt));
            row.push(r.protected.to_string());
            row
        });
        write_rows(&path, head, rows)?;
        out.boxes = Some(path);
    }

    if cfg.export.summary {
        let path = dir.join("summary.json");
        let text = serde_json::to_string_pretty(&RunSummary::new(cfg, prob, result))?;
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
        out.summary = Some(path);
    }

    write_rows(
        &out.timings,
        vec!["iteration".into(), "seconds".into()],
        result
            .timings
            .iter()
            .enumerate()
            .map(|(i, t)| vec![(i + 1).to_string(), fmt(t)]),
    )?;
    Ok(out)
}

/// Writes `(x, F(x))` pairs (an oracle front, say) in the `solutions.csv`
/// format, normalized with `reference`.
pub fn export_front(
    path: &Path,
    n: usize,
    m: usize,
    front: &[(Vec<f64>, Vec<f64>)],
    reference: &ReferencePoints,
) -> Result<()> {
    let rows = front.iter().map(|(x, f)| {
        let norm = reference.normalize_unchecked(f);
        x.iter().chain(f).chain(&norm).map(fmt).collect()
    });
    write_rows(path, solution_header(n, m), rows)
}

/// Writes the oracle's Pareto front to `pareto.csv` and, for each eps, its
/// eps-proper subset to `proper_<eps>.csv`. Both are normalized with the
/// ideal and nadir of the oracle Pareto front.
pub fn export_oracle(dir: &Path, prob: &ProblemDefinition, oracle: &GridOracle, eps: &[f64]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let (n, m) = (prob.dim(), prob.n_objectives());
    let front = oracle.pareto_front();
    let images: Vec<&[f64]> = front.iter().map(|(_, f)| f.as_slice()).collect();
    let reference = if images.is_empty() {
        ReferencePoints::identity(m)
    } else {
        crate::solver::reference_from_images(&images)
    };
    let mut written = vec![dir.join("pareto.csv")];
    export_front(&written[0], n, m, &front, &reference)?;
    for &e in eps {
        let path = dir.join(format!("proper_{e}.csv"));
        let proper: Vec<(Vec<f64>, Vec<f64>)> = oracle
            .proper_indices(e, Some(&reference))
            .into_iter()
            .map(|i| (oracle.points()[i].clone(), oracle.images()[i].clone()))
            .collect();
        export_front(&path, n, m, &proper, &reference)?;
        written.push(path);
    }
    Ok(written)
}

fn solution_header(n: usize, m: usize) -> Vec<String> {
    header("x", n, "")
        .chain(header("f", m, ""))
        .chain(header("f", m, "_norm"))
        .collect()
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let head: Vec<String> = r
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let row = rec
            .iter()
            .map(|s| match s {
                "" => Ok(f64::NAN),
                "true" => Ok(1.0),
                "false" => Ok(0.0),
                s => s
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("{}: bad number `{s}`", path.display()))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((head, rows))
}

/// Reads a `solutions.csv` back. Column counts come from the header.
pub fn read_solutions_csv(path: &Path) -> Result<Vec<SolutionRow>> {
    let (head, rows) = read_table(path)?;
    let n = head.iter().filter(|h| h.starts_with('x')).count();
    let m = head.iter().filter(|h| h.ends_with("_norm")).count();
    if n + 2 * m != head.len() {
        return Err(Error::Parse(format!("{}: unexpected header {head:?}", path.display())));
    }
    Ok(rows
        .into_iter()
        .map(|r| SolutionRow {
            x: r[..n].to_vec(),
            f: r[n..n + m].to_vec(),
            f_norm: r[n + m..].to_vec(),
        })
        .collect())
}

/// Reads `boxes.csv` back as `(lower, upper)` pairs.
pub fn read_boxes_csv(path: &Path) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let (head, rows) = read_table(path)?;
    let n = head.iter().filter(|h| h.starts_with("lo")).count();
    Ok(rows
        .into_iter()
        .map(|r| (r[3..3 + n].to_vec(), r[3 + n..3 + 2 * n].to_vec()))
        .collect())
}

/// Writes `lines` to `path` with a trailing newline each.
pub(super) fn write_lines(path: &Path, lines: impl IntoIterator<Item = String>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for l in lines {
        writeln!(w, "{l}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
