use std::path::{Path, PathBuf};

use super::export::write_lines;
use crate::error::{Error, Result};
use crate::oracle::GridOracle;
use crate::solver::RunResult;

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ")
}

/// Writes gnuplot-friendly, whitespace-delimited plot data into `dir`, all
/// in the run's final normalized units.
///
/// With two objectives this is `front.dat`: the oracle Pareto front in
/// columns 1-2 (when an oracle is given) and the solver's upper bounds in
/// the next two, shorter series padded with `NaN`. With three or more it is
/// `value_paths.dat`, one row per solution and one column per objective,
/// plus `oracle_value_paths.dat` for the oracle front.
pub fn emit_plot_data(dir: &Path, result: &RunResult, oracle: Option<&GridOracle>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let reference = &result.state.reference;
    let m = reference.dim();
    let solver: Vec<&[f64]> = result
        .state
        .upper_archive
        .iter()
        .map(|c| c.normalized.as_slice())
        .collect();
    let oracle_front: Option<Vec<Vec<f64>>> = oracle.map(|o| {
        o.pareto_front()
            .into_iter()
            .map(|(_, f)| reference.normalize_unchecked(&f))
            .collect()
    });

    if m == 2 {
        let path = dir.join("front.dat");
        let mut lines = Vec::new();
        match &oracle_front {
            Some(front) => {
                lines.push("# oracle_f1 oracle_f2 solver_f1 solver_f2".to_string());
                let pad = [f64::NAN; 2];
                for i in 0..front.len().max(solver.len()) {
                    let a = front.get(i).map_or(&pad[..], Vec::as_slice);
                    let b = solver.get(i).copied().unwrap_or(&pad[..]);
                    lines.push(format!("{} {}", join(a), join(b)));
                }
            }
            None => {
                lines.push("# solver_f1 solver_f2".to_string());
                lines.extend(solver.iter().map(|y| join(y)));
            }
        }
        write_lines(&path, lines)?;
        return Ok(vec![path]);
    }

    let head = format!(
        "# {}",
        (1..=m).map(|i| format!("f{i}")).collect::<Vec<_>>().join(" ")
    );
    let path = dir.join("value_paths.dat");
    write_lines(&path, std::iter::once(head.clone()).chain(solver.iter().map(|y| join(y))))?;
    let mut written = vec![path];
    if let Some(front) = oracle_front {
        let path = dir.join("oracle_value_paths.dat");
        write_lines(&path, std::iter::once(head).chain(front.iter().map(|y| join(y))))?;
        written.push(path);
    }
    Ok(written)
}
