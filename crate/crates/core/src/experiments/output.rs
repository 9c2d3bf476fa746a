//! On-disk layout of experiment outputs.
//!
//! ```text
//! <dir>/results.csv
//! <dir>/histograms/<name>.csv
//! <dir>/meta.json
//! ```

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::classical::ClassicalOutput;
use super::report::CollapseReport;
use super::runner::{NamedHistogram, RunOutput};
use super::table::{write_csv, ResultTable};
use crate::error::{Error, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const META_FILE: &str = "meta.json";
pub const HISTOGRAM_DIR: &str = "histograms";

/// Creates `dir`; refuses a non-empty one unless `force` is set.
pub fn prepare_output_dir(dir: &Path, force: bool) -> Result<()> {
    if dir.exists() {
        if !dir.is_dir() {
            return Err(Error::InvalidParameter(format!(
                "{} exists and is not a directory",
                dir.display()
            )));
        }
        let non_empty = fs::read_dir(dir)?.next().is_some();
        if non_empty && !force {
            return Err(Error::InvalidParameter(format!(
                "output directory {} is not empty; use --force to overwrite",
                dir.display()
            )));
        }
        let stale = dir.join(HISTOGRAM_DIR);
        if stale.is_dir() {
            fs::remove_dir_all(stale)?;
        }
    }
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_histograms(dir: &Path, histograms: &[NamedHistogram]) -> Result<()> {
    let hdir = dir.join(HISTOGRAM_DIR);
    fs::create_dir_all(&hdir)?;
    for h in histograms {
        fs::write(hdir.join(format!("{}.csv", h.name)), h.histogram.to_csv()?)?;
    }
    Ok(())
}

pub fn write_run(dir: &Path, run: &RunOutput) -> Result<()> {
    fs::write(dir.join(RESULTS_FILE), run.table.to_csv()?)?;
    write_histograms(dir, &run.histograms)?;
    write_json(&dir.join(META_FILE), &run.meta)
}

pub fn write_classical(dir: &Path, out: &ClassicalOutput) -> Result<()> {
    fs::write(dir.join(RESULTS_FILE), write_csv(&out.rows)?)?;
    write_histograms(dir, &out.histograms)?;
    write_json(&dir.join(META_FILE), &out.meta)
}

/// `collapse.csv` with every normalized point and `deviation.csv` with the
/// largest gap per model.
pub fn write_report(dir: &Path, report: &CollapseReport) -> Result<()> {
    fs::write(dir.join("collapse.csv"), write_csv(&report.points)?)?;
    fs::write(dir.join("deviation.csv"), write_csv(&report.deviations)?)?;
    Ok(())
}

/// Reads `results.csv` from a run directory.
pub fn read_results(dir: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(dir.join(RESULTS_FILE))?;
    ResultTable::from_csv(&text)
}
